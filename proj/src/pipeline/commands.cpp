#include "thermoweld/pipeline/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "thermoweld/io/checkpoint.hpp"
#include "thermoweld/io/film_io.hpp"
#include "thermoweld/io/png_io.hpp"
#include "thermoweld/preprocess/preprocess.hpp"

namespace tw {

namespace {

json provenance(const json& config, std::uint64_t seed) {
    return json{{"tool_version", kToolVersion},
                {"config_hash", config_hash(config)},
                {"seed", seed}};
}

std::string image_file_name(const LabeledImage& img) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s_f%03d_c%02d.png", img.film_id.c_str(), img.frame_index,
                  img.copy_index);
    return buf;
}

}  // namespace

std::vector<fs::path> list_tfilm_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".tfilm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

void cmd_simulate(const SimulateOptions& opt) {
    opt.mix.validate();
    if (opt.films < 0) throw std::invalid_argument("simulate: --films must be >= 0");
    fs::create_directories(opt.out_dir);

    const json cfg_json{{"films", opt.films},
                        {"seed", opt.seed},
                        {"mix", {opt.mix.good, opt.mix.bad, opt.mix.medium}}};
    json films = json::array();
    for_each_generated_film(
        opt.films, opt.mix, opt.seed, opt.ranges, default_material(), default_render_params(),
        [&](GeneratedFilm&& g) {
            const std::string name = g.film.specimen_id + ".tfilm";
            write_tfilm(opt.out_dir / name, g.film);
            FilmManifestEntry entry;
            entry.file = name;
            entry.specimen = g.specimen;
            entry.material = g.material;
            entry.pulse = g.pulse;
            entry.film_seed = g.film_seed;
            entry.saturation_fraction = g.stats.saturation_fraction();
            films.push_back(film_entry_to_json(entry));
        });

    json manifest = provenance(cfg_json, opt.seed);
    manifest["master_seed"] = opt.seed;
    manifest["count"] = opt.films;
    manifest["class_mix"] = {{"good", opt.mix.good}, {"bad", opt.mix.bad}, {"medium", opt.mix.medium}};
    manifest["films"] = std::move(films);
    write_json_file(opt.out_dir / "films_manifest.json", manifest);
}

void cmd_curve(const CurveOptions& opt) {
    const ThermalFilm film = read_tfilm(opt.film_path);
    const IntensityCurve curve = mean_intensity_curve(film);
    write_text_file(opt.out_csv, curve_to_csv(curve));
}

void cmd_normalize(const NormalizeOptions& opt) {
    const ThermalFilm film = read_tfilm(opt.in_path);
    const int t_norm = opt.t_norm > 0 ? opt.t_norm : film.n_frames;
    const NormalizedFilm nf = normalize_film(film, opt.t0_lo, opt.t0_hi, t_norm, opt.eps);
    write_nfilm(opt.out_path, nf);
}

PrepareSummary cmd_prepare(const PrepareOptions& opt) {
    const FilterSpec filter = builtin_filter(opt.filter_id);
    if (opt.multiplier < 1) throw std::invalid_argument("prepare: --multiplier must be >= 1");
    const std::vector<fs::path> files = list_tfilm_files(opt.films_dir);
    if (files.empty()) throw DataError("prepare: no .tfilm files in " + opt.films_dir.string());

    fs::create_directories(opt.out_dir / "images");

    // Pass 1: per-film image extraction (originals only), labels for the split.
    std::vector<FilmRef> refs;
    std::vector<std::vector<LabeledImage>> per_film_images;
    for (const fs::path& path : files) {
        const ThermalFilm film = read_tfilm(path);
        const int t_norm = opt.t_norm > 0 ? opt.t_norm : film.n_frames;
        const NormalizedFilm nf = normalize_film(film, opt.t0_lo, opt.t0_hi, t_norm, opt.eps);
        FilmImageSet set =
            extract_film_images(film, nf, {filter}, opt.frames_per_film);
        refs.push_back({set.film_id, set.label});
        per_film_images.push_back(std::move(set.by_filter[filter.id]));
    }
    std::size_t n_selected = 0;
    for (const auto& v : per_film_images) n_selected += v.size();
    if (n_selected == 0) throw DataError("no images selected");

    const DatasetSplit split =
        split_films(refs, opt.train_ratio, opt.val_ratio, opt.test_ratio, opt.seed);
    if (opt.val_ratio == 0 || opt.test_ratio == 0)
        std::fprintf(stderr, "warning: empty val/test split requested\n");

    const std::set<std::string> train_ids(split.train.begin(), split.train.end());
    const std::set<std::string> val_ids(split.val.begin(), split.val.end());

    AugmentConfig aug_cfg;
    bool do_augment = opt.augment != "none" && opt.multiplier > 1;
    if (opt.augment == "positional")
        aug_cfg.policy = AugPolicy::positional;
    else if (opt.augment == "color")
        aug_cfg.policy = AugPolicy::color;
    else if (opt.augment == "positional+color")
        aug_cfg.policy = AugPolicy::positional_color;
    else if (opt.augment != "none")
        throw std::invalid_argument("prepare: unknown augmentation policy: " + opt.augment);

    // Shared PCA basis from a sample of the training originals.
    PcaColorBasis basis;
    if (do_augment) {
        std::vector<const Image8*> sample;
        for (std::size_t i = 0; i < per_film_images.size(); ++i)
            if (train_ids.count(refs[i].film_id))
                for (std::size_t k = 0; k < per_film_images[i].size(); k += 4)
                    sample.push_back(&per_film_images[i][k].pixels);
        if (!sample.empty()) basis = pca_color_basis(sample);
        else do_augment = false;
    }

    PrepareSummary summary;
    json images = json::array();
    auto emit = [&](const LabeledImage& img, const std::string& which) {
        const std::string name = image_file_name(img);
        write_png_rgb8(opt.out_dir / "images" / name, img.pixels);
        DatasetImageEntry e;
        e.path = "images/" + name;
        e.label = img.label;
        e.film_id = img.film_id;
        e.frame_index = img.frame_index;
        e.copy_index = img.copy_index;
        for (const auto& step : img.aug_chain) e.aug_chain.push_back(step.op);
        e.display_lo = img.display_lo;
        e.display_hi = img.display_hi;
        e.split = which;
        images.push_back(dataset_image_to_json(e));
        summary.counts[which][static_cast<int>(img.label)] += 1;
        ++summary.total;
    };

    for (std::size_t i = 0; i < per_film_images.size(); ++i) {
        const std::string which = train_ids.count(refs[i].film_id) ? "train"
                                  : val_ids.count(refs[i].film_id) ? "val"
                                                                   : "test";
        if (which == "train" && do_augment) {
            const std::vector<LabeledImage> expanded =
                augment(per_film_images[i], aug_cfg, opt.multiplier, opt.seed, &basis);
            for (const auto& img : expanded) emit(img, which);
        } else {
            for (const auto& img : per_film_images[i]) emit(img, which);
        }
        per_film_images[i].clear();
    }

    const json cfg_json{{"filter", opt.filter_id},
                        {"augment", opt.augment},
                        {"multiplier", opt.multiplier},
                        {"split", {opt.train_ratio, opt.val_ratio, opt.test_ratio}},
                        {"seed", opt.seed},
                        {"frames_per_film", opt.frames_per_film},
                        {"t0", {opt.t0_lo, opt.t0_hi}},
                        {"t_norm", opt.t_norm},
                        {"eps", opt.eps}};
    json manifest = provenance(cfg_json, opt.seed);
    manifest["filter"] = filter_to_json(filter);
    manifest["augment"] = opt.augment;
    manifest["multiplier"] = opt.multiplier;
    manifest["split"] = split_to_json(split);
    manifest["images"] = std::move(images);
    write_json_file(opt.out_dir / "dataset_manifest.json", manifest);

    for (const auto& [which, counts] : summary.counts)
        std::printf("%s: good=%d medium=%d bad=%d\n", which.c_str(), counts[0], counts[1],
                    counts[2]);
    std::printf("total images: %d\n", summary.total);
    return summary;
}

namespace {

std::vector<nn::Sample> load_split_samples(const json& manifest, const fs::path& base,
                                           const std::set<std::string>& splits) {
    std::vector<nn::Sample> out;
    for (const auto& row : manifest.at("images")) {
        const DatasetImageEntry e = dataset_image_from_json(row);
        if (!splits.count(e.split)) continue;
        const Image8 img = read_png_rgb8(base / e.path);
        nn::Sample s;
        s.chw = nn::image_to_input(img);
        s.label = static_cast<int>(e.label);
        s.film_id = e.film_id;
        s.frame_index = e.frame_index;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

void cmd_train(const TrainOptions& opt) {
    const json manifest = read_json_file(opt.manifest_path);
    const fs::path base = opt.manifest_path.parent_path();
    const std::vector<nn::Sample> train_set = load_split_samples(manifest, base, {"train"});
    const std::vector<nn::Sample> val_set = load_split_samples(manifest, base, {"val"});
    if (train_set.empty()) throw DataError("train: manifest has no training images");

    const nn::TrainResult result = nn::train(train_set, val_set, opt.cfg);
    save_checkpoint(opt.out_model, result.model);
    write_text_file(fs::path(opt.out_model).replace_extension(".history.csv"),
                    nn::history_to_csv(result.history));

    const json cfg_json{{"manifest", opt.manifest_path.filename().string()},
                        {"lr", opt.cfg.learning_rate},
                        {"momentum", opt.cfg.momentum},
                        {"batch_size", opt.cfg.batch_size},
                        {"epochs", opt.cfg.epochs},
                        {"seed", opt.cfg.seed},
                        {"variant", nn::to_string(opt.cfg.variant)},
                        {"class_weights", opt.cfg.class_weights}};
    write_json_file(fs::path(opt.out_model).replace_extension(".meta.json"),
                    provenance(cfg_json, opt.cfg.seed));
}

EvalReport cmd_eval(const EvalOptions& opt) {
    const json manifest = read_json_file(opt.manifest_path);
    const fs::path base = opt.manifest_path.parent_path();
    std::vector<nn::Sample> samples = load_split_samples(manifest, base, {"test"});
    std::string which = "test";
    if (samples.empty()) {
        samples = load_split_samples(manifest, base, {"train", "val", "test"});
        which = "all";
    }
    if (samples.empty()) throw DataError("eval: manifest has no images");

    const nn::Cnn<float> model = load_checkpoint(opt.model_path);
    const std::vector<nn::Prediction> preds = nn::predict(model, samples);
    EvalReport report = compute_metrics(preds);

    // Film-level verdicts: mean probability over each film's frames.
    std::map<std::string, std::array<double, 4>> by_film;
    std::map<std::string, int> film_label;
    for (const auto& p : preds) {
        auto& acc = by_film[p.film_id];
        for (int c = 0; c < 3; ++c) acc[c] += p.scores[c];
        acc[3] += 1;
        film_label[p.film_id] = p.true_label;
    }
    int correct = 0;
    for (const auto& [id, acc] : by_film) {
        int arg = 0;
        for (int c = 1; c < 3; ++c)
            if (acc[c] > acc[arg]) arg = c;
        correct += (arg == film_label[id]);
    }
    if (!by_film.empty())
        report.film_level_accuracy = 100.0 * correct / static_cast<double>(by_film.size());
    report.metadata = "split=" + which + " model=" + opt.model_path.filename().string();

    const json cfg_json{{"model", opt.model_path.filename().string()},
                        {"manifest", opt.manifest_path.filename().string()}};
    json out = report_to_json(report);
    out["provenance"] = provenance(cfg_json, manifest.value("seed", std::uint64_t{0}));
    write_json_file(fs::path(opt.out_report).replace_extension(".json"), out);
    write_text_file(fs::path(opt.out_report).replace_extension(".txt"), report_to_text(report));
    return report;
}

std::vector<FilmImageSet> load_film_image_sets(const fs::path& films_dir,
                                               const std::vector<FilterSpec>& filters,
                                               int frames_per_film, int t0_lo, int t0_hi,
                                               int t_norm, double eps) {
    std::vector<FilmImageSet> sets;
    for (const fs::path& path : list_tfilm_files(films_dir)) {
        const ThermalFilm film = read_tfilm(path);
        const int tn = t_norm > 0 ? t_norm : film.n_frames;
        const NormalizedFilm nf = normalize_film(film, t0_lo, t0_hi, tn, eps);
        sets.push_back(extract_film_images(film, nf, filters, frames_per_film));
    }
    return sets;
}

AblationResult cmd_ablate(const AblateOptions& opt) {
    std::vector<FilterSpec> filters;
    if (opt.mode == "filter") {
        for (const auto& id : opt.filters) filters.push_back(builtin_filter(id));
    } else if (opt.mode == "augmentation") {
        filters.push_back(builtin_filter(opt.aug_filter));
    } else {
        throw std::invalid_argument("ablate: mode must be 'filter' or 'augmentation'");
    }

    const std::vector<FilmImageSet> sets = load_film_image_sets(
        opt.films_dir, filters, opt.harness.frames_per_film, opt.t0_lo, opt.t0_hi, opt.t_norm,
        opt.eps);
    if (sets.empty()) throw DataError("ablate: no films found in " + opt.films_dir.string());

    AblationResult result;
    if (opt.mode == "filter") {
        result = run_filter_ablation(sets, opt.filters, opt.harness, opt.n_seeds);
    } else {
        result = run_augmentation_ablation(
            sets, opt.aug_filter,
            {AugChoice::none, AugChoice::positional, AugChoice::positional_color, AugChoice::color},
            opt.harness, opt.n_seeds);
    }

    fs::create_directories(opt.out_dir);
    write_text_file(opt.out_dir / "ablation.csv", ablation_to_csv(result));

    const json cfg_json{{"mode", opt.mode},
                        {"filters", opt.filters},
                        {"aug_filter", opt.aug_filter},
                        {"n_seeds", opt.n_seeds},
                        {"frames_per_film", opt.harness.frames_per_film},
                        {"split_seed", opt.harness.split_seed},
                        {"train_seed", opt.harness.train.seed}};
    json out = provenance(cfg_json, opt.harness.train.seed);
    out["seeds"] = result.seeds;
    out["split"] = split_to_json(result.split);
    json entries = json::array();
    for (const auto& e : result.entries) {
        json je{{"name", e.name},
                {"infeasible", e.infeasible},
                {"film_acc", e.film_acc},
                {"frame_acc", e.frame_acc},
                {"film_acc_mean", e.film_acc_mean},
                {"film_acc_stddev", e.film_acc_stddev},
                {"frame_acc_mean", e.frame_acc_mean},
                {"frame_acc_stddev", e.frame_acc_stddev}};
        json reports = json::array();
        for (const auto& r : e.reports) reports.push_back(report_to_json(r));
        je["reports"] = reports;
        entries.push_back(je);
    }
    out["entries"] = entries;
    write_json_file(opt.out_dir / "ablation.json", out);
    return result;
}

void cmd_export_frames(const ExportFramesOptions& opt) {
    const NormalizedFilm nf = read_nfilm(opt.nfilm_path);
    const int hi = opt.frame_hi > 0 ? opt.frame_hi : nf.n_frames;
    if (opt.frame_lo < 1 || hi < opt.frame_lo || hi > nf.n_frames)
        throw std::invalid_argument("export-frames: bad frame range");
    fs::create_directories(opt.out_dir);
    json meta = json::array();
    for (int f = opt.frame_lo; f <= hi; ++f) {
        double lo = frame_percentile(nf, f, 1.0);
        double hi_p = frame_percentile(nf, f, 99.0);
        if (!(hi_p > lo)) hi_p = lo + 1.0;
        const Image8 img = to_rgb(nf, f, lo, hi_p);
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%03d.png", f);
        write_png_rgb8(opt.out_dir / name, img);
        meta.push_back({{"frame", f}, {"file", name}, {"display_lo", lo}, {"display_hi", hi_p}});
    }
    json out{{"tool_version", kToolVersion},
             {"source", opt.nfilm_path.filename().string()},
             {"frames", std::move(meta)}};
    write_json_file(opt.out_dir / "frames_manifest.json", out);
}

}  // namespace tw
