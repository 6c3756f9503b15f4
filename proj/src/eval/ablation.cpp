#include "thermoweld/eval/ablation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <set>
#include <thread>

#include "thermoweld/preprocess/preprocess.hpp"

namespace tw {

namespace {

std::vector<int> evenly_spaced(const std::vector<int>& frames, int cap) {
    if (cap <= 0 || static_cast<int>(frames.size()) <= cap) return frames;
    std::vector<int> out;
    out.reserve(cap);
    const double step = static_cast<double>(frames.size() - 1) / (cap - 1);
    int last = -1;
    for (int i = 0; i < cap; ++i) {
        const int idx = static_cast<int>(std::llround(i * step));
        if (idx != last) out.push_back(frames[idx]);
        last = idx;
    }
    return out;
}

nn::Sample to_sample(const LabeledImage& img) {
    nn::Sample s;
    s.chw = nn::image_to_input(img.pixels);
    s.label = static_cast<int>(img.label);
    s.film_id = img.film_id;
    s.frame_index = img.frame_index;
    return s;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

struct RunOutcome {
    double film_acc = 0.0;
    double frame_acc = 0.0;
    EvalReport report;
};

/// Trains on the given images and evaluates frame- and film-level accuracy
/// on the test images (grouped by film for the verdicts).
RunOutcome run_single(const std::vector<LabeledImage>& train_images,
                      const std::vector<LabeledImage>& val_images,
                      const std::vector<LabeledImage>& test_images, nn::TrainConfig tcfg,
                      std::uint64_t seed, const std::string& meta) {
    tcfg.seed = seed;
    std::vector<nn::Sample> train_set, val_set, test_set;
    for (const auto& i : train_images) train_set.push_back(to_sample(i));
    for (const auto& i : val_images) val_set.push_back(to_sample(i));
    for (const auto& i : test_images) test_set.push_back(to_sample(i));

    const nn::TrainResult tr = nn::train(train_set, val_set, tcfg);
    const std::vector<nn::Prediction> preds = nn::predict(tr.model, test_set);

    RunOutcome out;
    out.frame_acc = 100.0 * nn::accuracy(preds);
    out.report = compute_metrics(preds);
    out.report.metadata = meta;

    // Film-level verdict: mean probability over the film's test frames.
    std::map<std::string, std::array<double, 4>> by_film;  // p0,p1,p2,count
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
    out.film_acc = by_film.empty() ? 0.0 : 100.0 * correct / by_film.size();
    out.report.film_level_accuracy = out.film_acc;
    return out;
}

void finish_entry(AblationEntry& e) {
    e.film_acc_mean = mean_of(e.film_acc);
    e.film_acc_stddev = stddev_of(e.film_acc);
    e.frame_acc_mean = mean_of(e.frame_acc);
    e.frame_acc_stddev = stddev_of(e.frame_acc);
}

std::uint64_t hash_strings(const std::vector<std::string>& ids) {
    std::string cat;
    for (const auto& s : ids) {
        cat += s;
        cat += '\n';
    }
    return fnv1a64(cat);
}

/// Runs tasks with a small worker pool; task order in the output is fixed.
void run_pool(std::vector<std::function<void()>>& tasks, int workers) {
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            tasks[i]();
        }
    };
    workers = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

AugmentConfig make_aug_config(AugChoice c) {
    AugmentConfig cfg;
    switch (c) {
        case AugChoice::positional: cfg.policy = AugPolicy::positional; break;
        case AugChoice::color: cfg.policy = AugPolicy::color; break;
        case AugChoice::positional_color: cfg.policy = AugPolicy::positional_color; break;
        case AugChoice::none: break;
    }
    return cfg;
}

}  // namespace

const char* to_string(AugChoice c) {
    switch (c) {
        case AugChoice::none: return "none";
        case AugChoice::positional: return "positional";
        case AugChoice::positional_color: return "positional+color";
        case AugChoice::color: return "color";
    }
    return "?";
}

FilmImageSet extract_film_images(const ThermalFilm& film, const NormalizedFilm& nf,
                                 const std::vector<FilterSpec>& filters, int frames_per_film) {
    FilmImageSet set;
    set.film_id = film.specimen_id;
    set.label = static_cast<QualityClass>(film.label);
    const IntensityCurve curve = mean_intensity_curve(film);
    for (const FilterSpec& spec : filters) {
        const std::vector<int> frames = evenly_spaced(selected_frames(curve, spec), frames_per_film);
        std::vector<LabeledImage> images;
        images.reserve(frames.size());
        for (int f : frames) {
            LabeledImage img;
            img.display_lo = frame_percentile(nf, f, 1.0);
            img.display_hi = frame_percentile(nf, f, 99.0);
            if (!(img.display_hi > img.display_lo)) img.display_hi = img.display_lo + 1.0;
            img.pixels = to_rgb(nf, f, img.display_lo, img.display_hi);
            img.label = set.label;
            img.film_id = set.film_id;
            img.frame_index = f;
            images.push_back(std::move(img));
        }
        set.by_filter.emplace(spec.id, std::move(images));
    }
    return set;
}

namespace {

struct SplitImages {
    std::vector<LabeledImage> train, val, test;
};

SplitImages collect_split_images(const std::vector<FilmImageSet>& films, const DatasetSplit& split,
                                 const std::string& filter_id) {
    std::set<std::string> train_ids(split.train.begin(), split.train.end());
    std::set<std::string> val_ids(split.val.begin(), split.val.end());
    std::set<std::string> test_ids(split.test.begin(), split.test.end());
    SplitImages out;
    for (const FilmImageSet& f : films) {
        auto it = f.by_filter.find(filter_id);
        if (it == f.by_filter.end()) continue;
        std::vector<LabeledImage>* dst = nullptr;
        if (train_ids.count(f.film_id))
            dst = &out.train;
        else if (val_ids.count(f.film_id))
            dst = &out.val;
        else if (test_ids.count(f.film_id))
            dst = &out.test;
        if (!dst) continue;
        dst->insert(dst->end(), it->second.begin(), it->second.end());
    }
    return out;
}

AblationResult run_common(const std::vector<FilmImageSet>& films,
                          const std::vector<std::pair<std::string, AugChoice>>& entries,
                          const HarnessConfig& cfg, int n_seeds, bool augmentation_mode) {
    if (n_seeds < 1) throw std::invalid_argument("ablation: n_seeds must be >= 1");

    std::vector<FilmRef> refs;
    refs.reserve(films.size());
    for (const auto& f : films) refs.push_back({f.film_id, f.label});

    AblationResult result;
    result.split = split_films(refs, cfg.train_ratio, cfg.val_ratio, cfg.test_ratio, cfg.split_seed);
    result.test_films_hash = hash_strings(result.split.test);
    for (int s = 0; s < n_seeds; ++s)
        result.seeds.push_back(hash_mix(cfg.train.seed, static_cast<std::uint64_t>(s)));

    result.entries.resize(entries.size());
    std::vector<std::function<void()>> tasks;
    std::uint64_t ref_test_image_hash = 0;
    bool have_ref_hash = false;

    for (std::size_t ei = 0; ei < entries.size(); ++ei) {
        const auto& [filter_id, choice] = entries[ei];
        AblationEntry& entry = result.entries[ei];
        entry.name = augmentation_mode ? std::string(to_string(choice)) : filter_id;

        SplitImages imgs = collect_split_images(films, result.split, filter_id);
        if (imgs.train.empty()) {
            entry.infeasible = true;
            continue;
        }

        // Fairness: in the augmentation ablation the test images must be
        // bit-identical across entries.
        if (augmentation_mode) {
            std::string bytes;
            for (const auto& im : imgs.test)
                bytes.append(reinterpret_cast<const char*>(im.pixels.pixels.data()),
                             im.pixels.pixels.size());
            const std::uint64_t h = fnv1a64(bytes);
            if (!have_ref_hash) {
                ref_test_image_hash = h;
                have_ref_hash = true;
            } else if (h != ref_test_image_hash) {
                throw std::logic_error("ablation: test images differ across entries");
            }
        }

        std::vector<LabeledImage> train_images = imgs.train;
        if (choice != AugChoice::none && cfg.aug_multiplier > 1)
            train_images = augment(imgs.train, make_aug_config(choice), cfg.aug_multiplier,
                                   hash_mix(cfg.split_seed, fnv1a64(filter_id)));

        entry.film_acc.resize(result.seeds.size());
        entry.frame_acc.resize(result.seeds.size());
        entry.reports.resize(result.seeds.size());
        for (std::size_t si = 0; si < result.seeds.size(); ++si) {
            const std::uint64_t seed = result.seeds[si];
            AblationEntry* eptr = &entry;
            auto train_copy = std::make_shared<std::vector<LabeledImage>>(train_images);
            auto val_copy = std::make_shared<std::vector<LabeledImage>>(imgs.val);
            auto test_copy = std::make_shared<std::vector<LabeledImage>>(imgs.test);
            const std::string meta =
                entry.name + " seed=" + std::to_string(seed) + " aug=" + to_string(choice);
            tasks.push_back([eptr, si, train_copy, val_copy, test_copy, seed, meta, &cfg] {
                const RunOutcome out =
                    run_single(*train_copy, *val_copy, *test_copy, cfg.train, seed, meta);
                eptr->film_acc[si] = out.film_acc;
                eptr->frame_acc[si] = out.frame_acc;
                eptr->reports[si] = out.report;
            });
        }
    }

    run_pool(tasks, cfg.max_parallel_runs);
    for (auto& e : result.entries)
        if (!e.infeasible) finish_entry(e);
    return result;
}

}  // namespace

AblationResult run_filter_ablation(const std::vector<FilmImageSet>& films,
                                   const std::vector<std::string>& filter_ids,
                                   const HarnessConfig& cfg, int n_seeds) {
    std::vector<std::pair<std::string, AugChoice>> entries;
    for (const auto& id : filter_ids) entries.emplace_back(id, AugChoice::positional);
    return run_common(films, entries, cfg, n_seeds, /*augmentation_mode=*/false);
}

AblationResult run_augmentation_ablation(const std::vector<FilmImageSet>& films,
                                         const std::string& filter_id,
                                         const std::vector<AugChoice>& choices,
                                         const HarnessConfig& cfg, int n_seeds) {
    std::vector<std::pair<std::string, AugChoice>> entries;
    for (AugChoice c : choices) entries.emplace_back(filter_id, c);
    return run_common(films, entries, cfg, n_seeds, /*augmentation_mode=*/true);
}

std::string ablation_to_csv(const AblationResult& result) {
    std::string out = "entry,mean,stddev\n";
    char buf[128];
    for (const auto& e : result.entries) {
        if (e.infeasible) {
            out += e.name + ",infeasible,\n";
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f\n", e.name.c_str(), e.film_acc_mean,
                      e.film_acc_stddev);
        out += buf;
    }
    return out;
}

}  // namespace tw
