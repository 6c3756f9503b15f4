// Command-line front end: simulate, curve, normalize, prepare, train, eval,
// ablate, export-frames. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 numeric failure.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "thermoweld/pipeline/commands.hpp"

namespace {

using tw::json;

/// Flags > config file > defaults: values from --config are applied to the
/// bound variables before parsing, so present flags overwrite them.
json load_config_arg(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") return tw::read_json_file(argv[i + 1]);
    return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& var) {
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulsed-laser thermography simulation and spot-weld quality classification"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override its values)")
        ->expected(1);

    json cfg;
    try {
        cfg = load_config_arg(argc, argv);
    } catch (const tw::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    tw::SimulateOptions sim;
    from_config(cfg, "films", sim.films);
    from_config(cfg, "seed", sim.seed);
    auto* sim_cmd = app.add_subcommand("simulate", "Generate labeled synthetic thermal films");
    {
        static std::string out;
        sim_cmd->add_option("--films", sim.films, "number of films")->capture_default_str();
        sim_cmd->add_option("--out", out, "output directory")->required();
        sim_cmd->add_option("--seed", sim.seed, "master seed")->capture_default_str();
        sim_cmd->add_option("--mix-good", sim.mix.good)->capture_default_str();
        sim_cmd->add_option("--mix-bad", sim.mix.bad)->capture_default_str();
        sim_cmd->add_option("--mix-medium", sim.mix.medium)->capture_default_str();
        sim_cmd->callback([&sim, &out] {
            sim.out_dir = out;
            tw::cmd_simulate(sim);
        });
    }

    tw::CurveOptions curve;
    auto* curve_cmd = app.add_subcommand("curve", "Export the mean intensity curve as CSV");
    {
        static std::string in, out;
        curve_cmd->add_option("--in", in, ".tfilm file")->required();
        curve_cmd->add_option("--out", out, "output CSV")->required();
        curve_cmd->callback([&curve] {
            curve.film_path = in;
            curve.out_csv = out;
            tw::cmd_curve(curve);
        });
    }

    tw::NormalizeOptions norm;
    from_config(cfg, "t0_lo", norm.t0_lo);
    from_config(cfg, "t0_hi", norm.t0_hi);
    from_config(cfg, "t_norm", norm.t_norm);
    from_config(cfg, "eps", norm.eps);
    auto* norm_cmd = app.add_subcommand("normalize", "Emissivity/background correction -> .nfilm");
    {
        static std::string in, out;
        norm_cmd->add_option("--in", in, ".tfilm file")->required();
        norm_cmd->add_option("--out", out, ".nfilm file")->required();
        norm_cmd->add_option("--t0-lo", norm.t0_lo)->capture_default_str();
        norm_cmd->add_option("--t0-hi", norm.t0_hi)->capture_default_str();
        norm_cmd->add_option("--t-norm", norm.t_norm, "0 = last frame")->capture_default_str();
        norm_cmd->add_option("--eps", norm.eps)->capture_default_str();
        norm_cmd->callback([&norm] {
            norm.in_path = in;
            norm.out_path = out;
            tw::cmd_normalize(norm);
        });
    }

    tw::PrepareOptions prep;
    from_config(cfg, "filter", prep.filter_id);
    from_config(cfg, "augment", prep.augment);
    from_config(cfg, "multiplier", prep.multiplier);
    from_config(cfg, "seed", prep.seed);
    from_config(cfg, "frames_per_film", prep.frames_per_film);
    auto* prep_cmd = app.add_subcommand("prepare", "normalize -> filter -> split -> augment");
    {
        static std::string films, out;
        static std::vector<double> split{0.7, 0.15, 0.15};
        prep_cmd->add_option("--films-dir", films, "directory of .tfilm files")->required();
        prep_cmd->add_option("--out", out, "output dataset directory")->required();
        prep_cmd->add_option("--filter", prep.filter_id, "builtin filter id")->capture_default_str();
        prep_cmd->add_option("--augment", prep.augment, "none|positional|color|positional+color")
            ->capture_default_str();
        prep_cmd->add_option("--multiplier", prep.multiplier)->capture_default_str();
        prep_cmd->add_option("--split", split, "train val test ratios")->expected(3);
        prep_cmd->add_option("--seed", prep.seed)->capture_default_str();
        prep_cmd->add_option("--frames-per-film", prep.frames_per_film, "0 = all")
            ->capture_default_str();
        prep_cmd->add_option("--t-norm", prep.t_norm, "0 = last frame")->capture_default_str();
        prep_cmd->add_option("--eps", prep.eps)->capture_default_str();
        prep_cmd->callback([&prep] {
            prep.films_dir = films;
            prep.out_dir = out;
            prep.train_ratio = split[0];
            prep.val_ratio = split[1];
            prep.test_ratio = split[2];
            tw::cmd_prepare(prep);
        });
    }

    tw::TrainOptions train;
    from_config(cfg, "lr", train.cfg.learning_rate);
    from_config(cfg, "momentum", train.cfg.momentum);
    from_config(cfg, "batch_size", train.cfg.batch_size);
    from_config(cfg, "epochs", train.cfg.epochs);
    from_config(cfg, "seed", train.cfg.seed);
    auto* train_cmd = app.add_subcommand("train", "Train the classifier on a prepared dataset");
    {
        static std::string manifest, out, variant = "small";
        train_cmd->add_option("--dataset", manifest, "dataset_manifest.json")->required();
        train_cmd->add_option("--out", out, "checkpoint file (.twmd)")->required();
        train_cmd->add_option("--lr", train.cfg.learning_rate)->capture_default_str();
        train_cmd->add_option("--momentum", train.cfg.momentum)->capture_default_str();
        train_cmd->add_option("--batch-size", train.cfg.batch_size)->capture_default_str();
        train_cmd->add_option("--epochs", train.cfg.epochs)->capture_default_str();
        train_cmd->add_option("--seed", train.cfg.seed)->capture_default_str();
        train_cmd->add_option("--variant", variant, "small|medium")->capture_default_str();
        train_cmd->add_flag("--class-weights", train.cfg.class_weights,
                            "inverse-frequency loss weights");
        train_cmd->callback([&train] {
            train.manifest_path = manifest;
            train.out_model = out;
            if (variant == "medium")
                train.cfg.variant = tw::nn::ModelVariant::medium;
            else if (variant != "small")
                throw CLI::ValidationError("--variant", "must be small or medium");
            tw::cmd_train(train);
        });
    }

    tw::EvalOptions eval_opt;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset manifest");
    {
        static std::string model, manifest, out;
        eval_cmd->add_option("--model", model, "checkpoint file")->required();
        eval_cmd->add_option("--dataset", manifest, "dataset_manifest.json")->required();
        eval_cmd->add_option("--out", out, "report path (writes .json/.txt)")->required();
        eval_cmd->callback([&eval_opt] {
            eval_opt.model_path = model;
            eval_opt.manifest_path = manifest;
            eval_opt.out_report = out;
            const tw::EvalReport r = tw::cmd_eval(eval_opt);
            std::fputs(tw::report_to_text(r).c_str(), stdout);
        });
    }

    tw::AblateOptions ablate;
    from_config(cfg, "n_seeds", ablate.n_seeds);
    auto* ablate_cmd = app.add_subcommand("ablate", "Filter / augmentation ablation studies");
    {
        static std::string films, out, filters = "F3,F9,F10,F11";
        ablate_cmd->add_option("--films-dir", films)->required();
        ablate_cmd->add_option("--out", out)->required();
        ablate_cmd->add_option("--filters", filters, "comma-separated builtin ids")
            ->capture_default_str();
        ablate_cmd->add_option("--mode", ablate.mode, "filter|augmentation")->capture_default_str();
        ablate_cmd->add_option("--aug-filter", ablate.aug_filter)->capture_default_str();
        ablate_cmd->add_option("--seeds", ablate.n_seeds)->capture_default_str();
        ablate_cmd->add_option("--frames-per-film", ablate.harness.frames_per_film)
            ->capture_default_str();
        ablate_cmd->add_option("--epochs", ablate.harness.train.epochs)->capture_default_str();
        ablate_cmd->add_option("--train-seed", ablate.harness.train.seed)->capture_default_str();
        ablate_cmd->add_option("--split-seed", ablate.harness.split_seed)->capture_default_str();
        ablate_cmd->callback([&ablate] {
            ablate.films_dir = films;
            ablate.out_dir = out;
            ablate.filters.clear();
            std::string cur;
            for (char c : filters + ",") {
                if (c == ',') {
                    if (!cur.empty()) ablate.filters.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            const tw::AblationResult r = tw::cmd_ablate(ablate);
            std::fputs(tw::ablation_to_csv(r).c_str(), stdout);
        });
    }

    tw::ExportFramesOptions exp;
    auto* exp_cmd = app.add_subcommand("export-frames", "Colormapped PNG export of .nfilm frames");
    {
        static std::string in, out;
        exp_cmd->add_option("--in", in, ".nfilm file")->required();
        exp_cmd->add_option("--out", out, "output directory")->required();
        exp_cmd->add_option("--frame-lo", exp.frame_lo)->capture_default_str();
        exp_cmd->add_option("--frame-hi", exp.frame_hi, "0 = last")->capture_default_str();
        exp_cmd->callback([&exp] {
            exp.nfilm_path = in;
            exp.out_dir = out;
            tw::cmd_export_frames(exp);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const tw::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const tw::NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
