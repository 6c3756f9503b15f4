#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "thermoweld/eval/ablation.hpp"
#include "thermoweld/io/manifest.hpp"
#include "thermoweld/nn/train.hpp"
#include "thermoweld/thermal/render.hpp"

namespace tw {

namespace fs = std::filesystem;

/// Library-level command implementations behind the CLI subcommands.
/// All of them are deterministic functions of their options (plus input
/// files) and throw DataError / NumericError / std::invalid_argument on
/// failure; the CLI maps those to exit codes.

struct SimulateOptions {
    fs::path out_dir;
    int films = 115;
    std::uint64_t seed = 12345;
    ClassMix mix;
    ParamRanges ranges;
};
/// Writes film_#####.tfilm files plus films_manifest.json.
void cmd_simulate(const SimulateOptions& opt);

struct CurveOptions {
    fs::path film_path;
    fs::path out_csv;
};
void cmd_curve(const CurveOptions& opt);

struct NormalizeOptions {
    fs::path in_path;
    fs::path out_path;
    int t0_lo = 1;
    int t0_hi = 10;
    int t_norm = 0;                      ///< 0 = last frame
    double eps = 8.0;
};
void cmd_normalize(const NormalizeOptions& opt);

struct PrepareOptions {
    fs::path films_dir;
    fs::path out_dir;
    std::string filter_id = "F10";
    std::string augment = "none";        ///< none|positional|color|positional+color
    int multiplier = 8;
    double train_ratio = 0.7;
    double val_ratio = 0.15;
    double test_ratio = 0.15;
    std::uint64_t seed = 12345;
    int frames_per_film = 0;             ///< 0 = all selected frames
    int t0_lo = 1;
    int t0_hi = 10;
    int t_norm = 0;
    double eps = 8.0;
};
struct PrepareSummary {
    std::map<std::string, std::array<int, 3>> counts;  ///< split -> per-class image count
    int total = 0;
};
/// normalize -> filter -> split -> augment(train only); writes PNGs and
/// dataset_manifest.json. Throws DataError("no images selected") when the
/// filter matches nothing.
PrepareSummary cmd_prepare(const PrepareOptions& opt);

struct TrainOptions {
    fs::path manifest_path;
    fs::path out_model;
    nn::TrainConfig cfg;
};
void cmd_train(const TrainOptions& opt);

struct EvalOptions {
    fs::path model_path;
    fs::path manifest_path;
    fs::path out_report;                 ///< writes <out>.json and <out>.txt
};
EvalReport cmd_eval(const EvalOptions& opt);

struct AblateOptions {
    fs::path films_dir;
    fs::path out_dir;
    std::vector<std::string> filters{"F3", "F9", "F10", "F11"};
    std::string mode = "filter";         ///< "filter" or "augmentation"
    std::string aug_filter = "F10";
    int n_seeds = 3;
    HarnessConfig harness;
    int t0_lo = 1;
    int t0_hi = 10;
    int t_norm = 0;
    double eps = 8.0;
};
AblationResult cmd_ablate(const AblateOptions& opt);

struct ExportFramesOptions {
    fs::path nfilm_path;
    fs::path out_dir;
    int frame_lo = 1;
    int frame_hi = 0;                    ///< 0 = last frame
};
void cmd_export_frames(const ExportFramesOptions& opt);

/// Sorted .tfilm paths directly inside a directory.
std::vector<fs::path> list_tfilm_files(const fs::path& dir);

/// Loads films from a directory and extracts per-filter image sets using
/// the given normalization parameters (shared by prepare/ablate/tests).
std::vector<FilmImageSet> load_film_image_sets(const fs::path& films_dir,
                                               const std::vector<FilterSpec>& filters,
                                               int frames_per_film, int t0_lo, int t0_hi,
                                               int t_norm, double eps);

}  // namespace tw
