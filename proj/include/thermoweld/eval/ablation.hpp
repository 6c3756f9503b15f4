#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thermoweld/dataprep/augment.hpp"
#include "thermoweld/dataprep/split.hpp"
#include "thermoweld/eval/metrics.hpp"
#include "thermoweld/nn/train.hpp"

namespace tw {

/// Per-film images pre-extracted for every filter under study, so the
/// bulky films can be dropped while the harness runs.
struct FilmImageSet {
    std::string film_id;
    QualityClass label = QualityClass::good;
    std::map<std::string, std::vector<LabeledImage>> by_filter;
};

/// Augmentation choices exercised by the augmentation ablation.
enum class AugChoice { none, positional, positional_color, color };
const char* to_string(AugChoice c);

struct HarnessConfig {
    int frames_per_film = 8;             ///< evenly-spaced cap per film per filter
    double train_ratio = 0.70;
    double val_ratio = 0.15;
    double test_ratio = 0.15;
    std::uint64_t split_seed = 99;       ///< one split shared by all entries/seeds
    int aug_multiplier = 3;              ///< for augmented configs (1 original + copies)
    nn::TrainConfig train;
    int max_parallel_runs = 2;
};

struct AblationEntry {
    std::string name;                    ///< filter id or augmentation choice
    bool infeasible = false;             ///< empty training selection
    std::vector<double> film_acc;        ///< percent, one per seed
    std::vector<double> frame_acc;       ///< percent, one per seed
    double film_acc_mean = 0.0, film_acc_stddev = 0.0;
    double frame_acc_mean = 0.0, frame_acc_stddev = 0.0;
    std::vector<EvalReport> reports;     ///< frame-level test report per seed
};

struct AblationResult {
    std::vector<AblationEntry> entries;
    std::vector<std::uint64_t> seeds;
    DatasetSplit split;
    std::uint64_t test_films_hash = 0;   ///< identical across entries by construction
};

/// Extracts the capped, evenly spaced filtered frames of one film for each
/// requested filter id.
FilmImageSet extract_film_images(const ThermalFilm& film, const NormalizedFilm& nf,
                                 const std::vector<FilterSpec>& filters, int frames_per_film);

/// Trains one model per (filter, seed) on identically split films and
/// reports mean +- stddev film-level and frame-level test accuracy. Test
/// frames are always drawn through the same filter as training. Entries
/// whose filter selects no training image are marked infeasible.
AblationResult run_filter_ablation(const std::vector<FilmImageSet>& films,
                                   const std::vector<std::string>& filter_ids,
                                   const HarnessConfig& cfg, int n_seeds);

/// Same splits and seeds for every augmentation choice; only the training
/// augmentation differs and test images stay bit-identical across entries
/// (asserted internally by hashing the test image bytes).
AblationResult run_augmentation_ablation(const std::vector<FilmImageSet>& films,
                                         const std::string& filter_id,
                                         const std::vector<AugChoice>& choices,
                                         const HarnessConfig& cfg, int n_seeds);

/// "entry,mean,stddev" CSV of film-level accuracy.
std::string ablation_to_csv(const AblationResult& result);

}  // namespace tw
