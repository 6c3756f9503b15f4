#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "thermoweld/nn/train.hpp"

namespace tw {

/// Frame-level metrics in the shape of the reference comparison table:
/// per-class error rate and average precision, their mean, and the 3x3
/// confusion matrix.
struct EvalReport {
    std::array<double, 3> error_rate{};          ///< percent, per class
    std::array<std::optional<double>, 3> ap{};   ///< percent; nullopt if class absent
    std::optional<double> map;                   ///< mean over defined APs
    bool ap_undefined_warning = false;           ///< some class had no positives
    std::array<std::array<int, 3>, 3> confusion{};  ///< [true][predicted]
    int total = 0;
    double overall_accuracy = 0.0;               ///< percent
    std::optional<double> film_level_accuracy;   ///< percent, when film verdicts exist
    std::string metadata;                        ///< filter id / augmentation / seed stamp
};

/// Reference metrics of the published architecture comparison, kept as
/// constants so reports can print them alongside the measured values.
struct ReferenceRow {
    const char* architecture;
    std::array<double, 3> error_rate;    ///< good, medium, bad
    std::array<double, 3> ap;
};
inline constexpr std::array<ReferenceRow, 3> kReferenceResults{{
    {"Faster-RCNN", {6.33, 36.78, 8.85}, {92.14, 81.57, 94.234}},
    {"RetinaNet", {9.97, 45.6, 12.66}, {78.12, 74.21, 80.97}},
    {"Cascade-RCNN", {2.72, 34.66, 16.54}, {95.31, 84.4, 94.7}},
}};

/// Error rates, score-ranked one-vs-rest APs (step-interpolated area under
/// the precision-recall curve) and the confusion matrix. A class absent
/// from the ground truth gets an undefined AP, excluded from the mean with
/// a warning flag. Throws on empty input.
EvalReport compute_metrics(const std::vector<nn::Prediction>& predictions);

/// One-vs-rest AP for ranked (score, is_positive) pairs, in [0,1].
/// Ties rank by descending score, then input order.
std::optional<double> average_precision(const std::vector<std::pair<double, bool>>& ranked);

/// Text table mirroring the reference layout (rows: error rate, AP).
std::string report_to_text(const EvalReport& report);

}  // namespace tw
