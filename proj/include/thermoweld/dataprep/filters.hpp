#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermoweld/film.hpp"

namespace tw {

/// Frame/intensity band filter over a film: a frame is selected when its
/// index lies in [frame_lo, frame_hi] AND the film's mean intensity at that
/// frame lies in [intensity_lo, intensity_hi].
struct FilterSpec {
    std::string id;                      ///< "F1".."F12" for the builtin set
    int frame_lo = 1;                    ///< inclusive, 1-based
    int frame_hi = 1;
    double intensity_lo = 0.0;           ///< digits, inclusive
    double intensity_hi = 0.0;
    std::string description;

    void validate() const {
        if (frame_lo < 1 || frame_hi < frame_lo)
            throw std::invalid_argument("FilterSpec: need 1 <= frame_lo <= frame_hi");
        if (!(intensity_lo < intensity_hi))
            throw std::invalid_argument("FilterSpec: need intensity_lo < intensity_hi");
    }

    bool selects(int frame, double mean_digits) const {
        return frame >= frame_lo && frame <= frame_hi && mean_digits >= intensity_lo &&
               mean_digits <= intensity_hi;
    }
};

/// The twelve builtin filter bands, from no-heating through end-of-film.
std::vector<FilterSpec> builtin_filters();

/// Lookup by id ("F3"); throws DataError if unknown.
FilterSpec builtin_filter(const std::string& id);

/// One applied augmentation step, for provenance.
struct AugStep {
    std::string op;                      ///< e.g. "M1", "M3(-12.5)", "C3(4.1,0.93)"
};

/// A colormapped frame with its label and provenance.
struct LabeledImage {
    Image8 pixels;
    QualityClass label = QualityClass::good;
    std::string film_id;
    int frame_index = 0;                 ///< 1-based source frame
    int copy_index = 0;                  ///< 0 = original, >0 = augmented copy
    std::vector<AugStep> aug_chain;
    double display_lo = 0.0;             ///< percentile range used by to_rgb
    double display_hi = 1.0;
};

struct FilterApplication {
    std::vector<LabeledImage> images;    ///< ordered by (film_id, frame_index)
    bool empty_warning = false;          ///< no frame of any film matched
    std::vector<std::pair<std::string, int>> per_film_counts;
};

/// Extracts the selected frames of each film as colormapped images. The
/// display range per frame is the 1st/99th percentile of the valid pixels.
/// An empty selection is a warning status, not an error.
FilterApplication apply_filter(
    const std::vector<std::pair<const ThermalFilm*, const NormalizedFilm*>>& films,
    const FilterSpec& spec);

/// Frames of one film selected by the filter (1-based indices).
std::vector<int> selected_frames(const IntensityCurve& curve, const FilterSpec& spec);

}  // namespace tw
