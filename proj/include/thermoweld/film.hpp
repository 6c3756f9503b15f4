#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermoweld/core.hpp"

namespace tw {

/// A recorded thermal film: per-pixel ADC digit intensities over time.
/// Layout is frame-major, then row-major within a frame.
struct ThermalFilm {
    int width = 0;
    int height = 0;
    int n_frames = 0;
    double frame_rate = 0.0;             ///< Hz
    std::vector<std::uint16_t> data;     ///< width*height*n_frames digits
    std::uint8_t label = kUnlabeled;     ///< QualityClass value or kUnlabeled
    std::string specimen_id;

    std::size_t frame_size() const { return static_cast<std::size_t>(width) * height; }
    std::size_t index(int frame, int y, int x) const {
        return (static_cast<std::size_t>(frame) * height + y) * width + x;
    }
    std::uint16_t at(int frame, int y, int x) const { return data[index(frame, y, x)]; }

    bool well_formed() const {
        return width > 0 && height > 0 && n_frames > 0 && frame_rate > 0 &&
               data.size() == frame_size() * static_cast<std::size_t>(n_frames);
    }
};

/// Background- and emissivity-corrected film. Invalid pixels (denominator
/// below eps) hold exactly 0 and are flagged in the per-pixel mask.
struct NormalizedFilm {
    int width = 0;
    int height = 0;
    int n_frames = 0;
    int t0_lo = 1;                       ///< cold-reference frame range, 1-based inclusive
    int t0_hi = 10;
    int t_norm_frame = 0;                ///< 1-based
    std::vector<float> data;             ///< width*height*n_frames
    std::vector<std::uint8_t> valid;     ///< width*height, 1 = valid
    std::uint8_t label = kUnlabeled;
    std::string specimen_id;

    std::size_t frame_size() const { return static_cast<std::size_t>(width) * height; }
    std::size_t index(int frame, int y, int x) const {
        return (static_cast<std::size_t>(frame) * height + y) * width + x;
    }
    float at(int frame, int y, int x) const { return data[index(frame, y, x)]; }
    bool is_valid(int y, int x) const { return valid[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Per-frame spatial mean of the raw digits.
struct IntensityCurve {
    std::vector<double> mean_digits;     ///< one value per frame

    int n_frames() const { return static_cast<int>(mean_digits.size()); }
    /// 1-based frame index, matching film frame numbering.
    double at_frame(int frame) const { return mean_digits[static_cast<std::size_t>(frame - 1)]; }
};

/// Interleaved 8-bit RGB image.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;    ///< width*height*3, RGB

    static Image8 make(int w, int h) {
        Image8 img;
        img.width = w;
        img.height = h;
        img.pixels.assign(static_cast<std::size_t>(w) * h * 3, 0);
        return img;
    }
    std::size_t offset(int y, int x) const { return (static_cast<std::size_t>(y) * width + x) * 3; }
    bool operator==(const Image8& o) const = default;
};

}  // namespace tw
