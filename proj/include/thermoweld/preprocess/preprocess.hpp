#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "thermoweld/film.hpp"

namespace tw {

/// Per-frame arithmetic mean over all pixel digits.
IntensityCurve mean_intensity_curve(const ThermalFilm& film);

/// Background and emissivity correction:
///   value(t) = (digits(t) - ref0) / (digits(t_norm) - ref0)
/// per pixel, where ref0 is the mean over the cold-reference frames
/// t0_lo..t0_hi. Pixels with |denominator| <= eps are invalid (exactly 0,
/// flagged). Frame indices are 1-based inclusive.
/// Throws DataError if every pixel is invalid ("degenerate film").
NormalizedFilm normalize_film(const ThermalFilm& film, int t0_lo, int t0_hi, int t_norm_frame,
                              double eps = 8.0);

inline NormalizedFilm normalize_film(const ThermalFilm& film) {
    return normalize_film(film, 1, 10, film.n_frames);
}

/// Blue -> green -> red piecewise-linear colormap over v in [0,1]:
/// v=0 -> (0,0,255), v=0.5 -> (0,255,0), v=1 -> (255,0,0).
/// Rounding is half-up.
std::array<std::uint8_t, 3> colormap_bgr_ramp(double v);

/// Maps one normalized frame to an 8-bit RGB image. Values are scaled with
/// (value - lo) / (hi - lo), clamped to [0,1]; invalid pixels map to black.
/// Requires hi > lo.
Image8 to_rgb(std::span<const float> frame, int width, int height,
              std::span<const std::uint8_t> valid, double lo, double hi);

Image8 to_rgb(const NormalizedFilm& nf, int frame_1based, double lo, double hi);

/// p-th percentile (p in [0,100]) of the valid pixels of one frame, by
/// nearest-rank on the sorted values. Used to pick the display range
/// (1st/99th percentile) recorded with every exported image.
double frame_percentile(const NormalizedFilm& nf, int frame_1based, double p);

/// Writes "frame_index,mean_digits" lines (with header) for a curve.
std::string curve_to_csv(const IntensityCurve& curve);

}  // namespace tw
