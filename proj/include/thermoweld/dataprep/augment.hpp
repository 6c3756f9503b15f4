#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "thermoweld/dataprep/filters.hpp"

namespace tw {

/// Which transform families augmented copies draw from. Positional ops are
/// the coordinate transforms (flips, rotation); color ops change pixel
/// intensities (PCA-color, hue/saturation, illumination).
enum class AugPolicy { positional, color, positional_color };

struct AugmentConfig {
    AugPolicy policy = AugPolicy::positional;
    double rotation_max_deg = 90.0;      ///< M3 angle drawn uniform in [-max, max]
    double pca_sigma = 0.1;              ///< C1 per-component stddev
    double hue_max_turns = 0.05;         ///< C2 hue shift, uniform +-
    double sat_scale_lo = 0.8;           ///< C2 saturation scale range
    double sat_scale_hi = 1.2;
    double illum_offset_max = 25.5;      ///< C3 brightness offset, uniform +- (10% of range)
    double contrast_lo = 0.8;            ///< C3 contrast scale about the image mean
    double contrast_hi = 1.2;
};

/// 3x3 symmetric eigendecomposition of the RGB covariance of the sampled
/// pixels (channel means subtracted). Returned eigenvalues are descending;
/// eigenvectors[i] belongs to eigenvalues[i]. All-identical pixels give
/// zero eigenvalues (PCA-color then degenerates to a no-op).
/// Requires a non-empty sample.
struct PcaColorBasis {
    std::array<double, 3> eigenvalues{};
    std::array<std::array<double, 3>, 3> eigenvectors{};
};
PcaColorBasis pca_color_basis(const std::vector<const Image8*>& sample);

/// Individual transforms (exposed for tests and the CLI).
Image8 hflip(const Image8& img);                                   // M1
Image8 vflip(const Image8& img);                                   // M2
/// Rotation about the image center, bilinear, canvas size kept; out-of-image
/// samples use the per-channel mean of the border row/column pixels.
Image8 rotate_bilinear(const Image8& img, double angle_deg);       // M3
Image8 pca_color_shift(const Image8& img, const PcaColorBasis& basis,
                       const std::array<double, 3>& alphas);       // C1
Image8 hue_saturation(const Image8& img, double hue_shift_turns, double sat_scale);  // C2
/// out = p*scale + (1-scale)*mean + offset, clamped; identity when
/// (offset, scale) = (0, 1).
Image8 illumination(const Image8& img, double offset, double scale);  // C3

/// Returns every original image followed by (multiplier - 1) transformed
/// copies. Per-copy transforms are drawn from the config's policy with a
/// seed derived from (seed, film_id, frame_index, copy_index), so the result
/// is order-independent. Positional ops preserve labels exactly.
/// The PCA-color basis is computed from a deterministic sample of the input
/// unless one is supplied (useful when augmenting in chunks).
std::vector<LabeledImage> augment(const std::vector<LabeledImage>& images,
                                  const AugmentConfig& cfg, int multiplier, std::uint64_t seed,
                                  const PcaColorBasis* basis = nullptr);

}  // namespace tw
