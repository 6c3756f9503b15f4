#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoweld/core.hpp"

namespace tw {

/// Bulk material constants for the image-source slab solution.
/// `loss_time_constant_s` adds a lumped Newton-cooling factor exp(-t/tau)
/// on each impulse response (infinity disables it); it models the surface
/// and lateral losses a 1D through-thickness solution cannot represent.
struct MaterialParams {
    double rho = 7850.0;                 ///< kg/m^3
    double c_p = 490.0;                  ///< J/(kg K)
    double alpha = 1.2e-5;               ///< m^2/s
    double reflectivity = 0.9;           ///< thermal reflectivity material->air
    double series_tol = 1e-9;            ///< truncation tolerance for the image-source series
    double T0 = 293.15;                  ///< ambient, K
    double loss_time_constant_s = std::numeric_limits<double>::infinity();

    void validate() const {
        if (!(rho > 0) || !(c_p > 0) || !(alpha > 0))
            throw std::invalid_argument("MaterialParams: rho, c_p, alpha must be > 0");
        if (!(reflectivity >= 0.0 && reflectivity < 1.0))
            throw std::invalid_argument("MaterialParams: reflectivity must be in [0,1)");
        if (!(series_tol > 0))
            throw std::invalid_argument("MaterialParams: series_tol must be > 0");
        if (!(loss_time_constant_s > 0))
            throw std::invalid_argument("MaterialParams: loss_time_constant_s must be > 0");
    }
};

/// Laser pulse description. Frame indices are 1-based; the pulse is on
/// during (t_on, t_off] with t = frame / frame_rate.
struct LaserPulse {
    double absorbed_energy_J = 500.0;    ///< Q
    double area_m2 = 19e-3 * 19e-3;      ///< A, illuminated area
    int on_frame = 20;
    int off_frame = 60;
    PixelRect illum_rect;                ///< illuminated rectangle, pixel coords

    void validate(int n_frames) const {
        if (!(absorbed_energy_J >= 0))
            throw std::invalid_argument("LaserPulse: absorbed energy must be >= 0");
        if (!(area_m2 > 0))
            throw std::invalid_argument("LaserPulse: area must be > 0");
        if (!(on_frame < off_frame && off_frame < n_frames))
            throw std::invalid_argument("LaserPulse: need on_frame < off_frame < n_frames");
    }
};

/// Geometry and label of one specimen: two sheets of thickness L1 each,
/// stacked to L2, joined by a nugget disk.
struct SpecimenSpec {
    double sheet_thickness_L1 = 1.0e-3;  ///< m
    double stack_thickness_L2 = 2.0e-3;  ///< m
    double nugget_diameter = 5.5e-3;     ///< m
    PixelPoint nugget_center;            ///< pixel coords
    double contact_quality = 1.0;        ///< 1 = full thermal contact; scales L2 toward L1
    QualityClass quality_class = QualityClass::good;
    std::string specimen_id;

    /// Thickness governing pixels inside the nugget disk.
    double effective_L2() const {
        return sheet_thickness_L1 + (stack_thickness_L2 - sheet_thickness_L1) * contact_quality;
    }

    void validate(int width, int height) const {
        if (!(sheet_thickness_L1 > 0 && sheet_thickness_L1 < stack_thickness_L2))
            throw std::invalid_argument("SpecimenSpec: need 0 < L1 < L2");
        if (!(nugget_diameter >= 0))
            throw std::invalid_argument("SpecimenSpec: nugget_diameter must be >= 0");
        if (!(contact_quality >= 0 && contact_quality <= 1))
            throw std::invalid_argument("SpecimenSpec: contact_quality must be in [0,1]");
        if (nugget_center.x < 0 || nugget_center.x >= width || nugget_center.y < 0 ||
            nugget_center.y >= height)
            throw std::invalid_argument("SpecimenSpec: nugget_center outside image bounds");
    }
};

/// Camera / detector model and render controls.
struct RenderParams {
    int width = 131;
    int height = 146;
    int n_frames = 250;
    double frame_rate = 40.0;            ///< Hz
    double pixel_pitch = 133e-6;         ///< m/pixel
    std::vector<double> emissivity_field;    ///< width*height, each in (0,1]
    std::vector<double> env_flux_digits;     ///< width*height additive offset, digits
    double detector_noise_sigma = 4.0;   ///< digits
    double gain = 975.0;                 ///< digits per flux-proxy unit
    int adc_max = 16383;                 ///< 14-bit converter
    double lateral_blur_sigma = 1.2;     ///< pixels
    std::uint64_t rng_seed = 1;

    std::size_t frame_size() const { return static_cast<std::size_t>(width) * height; }

    void validate() const {
        if (width <= 0 || height <= 0 || n_frames <= 0 || frame_rate <= 0 || pixel_pitch <= 0)
            throw std::invalid_argument("RenderParams: dimensions must be > 0");
        if (adc_max <= 0 || adc_max > 65535)
            throw std::invalid_argument("RenderParams: adc_max must fit 16-bit digits");
        if (emissivity_field.size() != frame_size() || env_flux_digits.size() != frame_size())
            throw std::invalid_argument("RenderParams: per-pixel fields must be width*height");
        for (double e : emissivity_field)
            if (!(e > 0.0 && e <= 1.0))
                throw std::invalid_argument("RenderParams: emissivity must be in (0,1]");
        for (double v : env_flux_digits)
            if (!(v >= 0.0 && v < adc_max))
                throw std::invalid_argument("RenderParams: env flux must be in [0, adc_max)");
        if (!(detector_noise_sigma >= 0) || !(gain > 0) || !(lateral_blur_sigma >= 0))
            throw std::invalid_argument("RenderParams: bad detector parameters");
    }
};

/// Per-film sampling ranges used by generate_dataset.
struct ParamRanges {
    double good_diameter_lo = 4.5e-3, good_diameter_hi = 6.5e-3;
    double medium_diameter_lo = 2.0e-3, medium_diameter_hi = 4.0e-3;
    double bad_diameter_lo = 0.0, bad_diameter_hi = 1.0e-3;
    double bad_contact_lo = 0.0, bad_contact_hi = 0.25;
    double energy_jitter = 0.03;         ///< relative, uniform +-
    double alpha_jitter = 0.02;          ///< relative, uniform +-
    double T0_jitter_K = 1.5;            ///< uniform +-
    double center_jitter_px = 8.0;       ///< uniform +- around image center
};

struct ClassMix {
    double good = 0.45;
    double bad = 0.38;
    double medium = 0.17;

    void validate() const {
        if (good < 0 || bad < 0 || medium < 0 ||
            std::abs(good + bad + medium - 1.0) > 1e-9)
            throw std::invalid_argument("ClassMix: probabilities must be >= 0 and sum to 1");
    }
};

}  // namespace tw
