#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "thermoweld/film.hpp"
#include "thermoweld/rng.hpp"
#include "thermoweld/thermal/params.hpp"

namespace tw {

/// Per-film render bookkeeping.
struct RenderStats {
    std::size_t saturated_digits = 0;    ///< samples clamped at adc_max
    std::size_t total_digits = 0;

    double saturation_fraction() const {
        return total_digits ? static_cast<double>(saturated_digits) / total_digits : 0.0;
    }
};

/// Calibrated defaults: a 14-bit detector whose mean intensity curve sits at
/// ~6k digits before heating, peaks in the 12.5k-14.4k band at the end of the
/// 1 s pulse and relaxes back to within ~100 digits of the baseline by the
/// last quarter of the film.
MaterialParams default_material();
LaserPulse default_pulse(const RenderParams& rp);
RenderParams default_render_params();

/// Per-pixel emissivity: uniform in [0.55, 0.95] plus a smooth low-frequency
/// component, clamped to (0,1]. Spatial mean stays close to 0.75.
std::vector<double> make_emissivity_field(int width, int height, Rng& rng);

/// Per-pixel environment offset in digits: a base level plus smooth
/// low-frequency variation.
std::vector<double> make_env_field(int width, int height, Rng& rng, double base_digits);

/// Renders one labeled film. Deterministic given all arguments; the noise
/// stream is seeded from (rp.rng_seed, spec.specimen_id) only.
ThermalFilm render_film(const SpecimenSpec& spec, const MaterialParams& mat,
                        const LaserPulse& pulse, const RenderParams& rp,
                        RenderStats* stats = nullptr);

/// One sampled dataset entry: everything needed to reproduce the film.
struct GeneratedFilm {
    ThermalFilm film;
    SpecimenSpec specimen;
    MaterialParams material;
    LaserPulse pulse;
    std::uint64_t film_seed = 0;
    RenderStats stats;
};

/// Samples per-film specimen parameters and renders n films. Class mix
/// defaults to the imbalanced production mix (good 0.45, bad 0.38,
/// medium 0.17). Per-film seeds derive from hash(master_seed, index),
/// so films are independent of evaluation order.
/// The sink is invoked once per film, in index order.
void for_each_generated_film(int n_films, const ClassMix& mix, std::uint64_t master_seed,
                             const ParamRanges& ranges, const MaterialParams& base_mat,
                             const RenderParams& base_rp,
                             const std::function<void(GeneratedFilm&&)>& sink);

/// Convenience wrapper collecting whole films; prefer the streaming form
/// for large n.
std::vector<ThermalFilm> generate_dataset(int n_films, const ClassMix& mix,
                                          std::uint64_t master_seed,
                                          const ParamRanges& ranges = {});

}  // namespace tw
