#include "thermoweld/thermal/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "thermoweld/thermal/diffusion.hpp"

namespace tw {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
/// Reference temperature of the dimensionless black-body flux proxy
/// (T / kFluxRef)^4, so detector gain is independent of the ambient value.
constexpr double kFluxRef = 300.0;

double flux_proxy(double T) {
    const double r = T / kFluxRef;
    return r * r * r * r;
}

/// Separable Gaussian blur with border renormalization.
void gaussian_blur_inplace(std::vector<double>& frame, int width, int height, double sigma,
                           std::vector<double>& scratch) {
    if (sigma <= 0.0) return;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));

    scratch.resize(frame.size());
    // Horizontal pass.
    for (int y = 0; y < height; ++y) {
        const double* row = frame.data() + static_cast<std::size_t>(y) * width;
        double* out = scratch.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0, wsum = 0.0;
            const int lo = std::max(0, x - radius), hi = std::min(width - 1, x + radius);
            for (int i = lo; i <= hi; ++i) {
                const double w = kernel[i - x + radius];
                acc += w * row[i];
                wsum += w;
            }
            out[x] = acc / wsum;
        }
    }
    // Vertical pass.
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) {
            double acc = 0.0, wsum = 0.0;
            const int lo = std::max(0, y - radius), hi = std::min(height - 1, y + radius);
            for (int i = lo; i <= hi; ++i) {
                const double w = kernel[i - y + radius];
                acc += w * scratch[static_cast<std::size_t>(i) * width + x];
                wsum += w;
            }
            frame[static_cast<std::size_t>(y) * width + x] = acc / wsum;
        }
    }
}

/// Squared pixel distance from (x, y) to the rectangle (0 inside).
double rect_dist2_px(const PixelRect& r, int x, int y) {
    const double dx = (x < r.x0) ? (r.x0 - x) : (x > r.x1 - 1 ? x - (r.x1 - 1) : 0.0);
    const double dy = (y < r.y0) ? (r.y0 - y) : (y > r.y1 - 1 ? y - (r.y1 - 1) : 0.0);
    return dx * dx + dy * dy;
}

}  // namespace

MaterialParams default_material() {
    MaterialParams m;
    m.rho = 7850.0;
    m.c_p = 490.0;
    m.alpha = 1.2e-5;
    m.reflectivity = 0.9;
    m.series_tol = 1e-9;
    m.T0 = 293.15;
    m.loss_time_constant_s = 1.40;
    return m;
}

LaserPulse default_pulse(const RenderParams& rp) {
    LaserPulse p;
    p.absorbed_energy_J = 500.0;
    const double side_m = 19e-3;
    p.area_m2 = side_m * side_m;
    p.on_frame = 20;
    p.off_frame = 60;
    const double half_px = 0.5 * side_m / rp.pixel_pitch;
    const double cx = 0.5 * rp.width, cy = 0.5 * rp.height;
    p.illum_rect = PixelRect{static_cast<int>(std::floor(cx - half_px)),
                             static_cast<int>(std::floor(cy - half_px)),
                             static_cast<int>(std::ceil(cx + half_px)),
                             static_cast<int>(std::ceil(cy + half_px))};
    return p;
}

RenderParams default_render_params() {
    RenderParams rp;
    rp.gain = 1218.0;
    rp.emissivity_field.assign(rp.frame_size(), 0.75);
    rp.env_flux_digits.assign(rp.frame_size(), 5180.0);
    return rp;
}

std::vector<double> make_emissivity_field(int width, int height, Rng& rng) {
    std::vector<double> field(static_cast<std::size_t>(width) * height);
    const double fx = 1.0 + rng.uniform_index(3);
    const double fy = 1.0 + rng.uniform_index(3);
    const double phase = rng.uniform(0.0, kTwoPi);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double low = 0.04 * std::sin(kTwoPi * (fx * x / width + fy * y / height) + phase);
            const double e = rng.uniform(0.55, 0.95) + low;
            field[static_cast<std::size_t>(y) * width + x] = std::clamp(e, 0.51, 0.97);
        }
    }
    return field;
}

std::vector<double> make_env_field(int width, int height, Rng& rng, double base_digits) {
    std::vector<double> field(static_cast<std::size_t>(width) * height);
    const double fx = 1.0 + rng.uniform_index(2);
    const double fy = 1.0 + rng.uniform_index(2);
    const double phase = rng.uniform(0.0, kTwoPi);
    const double amp = 110.0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            field[static_cast<std::size_t>(y) * width + x] =
                base_digits + amp * std::sin(kTwoPi * (fx * x / width + fy * y / height) + phase);
    return field;
}

ThermalFilm render_film(const SpecimenSpec& spec, const MaterialParams& mat,
                        const LaserPulse& pulse, const RenderParams& rp, RenderStats* stats) {
    rp.validate();
    mat.validate();
    pulse.validate(rp.n_frames);
    spec.validate(rp.width, rp.height);

    const int W = rp.width, H = rp.height, NF = rp.n_frames;
    const std::size_t fs = rp.frame_size();

    // Zone map: every pixel shares its temperature history with all pixels of
    // equal (thickness, distance-to-rectangle); only a handful of zones exist.
    struct Zone {
        double L;
        double dist_px;
    };
    std::vector<Zone> zones;
    std::vector<int> zone_of(fs);
    {
        std::unordered_map<std::uint64_t, int> lookup;
        const double nugget_r_px = 0.5 * spec.nugget_diameter / rp.pixel_pitch;
        const double L2 = spec.effective_L2();
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                const double ddx = x - spec.nugget_center.x, ddy = y - spec.nugget_center.y;
                const bool in_nugget = (ddx * ddx + ddy * ddy) <= nugget_r_px * nugget_r_px;
                const double d2 = rect_dist2_px(pulse.illum_rect, x, y);
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(in_nugget) << 63) |
                    static_cast<std::uint64_t>(std::llround(d2 * 1024.0));
                auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(zones.size()));
                if (inserted) zones.push_back({in_nugget ? L2 : spec.sheet_thickness_L1, std::sqrt(d2)});
                zone_of[static_cast<std::size_t>(y) * W + x] = it->second;
            }
        }
    }

    ThermalFilm film;
    film.width = W;
    film.height = H;
    film.n_frames = NF;
    film.frame_rate = rp.frame_rate;
    film.label = static_cast<std::uint8_t>(spec.quality_class);
    film.specimen_id = spec.specimen_id;
    film.data.resize(fs * NF);

    Rng noise_rng(hash_mix(rp.rng_seed, fnv1a64(spec.specimen_id)));

    const double t_on = pulse.on_frame / rp.frame_rate;
    std::vector<double> zone_T(zones.size(), mat.T0);
    std::vector<double> flux(fs), scratch;
    RenderStats local;
    local.total_digits = fs * static_cast<std::size_t>(NF);

    for (int f = 1; f <= NF; ++f) {
        const double t = f / rp.frame_rate;
        if (t > t_on) {
            for (std::size_t z = 0; z < zones.size(); ++z) {
                const double d_m = zones[z].dist_px * rp.pixel_pitch;
                zone_T[z] = pulse_temperature(d_m, 0.0, t, zones[z].L, mat, pulse, rp.frame_rate);
            }
        }
        // Black-body flux of the (laterally smeared) temperature field, then
        // per-pixel emissivity, environment offset and detector gain. The
        // blur acts on the flux field so the per-pixel surface factors stay
        // exactly multiplicative/additive and normalization can cancel them.
        for (std::size_t p = 0; p < fs; ++p) flux[p] = flux_proxy(zone_T[zone_of[p]]);
        gaussian_blur_inplace(flux, W, H, rp.lateral_blur_sigma, scratch);

        std::uint16_t* out = film.data.data() + fs * static_cast<std::size_t>(f - 1);
        for (std::size_t p = 0; p < fs; ++p) {
            double d = rp.gain * rp.emissivity_field[p] * flux[p] + rp.env_flux_digits[p];
            if (rp.detector_noise_sigma > 0.0) d += noise_rng.normal(0.0, rp.detector_noise_sigma);
            long long q = std::llround(d);
            if (q < 0) q = 0;
            if (q > rp.adc_max) {
                q = rp.adc_max;
                ++local.saturated_digits;
            }
            out[p] = static_cast<std::uint16_t>(q);
        }
    }

    if (stats) *stats = local;
    return film;
}

void for_each_generated_film(int n_films, const ClassMix& mix, std::uint64_t master_seed,
                             const ParamRanges& ranges, const MaterialParams& base_mat,
                             const RenderParams& base_rp,
                             const std::function<void(GeneratedFilm&&)>& sink) {
    mix.validate();
    if (n_films < 0) throw std::invalid_argument("generate_dataset: n_films must be >= 0");

    for (int i = 0; i < n_films; ++i) {
        const std::uint64_t film_seed = hash_mix(master_seed, static_cast<std::uint64_t>(i));
        Rng rng(film_seed);

        GeneratedFilm g;
        g.film_seed = film_seed;
        g.material = base_mat;
        g.material.alpha *= 1.0 + rng.uniform(-ranges.alpha_jitter, ranges.alpha_jitter);
        g.material.T0 += rng.uniform(-ranges.T0_jitter_K, ranges.T0_jitter_K);

        RenderParams rp = base_rp;
        rp.rng_seed = film_seed;
        rp.emissivity_field = make_emissivity_field(rp.width, rp.height, rng);
        double env_base = 5180.0;
        if (!base_rp.env_flux_digits.empty()) env_base = base_rp.env_flux_digits.front();
        rp.env_flux_digits = make_env_field(rp.width, rp.height, rng, env_base);

        g.pulse = default_pulse(rp);
        g.pulse.absorbed_energy_J *=
            1.0 + rng.uniform(-ranges.energy_jitter, ranges.energy_jitter);

        SpecimenSpec& s = g.specimen;
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "film_%05d", i);
        s.specimen_id = idbuf;
        const double u = rng.uniform01();
        if (u < mix.good) {
            s.quality_class = QualityClass::good;
            s.nugget_diameter = rng.uniform(ranges.good_diameter_lo, ranges.good_diameter_hi);
        } else if (u < mix.good + mix.bad) {
            s.quality_class = QualityClass::bad;
            s.nugget_diameter = rng.uniform(ranges.bad_diameter_lo, ranges.bad_diameter_hi);
            s.contact_quality = rng.uniform(ranges.bad_contact_lo, ranges.bad_contact_hi);
        } else {
            s.quality_class = QualityClass::medium;
            s.nugget_diameter = rng.uniform(ranges.medium_diameter_lo, ranges.medium_diameter_hi);
        }
        const double j = ranges.center_jitter_px;
        s.nugget_center = {0.5 * rp.width + rng.uniform(-j, j), 0.5 * rp.height + rng.uniform(-j, j)};

        g.film = render_film(s, g.material, g.pulse, rp, &g.stats);
        sink(std::move(g));
    }
}

std::vector<ThermalFilm> generate_dataset(int n_films, const ClassMix& mix,
                                          std::uint64_t master_seed, const ParamRanges& ranges) {
    std::vector<ThermalFilm> films;
    films.reserve(static_cast<std::size_t>(std::max(0, n_films)));
    for_each_generated_film(n_films, mix, master_seed, ranges, default_material(),
                            default_render_params(),
                            [&](GeneratedFilm&& g) { films.push_back(std::move(g.film)); });
    return films;
}

}  // namespace tw
