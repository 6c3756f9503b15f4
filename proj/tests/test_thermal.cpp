#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "support/fd1d.hpp"
#include "thermoweld/preprocess/preprocess.hpp"
#include "thermoweld/thermal/diffusion.hpp"
#include "thermoweld/thermal/render.hpp"

using namespace tw;

namespace {

MaterialParams lossless_material() {
    MaterialParams m = default_material();
    m.loss_time_constant_s = std::numeric_limits<double>::infinity();
    return m;
}

LaserPulse unit_pulse() {
    LaserPulse p;
    p.absorbed_energy_J = 500.0;
    p.area_m2 = 19e-3 * 19e-3;
    p.on_frame = 20;
    p.off_frame = 60;
    return p;
}

}  // namespace

TEST_CASE("impulse: R=0 reduces to the semi-infinite body solution") {
    MaterialParams m = lossless_material();
    m.reflectivity = 0.0;
    const LaserPulse p = unit_pulse();
    for (double t : {0.01, 0.2, 1.0, 5.0}) {
        for (double L : {5e-4, 1e-3, 3e-3}) {
            const double got = impulse_temperature(0, 0, t, L, m, p);
            const double expect =
                m.T0 + (p.absorbed_energy_J / p.area_m2) /
                           (m.rho * m.c_p * std::sqrt(M_PI * m.alpha * t));
            CHECK(got == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("impulse: lateral factor scales the rise") {
    MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();
    const double t = 0.5, L = 1e-3;
    const double inside = impulse_temperature(0, 0, t, L, m, p) - m.T0;
    const double d = 2e-3;
    const double outside = impulse_temperature(d, 0, t, L, m, p) - m.T0;
    CHECK(outside ==
          doctest::Approx(inside * std::exp(-d * d / (4 * m.alpha * t))).epsilon(1e-12));
    // x and y contribute symmetrically.
    CHECK(impulse_temperature(0, d, t, L, m, p) == doctest::Approx(outside).epsilon(1e-12));
}

TEST_CASE("impulse: large-t series factor approaches 1 + 2R/(1-R)") {
    MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();
    const double L = 1e-3;
    const double t = 2e4;  // (L^2/alpha) / t tiny, all exponentials ~ 1
    const double rise = impulse_temperature(0, 0, t, L, m, p) - m.T0;
    const double semi = (p.absorbed_energy_J / p.area_m2) /
                        (m.rho * m.c_p * std::sqrt(M_PI * m.alpha * t));
    const double limit = 1.0 + 2.0 * m.reflectivity / (1.0 - m.reflectivity);
    CHECK(rise / semi == doctest::Approx(limit).epsilon(1e-3));
}

TEST_CASE("impulse: domain errors on non-positive t or L") {
    const MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();
    CHECK_THROWS_AS(impulse_temperature(0, 0, 0.0, 1e-3, m, p), std::invalid_argument);
    CHECK_THROWS_AS(impulse_temperature(0, 0, -1.0, 1e-3, m, p), std::invalid_argument);
    CHECK_THROWS_AS(impulse_temperature(0, 0, 1.0, 0.0, m, p), std::invalid_argument);
}

TEST_CASE("impulse: linearity in Q") {
    MaterialParams m = lossless_material();
    LaserPulse p = unit_pulse();
    const double t = 0.7, L = 2e-3;
    const double rise1 = impulse_temperature(0, 0, t, L, m, p) - m.T0;
    p.absorbed_energy_J *= 2.0;
    const double rise2 = impulse_temperature(0, 0, t, L, m, p) - m.T0;
    CHECK(rise2 == doctest::Approx(2.0 * rise1).epsilon(1e-12));
}

TEST_CASE("impulse: thinner sheet stays hotter (thickness ordering)") {
    MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();
    for (double t : {0.1, 0.5, 1.5, 4.0, 6.0})
        CHECK(impulse_temperature(0, 0, t, 1e-3, m, p) >
              impulse_temperature(0, 0, t, 2e-3, m, p));
}

TEST_CASE("impulse: series truncation tolerance bounds the change") {
    MaterialParams tight = lossless_material();
    tight.series_tol = 1e-10;
    MaterialParams loose = tight;
    loose.series_tol = 1e-9;
    const LaserPulse p = unit_pulse();
    for (double t : {0.05, 0.5, 2.0, 6.0}) {
        const double a = impulse_temperature(0, 0, t, 1e-3, tight, p) - tight.T0;
        const double b = impulse_temperature(0, 0, t, 1e-3, loose, p) - loose.T0;
        CHECK(std::abs(a - b) <= loose.series_tol * std::abs(a) + 1e-15);
    }
}

TEST_CASE("impulse matches the finite-difference oracle (quick band)") {
    MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();

    testsupport::Fd1dConfig fd;
    fd.alpha = m.alpha;
    fd.rho_cp = m.rho * m.c_p;
    fd.reflectivity = m.reflectivity;
    fd.L = 1e-3;
    fd.q_per_area = p.absorbed_energy_J / p.area_m2;
    fd.domain_depth = 0.025;

    std::vector<double> times;
    for (double t = 0.5; t <= 2.5; t += 0.25) times.push_back(t);
    const std::vector<double> fd_rise = fd_surface_rise(fd, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double series = impulse_temperature(0, 0, times[i], fd.L, m, p) - m.T0;
        CHECK(std::abs(series - fd_rise[i]) / fd_rise[i] < 0.02);
    }
}

TEST_CASE("pulse: one sub-impulse equals a single impulse at the same energy") {
    MaterialParams m = lossless_material();
    LaserPulse p = unit_pulse();
    p.on_frame = 20;
    p.off_frame = 21;  // a single sub-impulse carrying all of Q
    const double rate = 40.0;
    const double t = 1.3;
    const double via_pulse = pulse_temperature(0, 0, t, 1e-3, m, p, rate);
    const double via_impulse = impulse_temperature(0, 0, t - p.on_frame / rate, 1e-3, m, p);
    CHECK(via_pulse == doctest::Approx(via_impulse).epsilon(1e-12));
}

TEST_CASE("pulse: superposition equals one impulse long after the pulse") {
    MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();
    const double rate = 40.0;
    const double t = 30.0;
    const double spread = pulse_temperature(0, 0, t, 1e-3, m, p, rate) - m.T0;
    // Single impulse of the full energy at the pulse midpoint.
    const double mid = (p.on_frame + p.off_frame - 1) / (2.0 * rate);
    const double single = impulse_temperature(0, 0, t - mid, 1e-3, m, p) - m.T0;
    CHECK(std::abs(spread - single) / single < 0.01);
}

TEST_CASE("pulse: surface temperature increases monotonically while on") {
    MaterialParams m = default_material();  // loss enabled, the production case
    const LaserPulse p = unit_pulse();
    const double rate = 40.0;
    double prev = 0.0;
    for (int f = 21; f <= 60; ++f) {
        const double T = pulse_temperature(0, 0, f / rate, 1e-3, m, p, rate);
        CHECK(T > prev);
        prev = T;
    }
}

TEST_CASE("pulse: rejects evaluation before pulse start") {
    const MaterialParams m = lossless_material();
    const LaserPulse p = unit_pulse();
    CHECK_THROWS_AS(pulse_temperature(0, 0, 0.4, 1e-3, m, p, 40.0), std::invalid_argument);
}

namespace {

RenderParams small_render_params(Rng& rng) {
    RenderParams rp = default_render_params();
    rp.emissivity_field = make_emissivity_field(rp.width, rp.height, rng);
    rp.env_flux_digits = make_env_field(rp.width, rp.height, rng, 5180.0);
    return rp;
}

SpecimenSpec good_specimen(const RenderParams& rp) {
    SpecimenSpec s;
    s.specimen_id = "unit";
    s.nugget_center = {rp.width * 0.5, rp.height * 0.5};
    s.nugget_diameter = 5.5e-3;
    return s;
}

}  // namespace

TEST_CASE("render: zero-energy pulse gives a flat curve at the baseline") {
    Rng rng(3);
    RenderParams rp = small_render_params(rng);
    rp.n_frames = 80;
    MaterialParams m = default_material();
    LaserPulse p = default_pulse(rp);
    p.absorbed_energy_J = 1e-12;  // Q > 0 required; thermally nil
    const SpecimenSpec s = good_specimen(rp);

    const ThermalFilm film = render_film(s, m, p, rp);
    const IntensityCurve c = mean_intensity_curve(film);
    double lo = 1e9, hi = -1e9;
    for (double v : c.mean_digits) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo < 1.0);             // flat within noise of the mean
    CHECK(c.at_frame(1) == doctest::Approx(6000).epsilon(0.02));
}

TEST_CASE("render: default calibration hits the published digit bands") {
    Rng rng(4);
    RenderParams rp = small_render_params(rng);
    const MaterialParams m = default_material();
    const LaserPulse p = default_pulse(rp);
    const ThermalFilm film = render_film(good_specimen(rp), m, p, rp);
    const IntensityCurve c = mean_intensity_curve(film);

    // Baseline ~6k before heating.
    for (int f = 1; f <= 20; ++f) CHECK(c.at_frame(f) == doctest::Approx(6000).epsilon(0.02));
    // Peak lands in the 12.5k..14.4k maximum-intensity band near frames 51-60.
    int argmax = 1;
    for (int f = 1; f <= c.n_frames(); ++f)
        if (c.at_frame(f) > c.at_frame(argmax)) argmax = f;
    CHECK(argmax >= 51);
    CHECK(argmax <= 60);
    CHECK(c.at_frame(argmax) >= 12500);
    CHECK(c.at_frame(argmax) <= 14400);
}

TEST_CASE("render: good specimen shows cold spot inside the nugget while cooling") {
    Rng rng(5);
    RenderParams rp = small_render_params(rng);
    const MaterialParams m = default_material();
    const LaserPulse p = default_pulse(rp);
    const SpecimenSpec s = good_specimen(rp);
    const ThermalFilm film = render_film(s, m, p, rp);
    const NormalizedFilm nf = normalize_film(film);

    const double r_px = 0.5 * s.nugget_diameter / rp.pixel_pitch;
    double in_sum = 0, out_sum = 0;
    long in_n = 0, out_n = 0;
    for (int f = 61; f <= 100; ++f)
        for (int y = 0; y < nf.height; ++y)
            for (int x = 0; x < nf.width; ++x) {
                if (!nf.is_valid(y, x)) continue;
                const double d = std::hypot(x - s.nugget_center.x, y - s.nugget_center.y);
                if (d <= r_px) {
                    in_sum += nf.at(f - 1, y, x);
                    ++in_n;
                } else if (d >= 1.3 * r_px && d <= 1.8 * r_px) {
                    out_sum += nf.at(f - 1, y, x);
                    ++out_n;
                }
            }
    CHECK(in_sum / in_n < out_sum / out_n);
}

TEST_CASE("render: bit-identical under the same seed, different otherwise") {
    Rng rng(6);
    RenderParams rp = small_render_params(rng);
    rp.n_frames = 60;
    const MaterialParams m = default_material();
    const LaserPulse p = default_pulse(rp);
    const SpecimenSpec s = good_specimen(rp);

    const ThermalFilm a = render_film(s, m, p, rp);
    const ThermalFilm b = render_film(s, m, p, rp);
    CHECK(a.data == b.data);
    RenderParams rp2 = rp;
    rp2.rng_seed += 1;
    const ThermalFilm c = render_film(s, m, p, rp2);
    CHECK(a.data != c.data);
}

TEST_CASE("render: saturation is reported, not silently clipped") {
    Rng rng(7);
    RenderParams rp = small_render_params(rng);
    rp.n_frames = 70;
    rp.gain *= 3.0;  // force clipping
    const MaterialParams m = default_material();
    const LaserPulse p = default_pulse(rp);
    RenderStats stats;
    const ThermalFilm film = render_film(good_specimen(rp), m, p, rp, &stats);
    CHECK(stats.saturated_digits > 0);
    std::uint16_t mx = 0;
    for (auto d : film.data) mx = std::max(mx, d);
    CHECK(mx == rp.adc_max);
}

TEST_CASE("generate_dataset: degenerate mix yields a single class") {
    ClassMix mix{1.0, 0.0, 0.0};
    ParamRanges ranges;
    RenderParams rp = default_render_params();
    rp.width = 40;
    rp.height = 44;
    rp.n_frames = 30;
    rp.emissivity_field.assign(rp.frame_size(), 0.75);
    rp.env_flux_digits.assign(rp.frame_size(), 5180.0);
    int count = 0;
    for_each_generated_film(10, mix, 99, ranges, default_material(), rp,
                            [&](GeneratedFilm&& g) {
                                CHECK(g.specimen.quality_class == QualityClass::good);
                                CHECK(g.film.label == 0);
                                ++count;
                            });
    CHECK(count == 10);
}

TEST_CASE("generate_dataset: n_films = 0 is an empty list, not an error") {
    CHECK(generate_dataset(0, ClassMix{}, 1).empty());
}

TEST_CASE("generate_dataset: class counts fall in the binomial 99% interval") {
    // Oracle: exact binomial quantiles by cumulative sum.
    auto binom_bounds = [](int n, double p) {
        std::vector<double> pmf(n + 1);
        double logp = std::log(p), logq = std::log1p(-p);
        for (int k = 0; k <= n; ++k) {
            double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            pmf[k] = std::exp(lg + k * logp + (n - k) * logq);
        }
        double cum = 0;
        int lo = 0, hi = n;
        for (int k = 0; k <= n; ++k) {
            cum += pmf[k];
            if (cum >= 0.005) {
                lo = k;
                break;
            }
        }
        cum = 0;
        for (int k = n; k >= 0; --k) {
            cum += pmf[k];
            if (cum >= 0.005) {
                hi = k;
                break;
            }
        }
        return std::pair{lo, hi};
    };

    ClassMix mix;  // good 0.45, bad 0.38, medium 0.17
    ParamRanges ranges;
    RenderParams rp = default_render_params();
    rp.width = 32;
    rp.height = 36;
    rp.n_frames = 25;
    rp.emissivity_field.assign(rp.frame_size(), 0.75);
    rp.env_flux_digits.assign(rp.frame_size(), 5180.0);

    const int n = 115;
    std::array<int, 3> counts{};
    for_each_generated_film(n, mix, 20250810, ranges, default_material(), rp,
                            [&](GeneratedFilm&& g) { counts[g.film.label] += 1; });

    const auto [glo, ghi] = binom_bounds(n, mix.good);
    const auto [blo, bhi] = binom_bounds(n, mix.bad);
    const auto [mlo, mhi] = binom_bounds(n, mix.medium);
    CHECK(counts[0] >= glo);
    CHECK(counts[0] <= ghi);
    CHECK(counts[2] >= blo);
    CHECK(counts[2] <= bhi);
    CHECK(counts[1] >= mlo);
    CHECK(counts[1] <= mhi);
}

TEST_CASE("generate_dataset: same master seed twice gives bit-identical films") {
    ParamRanges ranges;
    RenderParams rp = default_render_params();
    rp.width = 32;
    rp.height = 36;
    rp.n_frames = 25;
    rp.emissivity_field.assign(rp.frame_size(), 0.75);
    rp.env_flux_digits.assign(rp.frame_size(), 5180.0);

    std::vector<ThermalFilm> a, b;
    for_each_generated_film(6, ClassMix{}, 777, ranges, default_material(), rp,
                            [&](GeneratedFilm&& g) { a.push_back(std::move(g.film)); });
    for_each_generated_film(6, ClassMix{}, 777, ranges, default_material(), rp,
                            [&](GeneratedFilm&& g) { b.push_back(std::move(g.film)); });
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].data == b[i].data);
        CHECK(a[i].label == b[i].label);
    }
}
