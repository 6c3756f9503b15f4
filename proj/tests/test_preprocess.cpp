#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thermoweld/preprocess/preprocess.hpp"
#include "thermoweld/thermal/render.hpp"

using namespace tw;

namespace {

ThermalFilm constant_film(int w, int h, int nf, std::uint16_t digit) {
    ThermalFilm f;
    f.width = w;
    f.height = h;
    f.n_frames = nf;
    f.frame_rate = 40.0;
    f.specimen_id = "const";
    f.data.assign(static_cast<std::size_t>(w) * h * nf, digit);
    return f;
}

struct RenderFixture {
    MaterialParams mat = default_material();
    RenderParams rp;
    LaserPulse pulse;
    SpecimenSpec spec;

    explicit RenderFixture(std::uint64_t seed, bool noise = true) {
        Rng rng(seed);
        rp = default_render_params();
        rp.emissivity_field = make_emissivity_field(rp.width, rp.height, rng);
        rp.env_flux_digits = make_env_field(rp.width, rp.height, rng, 5180.0);
        rp.rng_seed = seed;
        if (!noise) rp.detector_noise_sigma = 0.0;
        pulse = default_pulse(rp);
        spec.specimen_id = "fixture";
        spec.nugget_center = {rp.width * 0.5, rp.height * 0.5};
        spec.nugget_diameter = 5.5e-3;
    }

    ThermalFilm render() const { return render_film(spec, mat, pulse, rp); }
};

}  // namespace

TEST_CASE("curve: constant film gives a constant curve") {
    const ThermalFilm f = constant_film(7, 5, 4, 1234);
    const IntensityCurve c = mean_intensity_curve(f);
    REQUIRE(c.n_frames() == 4);
    for (int i = 1; i <= 4; ++i) CHECK(c.at_frame(i) == 1234.0);
}

TEST_CASE("curve: 2x2x2 hand-checked means") {
    ThermalFilm f = constant_film(2, 2, 2, 0);
    f.data = {1, 2, 3, 4, 5, 6, 7, 8};
    const IntensityCurve c = mean_intensity_curve(f);
    CHECK(c.at_frame(1) == 2.5);
    CHECK(c.at_frame(2) == 6.5);
}

TEST_CASE("curve: default render traverses the published bands") {
    const RenderFixture fx(11);
    const IntensityCurve c = mean_intensity_curve(fx.render());
    // No-heating band.
    for (int f = 1; f <= 25; ++f) {
        CHECK(c.at_frame(f) >= 5000);
        CHECK(c.at_frame(f) <= 7000);
    }
    // Maximum-intensity band.
    double peak = 0;
    for (int f = 1; f <= c.n_frames(); ++f) peak = std::max(peak, c.at_frame(f));
    CHECK(peak >= 12500);
    CHECK(peak <= 14400);
    // Decay toward the 6.0k..6.1k end band.
    for (int f = 211; f <= 250; ++f) {
        CHECK(c.at_frame(f) >= 6000);
        CHECK(c.at_frame(f) <= 6110);
    }
}

TEST_CASE("normalize: value at t_norm is exactly 1 for valid pixels") {
    const RenderFixture fx(12);
    const ThermalFilm film = fx.render();
    const NormalizedFilm nf = normalize_film(film);
    const std::size_t fs = nf.frame_size();
    const float* tn = nf.data.data() + fs * static_cast<std::size_t>(nf.t_norm_frame - 1);
    for (std::size_t i = 0; i < fs; ++i)
        if (nf.valid[i]) CHECK(tn[i] == 1.0f);
}

TEST_CASE("normalize: never-heated pixel is invalid (division guard)") {
    ThermalFilm f = constant_film(4, 4, 20, 6000);
    // One pixel heats up, the rest stay at the reference level.
    for (int frame = 10; frame < 20; ++frame) f.data[f.index(frame, 1, 1)] = 9000;
    const NormalizedFilm nf = normalize_film(f, 1, 5, 20, 8.0);
    CHECK(nf.is_valid(1, 1));
    CHECK_FALSE(nf.is_valid(0, 0));
    CHECK(nf.at(3, 0, 0) == 0.0f);  // invalid pixels are exactly zero
}

TEST_CASE("normalize: all pixels invalid is a degenerate-film error") {
    const ThermalFilm f = constant_film(4, 4, 20, 6000);
    CHECK_THROWS_AS(normalize_film(f, 1, 5, 20, 8.0), DataError);
}

TEST_CASE("normalize: adding a constant to every digit changes nothing") {
    const RenderFixture fx(13, /*noise=*/false);
    ThermalFilm film = fx.render();
    const NormalizedFilm base = normalize_film(film);
    std::uint16_t mx = 0;
    for (auto d : film.data) mx = std::max(mx, d);
    const std::uint16_t c = 1500;
    REQUIRE(mx + c < 65535);
    for (auto& d : film.data) d = static_cast<std::uint16_t>(d + c);
    const NormalizedFilm shifted = normalize_film(film);
    CHECK(base.data == shifted.data);
    CHECK(base.valid == shifted.valid);
}

TEST_CASE("normalize: emissivity fields cancel (render-twice oracle)") {
    RenderFixture a(14, /*noise=*/false), b(14, /*noise=*/false);
    Rng other(987);
    b.rp.emissivity_field = make_emissivity_field(b.rp.width, b.rp.height, other);

    const ThermalFilm fa = a.render();
    const ThermalFilm fb = b.render();
    // Normalize against an early-cooling reference where the denominator is
    // large; the quantization bound 2(1+|v|)/denom then stays tight.
    const NormalizedFilm na = normalize_film(fa, 1, 10, 65, 8.0);
    const NormalizedFilm nb = normalize_film(fb, 1, 10, 65, 8.0);

    const std::size_t fs = na.frame_size();
    std::vector<double> denom_a(fs), denom_b(fs);
    {
        std::vector<double> ref_a(fs, 0), ref_b(fs, 0);
        for (int f = 0; f < 10; ++f)
            for (std::size_t i = 0; i < fs; ++i) {
                ref_a[i] += fa.data[fs * f + i];
                ref_b[i] += fb.data[fs * f + i];
            }
        for (std::size_t i = 0; i < fs; ++i) {
            denom_a[i] = fa.data[fs * 64 + i] - ref_a[i] / 10.0;
            denom_b[i] = fb.data[fs * 64 + i] - ref_b[i] / 10.0;
        }
    }

    std::size_t checked = 0, ok = 0;
    for (int f = 0; f < na.n_frames; ++f) {
        for (std::size_t i = 0; i < fs; ++i) {
            if (!na.valid[i] || !nb.valid[i]) continue;
            const double va = na.data[fs * f + i], vb = nb.data[fs * f + i];
            const double tol =
                2.0 * (1.0 + std::abs(va)) / std::min(std::abs(denom_a[i]), std::abs(denom_b[i]));
            ++checked;
            ok += (std::abs(va - vb) <= tol);
        }
    }
    CHECK(checked > 0);
    CHECK(static_cast<double>(ok) / checked >= 0.999);
}

TEST_CASE("normalize: pre-quantization gain scaling leaves values unchanged") {
    RenderFixture a(15, /*noise=*/false), b(15, /*noise=*/false);
    const double k = 1.7;
    b.rp.gain *= k;
    for (auto& e : b.rp.env_flux_digits) e *= k;
    b.rp.adc_max = 32000;  // room for the scaled digits

    const NormalizedFilm na = normalize_film(a.render(), 1, 10, 65, 8.0);
    const NormalizedFilm nb = normalize_film(b.render(), 1, 10, 65, 8.0);
    const std::size_t fs = na.frame_size();
    std::size_t checked = 0, ok = 0;
    for (std::size_t idx = 0; idx < na.data.size(); ++idx) {
        const std::size_t i = idx % fs;
        if (!na.valid[i] || !nb.valid[i]) continue;
        ++checked;
        ok += (std::abs(na.data[idx] - nb.data[idx]) <= 0.02 * (1.0 + std::abs(na.data[idx])));
    }
    CHECK(checked > 0);
    CHECK(static_cast<double>(ok) / checked >= 0.999);
}

TEST_CASE("to_rgb: colormap control points and interpolation") {
    CHECK(colormap_bgr_ramp(0.0) == std::array<std::uint8_t, 3>{0, 0, 255});
    CHECK(colormap_bgr_ramp(0.5) == std::array<std::uint8_t, 3>{0, 255, 0});
    CHECK(colormap_bgr_ramp(1.0) == std::array<std::uint8_t, 3>{255, 0, 0});
    CHECK(colormap_bgr_ramp(0.25) == std::array<std::uint8_t, 3>{0, 128, 128});
}

TEST_CASE("to_rgb: monotone channels along the ramp") {
    int prev_r = -1, prev_b = 256;
    for (int i = 0; i <= 1000; ++i) {
        const auto rgb = colormap_bgr_ramp(i / 1000.0);
        CHECK(static_cast<int>(rgb[0]) >= prev_r);
        CHECK(static_cast<int>(rgb[2]) <= prev_b);
        prev_r = rgb[0];
        prev_b = rgb[2];
    }
}

TEST_CASE("to_rgb: all-invalid frame renders black and hi<=lo is rejected") {
    std::vector<float> frame(16, 0.5f);
    std::vector<std::uint8_t> valid(16, 0);
    const Image8 img = to_rgb({frame.data(), frame.size()}, 4, 4, {valid.data(), valid.size()},
                              0.0, 1.0);
    for (auto p : img.pixels) CHECK(p == 0);
    CHECK_THROWS_AS(to_rgb({frame.data(), frame.size()}, 4, 4, {valid.data(), valid.size()}, 1.0,
                           1.0),
                    std::invalid_argument);
}

TEST_CASE("curve CSV format") {
    IntensityCurve c;
    c.mean_digits = {1.5, 2.0};
    const std::string csv = curve_to_csv(c);
    CHECK(csv == "frame_index,mean_digits\n1,1.500000\n2,2.000000\n");
}
