#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "thermoweld/dataprep/augment.hpp"
#include "thermoweld/rng.hpp"

using namespace tw;

namespace {

Image8 random_image(int w, int h, std::uint64_t seed) {
    Rng rng(seed);
    Image8 img = Image8::make(w, h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform_index(256));
    return img;
}

/// Blob-on-gradient image; closer to the colormapped frames than white noise.
Image8 structured_image(int w, int h) {
    Image8 img = Image8::make(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = std::hypot(x - w / 2.0, y - h / 2.0);
            const std::size_t o = img.offset(y, x);
            img.pixels[o] = static_cast<std::uint8_t>(std::min(255.0, 40 + 4 * d));
            img.pixels[o + 1] = static_cast<std::uint8_t>(200 - std::min(150.0, 3 * d));
            img.pixels[o + 2] = static_cast<std::uint8_t>(30 + (x * 200) / w);
        }
    return img;
}

std::array<long, 3> channel_sums(const Image8& img) {
    std::array<long, 3> s{};
    for (std::size_t i = 0; i < img.pixels.size(); i += 3)
        for (int c = 0; c < 3; ++c) s[c] += img.pixels[i + c];
    return s;
}

}  // namespace

TEST_CASE("flips are involutions, bit-exact") {
    const Image8 img = random_image(13, 9, 1);
    CHECK(hflip(hflip(img)) == img);
    CHECK(vflip(vflip(img)) == img);
    CHECK(hflip(img) != img);
}

TEST_CASE("rotation by zero degrees is an exact copy") {
    const Image8 img = random_image(16, 11, 2);
    CHECK(rotate_bilinear(img, 0.0) == img);
}

TEST_CASE("rotation keeps the canvas and roughly preserves total intensity") {
    const Image8 img = structured_image(64, 72);
    const auto base = channel_sums(img);
    for (double angle : {-90.0, -37.5, 12.0, 45.0, 90.0}) {
        const Image8 rot = rotate_bilinear(img, angle);
        CHECK(rot.width == img.width);
        CHECK(rot.height == img.height);
        const auto got = channel_sums(rot);
        long total_base = base[0] + base[1] + base[2];
        long total_got = got[0] + got[1] + got[2];
        CHECK(std::abs(total_got - total_base) <= 0.01 * total_base);
    }
}

TEST_CASE("flip histogram preservation is exact") {
    const Image8 img = random_image(21, 17, 3);
    std::map<std::uint8_t, int> hist, hist_h, hist_v;
    for (auto p : img.pixels) hist[p]++;
    for (auto p : hflip(img).pixels) hist_h[p]++;
    for (auto p : vflip(img).pixels) hist_v[p]++;
    CHECK(hist == hist_h);
    CHECK(hist == hist_v);
}

TEST_CASE("color identities: C1 sigma 0 and C3 (0,1) are exact") {
    const Image8 img = random_image(19, 14, 4);
    const PcaColorBasis basis = pca_color_basis({&img});
    CHECK(pca_color_shift(img, basis, {0.0, 0.0, 0.0}) == img);
    CHECK(illumination(img, 0.0, 1.0) == img);
}

TEST_CASE("pca basis: identical pixels give zero eigenvalues, C1 a no-op") {
    Image8 img = Image8::make(8, 8);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
        img.pixels[i] = 10;
        img.pixels[i + 1] = 20;
        img.pixels[i + 2] = 30;
    }
    const PcaColorBasis b = pca_color_basis({&img});
    for (double ev : b.eigenvalues) CHECK(ev == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pca_color_shift(img, b, {1.0, -2.0, 0.5}) == img);
}

TEST_CASE("pca basis: gray-axis variation has one eigenvector along (1,1,1)") {
    Image8 img = Image8::make(16, 16);
    Rng rng(5);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
        const auto v = static_cast<std::uint8_t>(rng.uniform_index(256));
        img.pixels[i] = img.pixels[i + 1] = img.pixels[i + 2] = v;
    }
    const PcaColorBasis b = pca_color_basis({&img});
    CHECK(b.eigenvalues[0] > 1.0);
    CHECK(std::abs(b.eigenvalues[1]) < 1e-9);
    CHECK(std::abs(b.eigenvalues[2]) < 1e-9);
    const double inv = 1.0 / std::sqrt(3.0);
    for (int c = 0; c < 3; ++c)
        CHECK(std::abs(std::abs(b.eigenvectors[0][c]) - inv) < 1e-9);
}

TEST_CASE("pca basis: eigenpairs reconstruct the covariance") {
    const Image8 img = random_image(40, 25, 6);  // 1000 pixels
    const PcaColorBasis b = pca_color_basis({&img});

    // Direct covariance oracle.
    std::array<double, 3> mean{};
    const std::size_t n = img.pixels.size() / 3;
    for (std::size_t i = 0; i < img.pixels.size(); i += 3)
        for (int c = 0; c < 3; ++c) mean[c] += img.pixels[i + c];
    for (auto& m : mean) m /= static_cast<double>(n);
    double cov[3][3] = {};
    for (std::size_t i = 0; i < img.pixels.size(); i += 3)
        for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 3; ++c)
                cov[a][c] += (img.pixels[i + a] - mean[a]) * (img.pixels[i + c] - mean[c]);
    for (auto& row : cov)
        for (auto& v : row) v /= static_cast<double>(n);

    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) {
            double rebuilt = 0;
            for (int e = 0; e < 3; ++e)
                rebuilt += b.eigenvalues[e] * b.eigenvectors[e][a] * b.eigenvectors[e][c];
            CHECK(rebuilt == doctest::Approx(cov[a][c]).epsilon(1e-9));
        }
}

namespace {

std::vector<LabeledImage> make_labeled(int n) {
    std::vector<LabeledImage> images;
    for (int i = 0; i < n; ++i) {
        LabeledImage li;
        li.pixels = structured_image(32, 36);
        li.label = static_cast<QualityClass>(i % 3);
        li.film_id = "film_" + std::to_string(i);
        li.frame_index = 40 + i;
        images.push_back(std::move(li));
    }
    return images;
}

}  // namespace

TEST_CASE("augment: cardinality and label preservation") {
    const auto images = make_labeled(5);
    AugmentConfig cfg;
    cfg.policy = AugPolicy::positional_color;
    const auto out = augment(images, cfg, 8, 42);
    CHECK(out.size() == 40);  // 5 originals * multiplier 8
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].label == images[i / 8].label);
        if (i % 8 == 0) {
            CHECK(out[i].copy_index == 0);
            CHECK(out[i].aug_chain.empty());
            CHECK(out[i].pixels == images[i / 8].pixels);
        } else {
            CHECK_FALSE(out[i].aug_chain.empty());
        }
    }
}

TEST_CASE("augment: deterministic per (seed, film, frame, copy)") {
    const auto images = make_labeled(4);
    AugmentConfig cfg;
    cfg.policy = AugPolicy::positional_color;
    const auto a = augment(images, cfg, 4, 7);
    const auto b = augment(images, cfg, 4, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].pixels == b[i].pixels);

    // Order independence: augmenting a reversed input produces the same
    // copies for the same (film, frame, copy) keys.
    auto reversed = images;
    std::reverse(reversed.begin(), reversed.end());
    const auto c = augment(reversed, cfg, 4, 7);
    std::map<std::pair<std::string, int>, const LabeledImage*> by_key;
    for (const auto& img : c)
        if (img.copy_index == 2) by_key[{img.film_id, img.frame_index}] = &img;
    for (const auto& img : a)
        if (img.copy_index == 2) CHECK(img.pixels == by_key.at({img.film_id, img.frame_index})->pixels);
}

TEST_CASE("augment: positional policy only emits coordinate transforms") {
    const auto images = make_labeled(3);
    AugmentConfig cfg;
    cfg.policy = AugPolicy::positional;
    const auto out = augment(images, cfg, 6, 11);
    for (const auto& img : out)
        for (const auto& step : img.aug_chain) CHECK(step.op[0] == 'M');
}

TEST_CASE("augment: multiplier below 1 rejected") {
    CHECK_THROWS_AS(augment({}, AugmentConfig{}, 0, 1), std::invalid_argument);
}

TEST_CASE("hue/saturation roundtrip stays close for mild parameters") {
    const Image8 img = structured_image(24, 24);
    const Image8 out = hue_saturation(img, 0.0, 1.0);
    // Not required to be bit-exact, but the roundtrip must be tight.
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        CHECK(std::abs(int(out.pixels[i]) - int(img.pixels[i])) <= 1);
}
