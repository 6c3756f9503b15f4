#include "thermoweld/dataprep/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "thermoweld/rng.hpp"

namespace tw {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

/// Per-channel mean over the first/last row and column.
std::array<double, 3> border_mean(const Image8& img) {
    std::array<double, 3> sum{};
    std::size_t n = 0;
    auto add = [&](int y, int x) {
        const std::size_t o = img.offset(y, x);
        for (int c = 0; c < 3; ++c) sum[c] += img.pixels[o + c];
        ++n;
    };
    for (int x = 0; x < img.width; ++x) {
        add(0, x);
        if (img.height > 1) add(img.height - 1, x);
    }
    for (int y = 1; y + 1 < img.height; ++y) {
        add(y, 0);
        if (img.width > 1) add(y, img.width - 1);
    }
    for (auto& s : sum) s /= static_cast<double>(n);
    return sum;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    v = mx;
    const double d = mx - mn;
    s = mx > 0 ? d / mx : 0.0;
    if (d <= 0) {
        h = 0;
        return;
    }
    if (mx == r)
        h = std::fmod((g - b) / d, 6.0);
    else if (mx == g)
        h = (b - r) / d + 2.0;
    else
        h = (r - g) / d + 4.0;
    h /= 6.0;
    if (h < 0) h += 1.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    h = h - std::floor(h);
    const double hh = h * 6.0;
    const int i = static_cast<int>(hh) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    switch (i) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
}

/// Jacobi eigendecomposition for a symmetric 3x3 matrix.
void jacobi3(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& evals,
             std::array<std::array<double, 3>, 3>& evecs) {
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] > a[j][j]; });
    for (int i = 0; i < 3; ++i) {
        evals[i] = a[order[i]][order[i]];
        for (int k = 0; k < 3; ++k) evecs[i][k] = v[k][order[i]];
    }
}

}  // namespace

PcaColorBasis pca_color_basis(const std::vector<const Image8*>& sample) {
    std::array<double, 3> mean{};
    std::size_t n = 0;
    for (const Image8* img : sample) {
        for (std::size_t i = 0; i < img->pixels.size(); i += 3) {
            for (int c = 0; c < 3; ++c) mean[c] += img->pixels[i + c];
            ++n;
        }
    }
    if (n == 0) throw std::invalid_argument("pca_color_basis: empty sample");
    for (auto& m : mean) m /= static_cast<double>(n);

    std::array<std::array<double, 3>, 3> cov{};
    for (const Image8* img : sample) {
        for (std::size_t i = 0; i < img->pixels.size(); i += 3) {
            const double d0 = img->pixels[i] - mean[0];
            const double d1 = img->pixels[i + 1] - mean[1];
            const double d2 = img->pixels[i + 2] - mean[2];
            cov[0][0] += d0 * d0;
            cov[0][1] += d0 * d1;
            cov[0][2] += d0 * d2;
            cov[1][1] += d1 * d1;
            cov[1][2] += d1 * d2;
            cov[2][2] += d2 * d2;
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            cov[i][j] /= static_cast<double>(n);
            cov[j][i] = cov[i][j];
        }

    PcaColorBasis basis;
    jacobi3(cov, basis.eigenvalues, basis.eigenvectors);
    for (auto& ev : basis.eigenvalues)
        if (ev < 0 && ev > -1e-9) ev = 0;  // numerical dust on degenerate input
    return basis;
}

Image8 hflip(const Image8& img) {
    Image8 out = Image8::make(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::size_t src = img.offset(y, img.width - 1 - x), dst = out.offset(y, x);
            for (int c = 0; c < 3; ++c) out.pixels[dst + c] = img.pixels[src + c];
        }
    return out;
}

Image8 vflip(const Image8& img) {
    Image8 out = Image8::make(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        const std::size_t src = img.offset(img.height - 1 - y, 0), dst = out.offset(y, 0);
        std::copy_n(img.pixels.data() + src, static_cast<std::size_t>(img.width) * 3,
                    out.pixels.data() + dst);
    }
    return out;
}

Image8 rotate_bilinear(const Image8& img, double angle_deg) {
    const double a = angle_deg * kPi / 180.0;
    const double c = std::cos(a), s = std::sin(a);
    const double cx = 0.5 * (img.width - 1), cy = 0.5 * (img.height - 1);
    const std::array<double, 3> fill = border_mean(img);

    Image8 out = Image8::make(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // Inverse map: rotate the destination point back by -angle.
            const double dx = x - cx, dy = y - cy;
            const double sx = cx + c * dx + s * dy;
            const double sy = cy - s * dx + c * dy;
            const std::size_t dst = out.offset(y, x);
            const double fx = std::floor(sx), fy = std::floor(sy);
            const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
            const double wx = sx - fx, wy = sy - fy;
            for (int ch = 0; ch < 3; ++ch) {
                auto tap = [&](int yy, int xx) -> double {
                    if (xx < 0 || xx >= img.width || yy < 0 || yy >= img.height) return fill[ch];
                    return img.pixels[img.offset(yy, xx) + ch];
                };
                const double v = (1 - wy) * ((1 - wx) * tap(iy, ix) + wx * tap(iy, ix + 1)) +
                                 wy * ((1 - wx) * tap(iy + 1, ix) + wx * tap(iy + 1, ix + 1));
                out.pixels[dst + ch] = clamp_u8(v);
            }
        }
    }
    return out;
}

Image8 pca_color_shift(const Image8& img, const PcaColorBasis& basis,
                       const std::array<double, 3>& alphas) {
    std::array<double, 3> shift{};
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 3; ++c)
            shift[c] += alphas[i] * basis.eigenvalues[i] * basis.eigenvectors[i][c];

    Image8 out = img;
    if (shift[0] == 0.0 && shift[1] == 0.0 && shift[2] == 0.0) return out;
    for (std::size_t i = 0; i < out.pixels.size(); i += 3)
        for (int c = 0; c < 3; ++c)
            out.pixels[i + c] = clamp_u8(img.pixels[i + c] + shift[c]);
    return out;
}

Image8 hue_saturation(const Image8& img, double hue_shift_turns, double sat_scale) {
    Image8 out = Image8::make(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
        double r = img.pixels[i] / 255.0, g = img.pixels[i + 1] / 255.0,
               b = img.pixels[i + 2] / 255.0;
        double h, s, v;
        rgb_to_hsv(r, g, b, h, s, v);
        h += hue_shift_turns;
        s = std::clamp(s * sat_scale, 0.0, 1.0);
        hsv_to_rgb(h, s, v, r, g, b);
        out.pixels[i] = clamp_u8(r * 255.0);
        out.pixels[i + 1] = clamp_u8(g * 255.0);
        out.pixels[i + 2] = clamp_u8(b * 255.0);
    }
    return out;
}

Image8 illumination(const Image8& img, double offset, double scale) {
    double mean = 0.0;
    for (std::uint8_t p : img.pixels) mean += p;
    mean /= static_cast<double>(img.pixels.size());

    Image8 out = img;
    const double add = (1.0 - scale) * mean + offset;  // exactly 0 for (0, 1)
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = clamp_u8(img.pixels[i] * scale + add);
    return out;
}

namespace {

Image8 apply_random_op(const Image8& img, const AugmentConfig& cfg, const PcaColorBasis& basis,
                       Rng& rng, std::vector<AugStep>& chain) {
    auto positional = [&](const Image8& in) -> Image8 {
        switch (rng.uniform_index(3)) {
            case 0: chain.push_back({"M1"}); return hflip(in);
            case 1: chain.push_back({"M2"}); return vflip(in);
            default: {
                const double angle = rng.uniform(-cfg.rotation_max_deg, cfg.rotation_max_deg);
                char buf[32];
                std::snprintf(buf, sizeof(buf), "M3(%.2f)", angle);
                chain.push_back({buf});
                return rotate_bilinear(in, angle);
            }
        }
    };
    auto color = [&](const Image8& in) -> Image8 {
        char buf[48];
        switch (rng.uniform_index(3)) {
            case 0: {
                std::array<double, 3> alphas{rng.normal(0, cfg.pca_sigma),
                                             rng.normal(0, cfg.pca_sigma),
                                             rng.normal(0, cfg.pca_sigma)};
                std::snprintf(buf, sizeof(buf), "C1(%.3f,%.3f,%.3f)", alphas[0], alphas[1],
                              alphas[2]);
                chain.push_back({buf});
                return pca_color_shift(in, basis, alphas);
            }
            case 1: {
                const double dh = rng.uniform(-cfg.hue_max_turns, cfg.hue_max_turns);
                const double ds = rng.uniform(cfg.sat_scale_lo, cfg.sat_scale_hi);
                std::snprintf(buf, sizeof(buf), "C2(%.3f,%.3f)", dh, ds);
                chain.push_back({buf});
                return hue_saturation(in, dh, ds);
            }
            default: {
                const double off = rng.uniform(-cfg.illum_offset_max, cfg.illum_offset_max);
                const double sc = rng.uniform(cfg.contrast_lo, cfg.contrast_hi);
                std::snprintf(buf, sizeof(buf), "C3(%.2f,%.3f)", off, sc);
                chain.push_back({buf});
                return illumination(in, off, sc);
            }
        }
    };

    switch (cfg.policy) {
        case AugPolicy::positional:
            return positional(img);
        case AugPolicy::color:
            return color(img);
        case AugPolicy::positional_color: {
            // One of M1..M3, C1..C3 or a positional-then-color combo.
            const auto pick = rng.uniform_index(7);
            if (pick < 3u) return positional(img);  // rng already advanced only inside
            if (pick < 6u) return color(img);
            Image8 tmp = positional(img);
            return color(tmp);
        }
    }
    return img;
}

}  // namespace

std::vector<LabeledImage> augment(const std::vector<LabeledImage>& images,
                                  const AugmentConfig& cfg, int multiplier, std::uint64_t seed,
                                  const PcaColorBasis* shared_basis) {
    if (multiplier < 1) throw std::invalid_argument("augment: multiplier must be >= 1");

    // PCA basis from a deterministic sample of the input set, unless given.
    PcaColorBasis basis;
    if (shared_basis) {
        basis = *shared_basis;
    } else if (!images.empty()) {
        std::vector<const Image8*> sample;
        const std::size_t stride = std::max<std::size_t>(1, images.size() / 64);
        for (std::size_t i = 0; i < images.size(); i += stride) sample.push_back(&images[i].pixels);
        basis = pca_color_basis(sample);
    }

    std::vector<LabeledImage> out;
    out.reserve(images.size() * static_cast<std::size_t>(multiplier));
    for (const LabeledImage& src : images) {
        out.push_back(src);
        for (int copy = 1; copy < multiplier; ++copy) {
            Rng rng(hash_mix(seed, fnv1a64(src.film_id), static_cast<std::uint64_t>(src.frame_index),
                             static_cast<std::uint64_t>(copy)));
            LabeledImage aug = src;
            aug.copy_index = copy;
            aug.pixels = apply_random_op(src.pixels, cfg, basis, rng, aug.aug_chain);
            out.push_back(std::move(aug));
        }
    }
    return out;
}

}  // namespace tw
