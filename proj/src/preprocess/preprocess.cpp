#include "thermoweld/preprocess/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tw {

IntensityCurve mean_intensity_curve(const ThermalFilm& film) {
    if (!film.well_formed()) throw std::invalid_argument("mean_intensity_curve: empty or malformed film");
    IntensityCurve curve;
    curve.mean_digits.resize(film.n_frames);
    const std::size_t fs = film.frame_size();
    for (int f = 0; f < film.n_frames; ++f) {
        const std::uint16_t* p = film.data.data() + fs * static_cast<std::size_t>(f);
        double sum = 0.0;
        for (std::size_t i = 0; i < fs; ++i) sum += p[i];
        curve.mean_digits[f] = sum / static_cast<double>(fs);
    }
    return curve;
}

NormalizedFilm normalize_film(const ThermalFilm& film, int t0_lo, int t0_hi, int t_norm_frame,
                              double eps) {
    if (!film.well_formed()) throw std::invalid_argument("normalize_film: malformed film");
    if (t0_lo < 1 || t0_hi < t0_lo || t0_hi > film.n_frames)
        throw std::invalid_argument("normalize_film: bad t0 frame range");
    if (t_norm_frame <= t0_hi || t_norm_frame > film.n_frames)
        throw std::invalid_argument("normalize_film: t_norm must lie after the cold reference");
    if (!(eps >= 0)) throw std::invalid_argument("normalize_film: eps must be >= 0");

    const std::size_t fs = film.frame_size();
    NormalizedFilm nf;
    nf.width = film.width;
    nf.height = film.height;
    nf.n_frames = film.n_frames;
    nf.t0_lo = t0_lo;
    nf.t0_hi = t0_hi;
    nf.t_norm_frame = t_norm_frame;
    nf.label = film.label;
    nf.specimen_id = film.specimen_id;
    nf.data.assign(fs * static_cast<std::size_t>(film.n_frames), 0.0f);
    nf.valid.assign(fs, 0);

    std::vector<double> ref0(fs, 0.0), denom(fs, 0.0);
    for (int f = t0_lo; f <= t0_hi; ++f) {
        const std::uint16_t* p = film.data.data() + fs * static_cast<std::size_t>(f - 1);
        for (std::size_t i = 0; i < fs; ++i) ref0[i] += p[i];
    }
    const double inv_n0 = 1.0 / (t0_hi - t0_lo + 1);
    std::size_t n_valid = 0;
    {
        const std::uint16_t* pn = film.data.data() + fs * static_cast<std::size_t>(t_norm_frame - 1);
        for (std::size_t i = 0; i < fs; ++i) {
            ref0[i] *= inv_n0;
            denom[i] = pn[i] - ref0[i];
            if (std::abs(denom[i]) > eps) {
                nf.valid[i] = 1;
                ++n_valid;
            }
        }
    }
    if (n_valid == 0) throw DataError("normalize_film: degenerate film, all pixels invalid");

    for (int f = 0; f < film.n_frames; ++f) {
        const std::uint16_t* p = film.data.data() + fs * static_cast<std::size_t>(f);
        float* out = nf.data.data() + fs * static_cast<std::size_t>(f);
        for (std::size_t i = 0; i < fs; ++i)
            out[i] = nf.valid[i] ? static_cast<float>((p[i] - ref0[i]) / denom[i]) : 0.0f;
    }
    return nf;
}

std::array<std::uint8_t, 3> colormap_bgr_ramp(double v) {
    v = std::clamp(v, 0.0, 1.0);
    auto half_up = [](double x) {
        return static_cast<std::uint8_t>(std::clamp(std::floor(x + 0.5), 0.0, 255.0));
    };
    if (v <= 0.5) {
        const double s = v / 0.5;
        return {0, half_up(255.0 * s), half_up(255.0 * (1.0 - s))};
    }
    const double s = (v - 0.5) / 0.5;
    return {half_up(255.0 * s), half_up(255.0 * (1.0 - s)), 0};
}

Image8 to_rgb(std::span<const float> frame, int width, int height,
              std::span<const std::uint8_t> valid, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("to_rgb: hi must be > lo");
    if (frame.size() != static_cast<std::size_t>(width) * height ||
        valid.size() != frame.size())
        throw std::invalid_argument("to_rgb: size mismatch");
    Image8 img = Image8::make(width, height);
    const double inv = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (!valid[i]) continue;  // stays (0,0,0)
        const auto rgb = colormap_bgr_ramp((frame[i] - lo) * inv);
        img.pixels[3 * i + 0] = rgb[0];
        img.pixels[3 * i + 1] = rgb[1];
        img.pixels[3 * i + 2] = rgb[2];
    }
    return img;
}

Image8 to_rgb(const NormalizedFilm& nf, int frame_1based, double lo, double hi) {
    const std::size_t fs = nf.frame_size();
    return to_rgb({nf.data.data() + fs * static_cast<std::size_t>(frame_1based - 1), fs},
                  nf.width, nf.height, {nf.valid.data(), fs}, lo, hi);
}

double frame_percentile(const NormalizedFilm& nf, int frame_1based, double p) {
    const std::size_t fs = nf.frame_size();
    const float* frame = nf.data.data() + fs * static_cast<std::size_t>(frame_1based - 1);
    std::vector<float> vals;
    vals.reserve(fs);
    for (std::size_t i = 0; i < fs; ++i)
        if (nf.valid[i]) vals.push_back(frame[i]);
    if (vals.empty()) throw DataError("frame_percentile: no valid pixels");
    p = std::clamp(p, 0.0, 100.0);
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * vals.size()));
    if (rank > 0) --rank;
    std::nth_element(vals.begin(), vals.begin() + rank, vals.end());
    return vals[rank];
}

std::string curve_to_csv(const IntensityCurve& curve) {
    std::string out = "frame_index,mean_digits\n";
    char buf[64];
    for (int f = 1; f <= curve.n_frames(); ++f) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f\n", f, curve.at_frame(f));
        out += buf;
    }
    return out;
}

}  // namespace tw
