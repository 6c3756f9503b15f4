#include "thermoweld/dataprep/filters.hpp"

#include <algorithm>

#include "thermoweld/preprocess/preprocess.hpp"

namespace tw {

std::vector<FilterSpec> builtin_filters() {
    return {
        {"F1", 1, 25, 5000, 7000, "No Heating"},
        {"F2", 35, 45, 9000, 11000, "Intensity Peak 2"},
        {"F3", 51, 60, 12500, 14400, "Maximum Intensity"},
        {"F4", 61, 75, 9700, 11000, "After-Maximum"},
        {"F5", 76, 100, 8000, 9100, "Cool Down"},
        {"F6", 101, 135, 7000, 8000, "Cool Down"},
        {"F7", 136, 170, 6600, 7000, "Cool Down"},
        {"F8", 171, 210, 6200, 6500, "Cool Down"},
        {"F9", 211, 250, 6050, 6100, "End"},
        {"F10", 20, 75, 8000, 14400, "Peaks Combined"},
        {"F11", 1, 250, 400, 14000, "Whole Film"},
        {"F12", 101, 250, 6200, 8000, "Cool Down"},
    };
}

FilterSpec builtin_filter(const std::string& id) {
    for (auto& f : builtin_filters())
        if (f.id == id) return f;
    throw DataError("unknown filter id: " + id);
}

std::vector<int> selected_frames(const IntensityCurve& curve, const FilterSpec& spec) {
    std::vector<int> out;
    const int hi = std::min(spec.frame_hi, curve.n_frames());
    for (int f = spec.frame_lo; f <= hi; ++f)
        if (spec.selects(f, curve.at_frame(f))) out.push_back(f);
    return out;
}

FilterApplication apply_filter(
    const std::vector<std::pair<const ThermalFilm*, const NormalizedFilm*>>& films,
    const FilterSpec& spec) {
    spec.validate();
    FilterApplication result;
    // Output order is (film_id, frame_index).
    std::vector<std::size_t> order(films.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return films[a].first->specimen_id < films[b].first->specimen_id;
    });

    for (std::size_t idx : order) {
        const ThermalFilm& film = *films[idx].first;
        const NormalizedFilm& nf = *films[idx].second;
        if (film.n_frames != nf.n_frames || film.width != nf.width || film.height != nf.height)
            throw std::invalid_argument("apply_filter: raw/normalized film mismatch");
        const IntensityCurve curve = mean_intensity_curve(film);
        const std::vector<int> frames = selected_frames(curve, spec);
        for (int f : frames) {
            LabeledImage img;
            img.display_lo = frame_percentile(nf, f, 1.0);
            img.display_hi = frame_percentile(nf, f, 99.0);
            if (!(img.display_hi > img.display_lo)) img.display_hi = img.display_lo + 1.0;
            img.pixels = to_rgb(nf, f, img.display_lo, img.display_hi);
            img.label = static_cast<QualityClass>(film.label);
            img.film_id = film.specimen_id;
            img.frame_index = f;
            result.images.push_back(std::move(img));
        }
        result.per_film_counts.emplace_back(film.specimen_id, static_cast<int>(frames.size()));
    }
    result.empty_warning = result.images.empty();
    return result;
}

}  // namespace tw
