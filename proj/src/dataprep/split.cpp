#include "thermoweld/dataprep/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "thermoweld/rng.hpp"

namespace tw {

namespace {

/// Largest-remainder apportioning of n items to the ratios; ties break
/// toward the earlier split.
std::array<int, 3> apportion(int n, const std::array<double, 3>& ratios) {
    std::array<int, 3> counts{};
    std::array<double, 3> rem{};
    int assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = n * ratios[i];
        counts[i] = static_cast<int>(std::floor(exact + 1e-12));
        rem[i] = exact - counts[i];
        assigned += counts[i];
    }
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
    for (int k = 0; assigned < n; ++k) {
        ++counts[order[k % 3]];
        ++assigned;
    }
    return counts;
}

}  // namespace

DatasetSplit split_films(const std::vector<FilmRef>& films, double train_ratio, double val_ratio,
                         double test_ratio, std::uint64_t seed) {
    if (std::abs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9 || train_ratio < 0 ||
        val_ratio < 0 || test_ratio < 0)
        throw std::invalid_argument("split_films: ratios must be >= 0 and sum to 1");

    DatasetSplit split;
    split.seed = seed;
    const std::array<double, 3> ratios{train_ratio, val_ratio, test_ratio};

    for (int cls = 0; cls < 3; ++cls) {
        std::vector<std::string> ids;
        for (const FilmRef& f : films)
            if (static_cast<int>(f.label) == cls) ids.push_back(f.film_id);
        if (ids.empty()) continue;
        std::sort(ids.begin(), ids.end());
        Rng rng(hash_mix(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(ids);

        const auto counts = apportion(static_cast<int>(ids.size()), ratios);
        if (ids.size() >= 3)
            for (int i = 0; i < 3; ++i)
                if (counts[i] == 0 && ratios[i] > 0)
                    throw DataError(std::string("split_films: class ") +
                                    to_string(static_cast<QualityClass>(cls)) +
                                    " has no films in one requested split");

        std::size_t at = 0;
        for (int i = 0; i < counts[0]; ++i) split.train.push_back(ids[at++]);
        for (int i = 0; i < counts[1]; ++i) split.val.push_back(ids[at++]);
        for (int i = 0; i < counts[2]; ++i) split.test.push_back(ids[at++]);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

}  // namespace tw
