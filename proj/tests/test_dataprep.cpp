#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "thermoweld/dataprep/filters.hpp"
#include "thermoweld/dataprep/split.hpp"
#include "thermoweld/preprocess/preprocess.hpp"
#include "thermoweld/rng.hpp"

using namespace tw;

TEST_CASE("builtin filters: the twelve published rows") {
    const auto filters = builtin_filters();
    REQUIRE(filters.size() == 12);

    const FilterSpec f1 = builtin_filter("F1");
    CHECK(f1.frame_lo == 1);
    CHECK(f1.frame_hi == 25);
    CHECK(f1.intensity_lo == 5000);
    CHECK(f1.intensity_hi == 7000);
    CHECK(f1.description == "No Heating");

    const FilterSpec f3 = builtin_filter("F3");
    CHECK(f3.frame_lo == 51);
    CHECK(f3.frame_hi == 60);
    CHECK(f3.intensity_lo == 12500);
    CHECK(f3.intensity_hi == 14400);
    CHECK(f3.description == "Maximum Intensity");

    const FilterSpec f10 = builtin_filter("F10");
    CHECK(f10.frame_lo == 20);
    CHECK(f10.frame_hi == 75);
    CHECK(f10.intensity_lo == 8000);
    CHECK(f10.intensity_hi == 14400);
    CHECK(f10.description == "Peaks Combined");

    const FilterSpec f11 = builtin_filter("F11");
    CHECK(f11.frame_lo == 1);
    CHECK(f11.frame_hi == 250);

    CHECK_THROWS_AS(builtin_filter("F13"), DataError);
}

namespace {

/// Synthetic film with a prescribed mean level per frame (uniform digits).
ThermalFilm film_with_levels(const std::string& id, const std::vector<std::uint16_t>& levels,
                             std::uint8_t label = 0) {
    ThermalFilm f;
    f.width = 6;
    f.height = 5;
    f.n_frames = static_cast<int>(levels.size());
    f.frame_rate = 40.0;
    f.label = label;
    f.specimen_id = id;
    f.data.resize(f.frame_size() * levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
        std::fill_n(f.data.begin() + f.frame_size() * i, f.frame_size(), levels[i]);
    // One pixel per frame deviates so normalization has a valid denominator.
    for (std::size_t i = 0; i < levels.size(); ++i)
        f.data[f.frame_size() * i] = static_cast<std::uint16_t>(levels[i] + 40 * i);
    return f;
}

}  // namespace

TEST_CASE("apply_filter: frame AND intensity predicates, ordering, counts") {
    // 10 frames; levels inside [100, 200] only at frames 4..7.
    std::vector<std::uint16_t> levels{50, 60, 70, 120, 150, 180, 190, 300, 400, 500};
    const ThermalFilm film_b = film_with_levels("b_film", levels);
    const ThermalFilm film_a = film_with_levels("a_film", levels);
    const NormalizedFilm nb = normalize_film(film_b, 1, 2, 10, 0.5);
    const NormalizedFilm na = normalize_film(film_a, 1, 2, 10, 0.5);

    FilterSpec spec{"T", 3, 8, 100, 200, "test band"};
    const auto result = apply_filter({{&film_b, &nb}, {&film_a, &na}}, spec);

    // Brute-force double loop oracle.
    int expect = 0;
    const IntensityCurve curve = mean_intensity_curve(film_b);
    for (int f = 1; f <= film_b.n_frames; ++f)
        if (f >= spec.frame_lo && f <= spec.frame_hi && curve.at_frame(f) >= spec.intensity_lo &&
            curve.at_frame(f) <= spec.intensity_hi)
            ++expect;
    CHECK(static_cast<int>(result.images.size()) == 2 * expect);
    CHECK_FALSE(result.empty_warning);

    // Ordered by (film_id, frame_index).
    for (std::size_t i = 1; i < result.images.size(); ++i) {
        const auto& p = result.images[i - 1];
        const auto& q = result.images[i];
        CHECK((p.film_id < q.film_id ||
               (p.film_id == q.film_id && p.frame_index < q.frame_index)));
    }
}

TEST_CASE("apply_filter: film outside the band contributes nothing; empty is a warning") {
    std::vector<std::uint16_t> levels(10, 5000);
    const ThermalFilm film = film_with_levels("low", levels);
    const NormalizedFilm nf = normalize_film(film, 1, 2, 10, 0.5);
    FilterSpec spec{"T", 1, 10, 6000, 7000, "never matched"};
    const auto result = apply_filter({{&film, &nf}}, spec);
    CHECK(result.images.empty());
    CHECK(result.empty_warning);
}

TEST_CASE("apply_filter: widening ranges never decreases the count") {
    Rng rng(31);
    std::vector<std::uint16_t> levels;
    for (int i = 0; i < 30; ++i)
        levels.push_back(static_cast<std::uint16_t>(3000 + rng.uniform_index(3000)));
    const ThermalFilm film = film_with_levels("mono", levels);
    const NormalizedFilm nf = normalize_film(film, 1, 2, 30, 0.5);

    FilterSpec narrow{"N", 5, 12, 3500, 4500, ""};
    FilterSpec wide_frames = narrow;
    wide_frames.frame_lo = 2;
    wide_frames.frame_hi = 25;
    FilterSpec wide_band = narrow;
    wide_band.intensity_lo = 3000;
    wide_band.intensity_hi = 6000;

    const auto base = apply_filter({{&film, &nf}}, narrow).images.size();
    CHECK(apply_filter({{&film, &nf}}, wide_frames).images.size() >= base);
    CHECK(apply_filter({{&film, &nf}}, wide_band).images.size() >= base);
}

TEST_CASE("split: 10 films one class with (0.7, 0.15, 0.15)") {
    std::vector<FilmRef> films;
    for (int i = 0; i < 10; ++i) films.push_back({"f" + std::to_string(i), QualityClass::good});
    const DatasetSplit s = split_films(films, 0.7, 0.15, 0.15, 5);
    CHECK(s.train.size() == 7);
    // Largest-remainder with the tie broken toward the earlier split.
    CHECK(s.val.size() == 2);
    CHECK(s.test.size() == 1);
}

TEST_CASE("split: deterministic under seed, disjoint, covers all films") {
    std::vector<FilmRef> films;
    for (int i = 0; i < 40; ++i)
        films.push_back({"f" + std::to_string(i),
                         static_cast<QualityClass>(i % 3)});
    const DatasetSplit a = split_films(films, 0.7, 0.15, 0.15, 9);
    const DatasetSplit b = split_films(films, 0.7, 0.15, 0.15, 9);
    CHECK(a.train == b.train);
    CHECK(a.val == b.val);
    CHECK(a.test == b.test);

    std::set<std::string> seen;
    for (const auto* part : {&a.train, &a.val, &a.test})
        for (const auto& id : *part) CHECK(seen.insert(id).second);  // no leakage
    CHECK(seen.size() == films.size());

    const DatasetSplit c = split_films(films, 0.7, 0.15, 0.15, 10);
    CHECK(a.train != c.train);
}

TEST_CASE("split: stratification error when a populous class lands empty") {
    std::vector<FilmRef> films;
    for (int i = 0; i < 3; ++i) films.push_back({"f" + std::to_string(i), QualityClass::good});
    // 3 films cannot populate three non-zero splits.
    CHECK_THROWS_AS(split_films(films, 0.7, 0.15, 0.15, 1), DataError);
    // With a zero ratio the same three films are fine.
    const DatasetSplit s = split_films(films, 0.7, 0.0, 0.3, 1);
    CHECK(s.train.size() + s.test.size() == 3);
    CHECK(s.val.empty());
}

TEST_CASE("split: bad ratios rejected") {
    std::vector<FilmRef> films{{"a", QualityClass::good}};
    CHECK_THROWS_AS(split_films(films, 0.5, 0.5, 0.5, 1), std::invalid_argument);
}
