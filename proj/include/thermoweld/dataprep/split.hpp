#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermoweld/core.hpp"

namespace tw {

/// Film-level train/val/test partition. Splitting at film granularity is
/// what prevents frames of one film leaking across splits.
struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
    bool stratified = true;
    std::uint64_t seed = 0;
};

struct FilmRef {
    std::string film_id;
    QualityClass label;
};

/// Stratified split by class at film granularity. Within each class the
/// films are shuffled by the seed and cut with largest-remainder rounding
/// (ties go to the earlier split). Ratios must sum to 1.
/// Throws DataError when a class with >= 3 films receives an empty split
/// whose ratio is > 0.
DatasetSplit split_films(const std::vector<FilmRef>& films, double train_ratio, double val_ratio,
                         double test_ratio, std::uint64_t seed);

}  // namespace tw
