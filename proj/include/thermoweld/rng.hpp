#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tw {

/// SplitMix64 step. Small, fast and fully specified, so every stream we
/// derive from it is reproducible across platforms and compilers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mix one more word into a seed. Used to derive per-film / per-image seeds
/// from (master seed, index, ...) tuples.
inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t value) {
    std::uint64_t s = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    return splitmix64(s);
}

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return hash_mix(hash_mix(seed, a), b);
}

inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash_mix(hash_mix(seed, a, b), c);
}

/// FNV-1a over bytes; stable content hash for manifests and config stamps.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic generator with uniform/normal draws and shuffling.
/// Box-Muller is used for normals so the stream does not depend on any
/// library distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n); n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    double normal(double mean = 0.0, double sigma = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sigma * spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // Avoid log(0).
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return mean + sigma * r * std::cos(a);
    }

    /// Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tw
