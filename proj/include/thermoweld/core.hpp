#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tw {

inline constexpr const char* kToolVersion = "0.1.0";

/// Weld quality classes, ordered; the byte values are also the on-disk codes.
enum class QualityClass : std::uint8_t { good = 0, medium = 1, bad = 2 };

inline constexpr std::uint8_t kUnlabeled = 255;

inline const char* to_string(QualityClass c) {
    switch (c) {
        case QualityClass::good: return "good";
        case QualityClass::medium: return "medium";
        case QualityClass::bad: return "bad";
    }
    return "?";
}

inline QualityClass quality_from_string(const std::string& s) {
    if (s == "good") return QualityClass::good;
    if (s == "medium") return QualityClass::medium;
    if (s == "bad") return QualityClass::bad;
    throw std::invalid_argument("unknown quality class: " + s);
}

/// Data/contract failures on files, manifests and selections (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failures such as a diverging training loss (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Axis-aligned rectangle in pixel coordinates, [x0,x1) x [y0,y1).
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
};

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

}  // namespace tw
