#pragma once

#include <filesystem>

#include "thermoweld/film.hpp"

namespace tw {

/// 8-bit RGB PNG writer/reader (libpng). The reader only accepts the files
/// this project writes: 8-bit, three channels, non-interlaced.
void write_png_rgb8(const std::filesystem::path& path, const Image8& img);
Image8 read_png_rgb8(const std::filesystem::path& path);

}  // namespace tw
