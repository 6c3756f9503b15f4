#pragma once

#include <filesystem>
#include <string>

#include "thermoweld/film.hpp"

namespace tw {

/// Binary film container. 64-byte little-endian header, zero-padded:
///   0  char[4]  magic: "TFLM" (raw digits) / "TFLN" (normalized floats)
///   4  u32      format version (1)
///   8  u32      width
///   12 u32      height
///   16 u32      n_frames
///   20 f32      frame_rate
///   24 u8       label (0 good, 1 medium, 2 bad, 255 unlabeled)
///   25 u8       payload kind (0 = u16 digits, 1 = f32)
///   26 u16      t0_lo   (TFLN only, else 0)
///   28 u16      t0_hi
///   30 u16      t_norm_frame
///   32 char[24] specimen id, NUL-padded
///   56..63     zero
/// Payload: width*height*n_frames elements, frame-major, little-endian.
/// TFLN files append a width*height validity mask (one byte per pixel).
inline constexpr std::size_t kFilmHeaderSize = 64;
inline constexpr std::size_t kFilmIdCapacity = 23;

void write_tfilm(const std::filesystem::path& path, const ThermalFilm& film);
ThermalFilm read_tfilm(const std::filesystem::path& path);

void write_nfilm(const std::filesystem::path& path, const NormalizedFilm& film);
NormalizedFilm read_nfilm(const std::filesystem::path& path);

}  // namespace tw
