#pragma once

#include <filesystem>

#include "thermoweld/nn/cnn.hpp"

namespace tw {

/// Model checkpoint, little-endian:
///   char[4] magic "TWMD", u32 version (1), u8 variant, u8 relu_bypass,
///   u16 reserved, u32 tensor count, then per tensor: u32 rank, u32 dims[],
///   then all parameters as f32 in tensor order.
void save_checkpoint(const std::filesystem::path& path, const nn::Cnn<float>& model);
nn::Cnn<float> load_checkpoint(const std::filesystem::path& path);

}  // namespace tw
