#pragma once

#include <filesystem>

#include "shforge/image.hpp"

namespace shforge {

/// Writes 8-bit PNG; img must have 1 (gray) or 3 (RGB) channels.
void write_png(const std::filesystem::path& path, const ImageU8& img);

/// Reads any 8-bit-compatible PNG as gray or RGB (alpha is dropped).
ImageU8 read_png(const std::filesystem::path& path);

}  // namespace shforge
