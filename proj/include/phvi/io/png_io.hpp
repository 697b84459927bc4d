#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "phvi/image.hpp"

namespace phvi::io {

/// Quantizes [0, 1] samples to 8 bits: clamp, x255, round half to even.
std::uint8_t quantize8(double v);

/// Encodes a 3-channel image as an 8-bit RGB PNG in memory.
std::vector<std::uint8_t> encode_png_rgb8(const PlanarImage& rgb);

/// Writes an 8-bit RGB PNG atomically.
void write_png_rgb8(const PlanarImage& rgb, const std::filesystem::path& path);

/// Reads an 8- or 16-bit PNG (gray, RGB, with or without alpha, or palette)
/// into a 3-channel image scaled by 1/255 or 1/65535.
PlanarImage read_png_rgb(const std::filesystem::path& path);

}  // namespace phvi::io
