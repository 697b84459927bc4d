#pragma once

#include <filesystem>

#include "phvi/raw_frontend.hpp"

namespace phvi::io {

/// Reads a little-endian uint16 row-major mosaic plus its JSON sidecar
/// (width, height, pattern, black_levels[4], white_level, optional
/// homography[9] and crop[x0, y0, w, h]). Missing homography / crop default
/// to identity / full frame. Sidecar problems raise ParseError naming the key.
raw::BayerFrame load_bayer(const std::filesystem::path& raw_path,
                           const std::filesystem::path& meta_path);

/// Writes the mosaic and sidecar in the format load_bayer reads.
void save_bayer(const raw::BayerFrame& frame, const std::filesystem::path& raw_path,
                const std::filesystem::path& meta_path);

}  // namespace phvi::io
