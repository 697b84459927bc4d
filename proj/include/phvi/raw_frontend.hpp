#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phvi/image.hpp"

namespace phvi::raw {

enum class BayerPattern { kRGGB, kBGGR, kGRBG, kGBRG };

BayerPattern parse_pattern(std::string_view name);
std::string_view to_string(BayerPattern pattern);

/// Row-major 3x3 projective transform mapping source (x, y, 1) to target
/// coordinates.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Homography identity() { return {}; }
  static Homography translation(double tx, double ty) {
    return {{1, 0, tx, 0, 1, ty, 0, 0, 1}};
  }

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double determinant() const;
  /// Throws ParameterError when |det| <= 1e-12.
  Homography inverse() const;
  Homography operator*(const Homography& rhs) const;
};

/// Crop rectangle in packed-pixel units.
struct CropRect {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

struct BayerFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint16_t> data;
  // One level per 2x2 site in raster order, i.e. the order the pattern
  // string names them.
  std::array<double, 4> black_levels{};
  double white_level = 0.0;
  BayerPattern pattern = BayerPattern::kRGGB;
  Homography homography;
  CropRect crop;  // zero width/height means full packed frame

  /// Throws InvalidMetadataError / DimensionError / ParameterError.
  void validate() const;
};

/// Normalized single-channel mosaic, row-major.
struct RealMosaic {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> data;

  double at(std::size_t y, std::size_t x) const { return data[y * width + x]; }
};

/// Half-resolution 4-plane RAW tensor, planes ordered R, G1, G2, B.
/// G1 is the green sharing a row with red, G2 the one sharing a row with blue.
struct PackedRaw {
  PlanarImage planes;
  std::string source_id;
};

/// Per-site (s - black) / (white - black), clamped to [0, 1].
RealMosaic black_white_correct(const BayerFrame& frame);

/// Raster offsets (dy, dx) within the 2x2 quad of the R, G1, G2, B sites.
std::array<std::array<std::size_t, 2>, 4> site_offsets(BayerPattern pattern);

PackedRaw pack_rggb(const RealMosaic& mosaic, BayerPattern pattern,
                    std::string source_id = {});

/// Inverse of pack_rggb: re-interleaves the planes into a mosaic.
RealMosaic unpack_rggb(const PackedRaw& packed, BayerPattern pattern);

/// Inverse-mapped bilinear resampling of every plane by `homography`,
/// then cropping to `crop` (in warped-frame coordinates). Samples whose
/// source point falls outside the packed frame are zero.
PackedRaw warp_and_crop(const PackedRaw& packed, const Homography& homography,
                        const CropRect& crop);

/// black_white_correct -> pack_rggb -> warp_and_crop with the frame's own
/// metadata.
PackedRaw preprocess(const BayerFrame& frame, std::string source_id = {});

}  // namespace phvi::raw
