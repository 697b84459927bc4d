#pragma once

#include <array>

#include "phvi/image.hpp"

namespace phvi::hvi {

/// Collapse values below this cannot carry recoverable chroma; the inverse
/// transform emits gray there.
inline constexpr double kInverseEpsilon = 1e-4;

/// Decoupled colour representation: two polarized chroma planes scaled by the
/// collapsed intensity, and the intensity (max channel) itself.
struct HviImage {
  PlanarImage h_plane;    // [-1, 1]
  PlanarImage v_plane;    // [-1, 1]
  PlanarImage intensity;  // [0, 1]
  double k = 1.0;

  std::size_t height() const noexcept { return intensity.height(); }
  std::size_t width() const noexcept { return intensity.width(); }

  /// (h, v, I) as one 3-channel image.
  PlanarImage stacked() const;
  static HviImage from_stacked(const PlanarImage& hvi, double k);
};

/// sin(pi * i / 2)^(1/k). Throws ParameterError for k <= 0.
double collapse(double i, double k);

/// Per-pixel forward map for one (r, g, b) triple in [0, 1].
std::array<double, 3> rgb_to_hvi_pixel(double r, double g, double b, double k);
std::array<double, 3> hvi_to_rgb_pixel(double h, double v, double i, double k);

/// Throws RangeError when any sample lies outside [0, 1] or rgb is not
/// 3-channel.
HviImage rgb_to_hvi(const PlanarImage& rgb, double k);
PlanarImage hvi_to_rgb(const HviImage& hvi);

}  // namespace phvi::hvi
