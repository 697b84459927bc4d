#pragma once

#include <array>

#include "phvi/image.hpp"

namespace phvi::color {

struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// sRGB (IEC 61966-2-1 companding, inputs clamped to [0, 1]) to CIELAB under
/// the D65 white point.
Lab srgb_to_lab(double r, double g, double b);

/// CIEDE2000 colour difference with kL = kC = kH = 1.
double ciede2000(const Lab& x, const Lab& y);

/// Mean CIEDE2000 between corresponding pixels of two 3-channel sRGB images.
double delta_e_loss(const PlanarImage& pred, const PlanarImage& gt);

}  // namespace phvi::color
