#include "phvi/color_hvi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"

namespace phvi::hvi {
namespace {

constexpr double kPi = std::numbers::pi;

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ParameterError("collapse exponent k must be positive and finite");
  }
}

}  // namespace

PlanarImage HviImage::stacked() const {
  return concat_channels(concat_channels(h_plane, v_plane), intensity);
}

HviImage HviImage::from_stacked(const PlanarImage& hvi, double k) {
  if (hvi.channels() != 3) {
    throw DimensionError("HVI image must have exactly 3 channels");
  }
  return {hvi.channel(0), hvi.channel(1), hvi.channel(2), k};
}

double collapse(double i, double k) {
  check_k(k);
  const double base = std::sin(kPi * std::clamp(i, 0.0, 1.0) / 2.0);
  if (k == 1.0) return base;
  return std::pow(base, 1.0 / k);
}

std::array<double, 3> rgb_to_hvi_pixel(double r, double g, double b, double k) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  if (delta <= 0.0 || mx <= 0.0) return {0.0, 0.0, mx};

  const double saturation = delta / mx;
  double sector;
  if (mx == r) {
    sector = (g - b) / delta;
    if (sector < 0.0) sector += 6.0;
  } else if (mx == g) {
    sector = (b - r) / delta + 2.0;
  } else {
    sector = (r - g) / delta + 4.0;
  }
  const double theta = sector * kPi / 3.0;
  const double radius = collapse(mx, k) * saturation;
  return {radius * std::cos(theta), radius * std::sin(theta), mx};
}

std::array<double, 3> hvi_to_rgb_pixel(double h, double v, double i, double k) {
  const double c = collapse(i, k);
  if (c < kInverseEpsilon) return {i, i, i};

  const double saturation = std::min(std::hypot(h, v) / c, 1.0);
  if (saturation <= 0.0) return {i, i, i};
  double theta = std::atan2(v, h);
  if (theta < 0.0) theta += 2.0 * kPi;
  double sector = theta * 3.0 / kPi;
  if (sector >= 6.0) sector -= 6.0;

  const double chroma = i * saturation;
  const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  const double m = i - chroma;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  return {r + m, g + m, b + m};
}

HviImage rgb_to_hvi(const PlanarImage& rgb, double k) {
  check_k(k);
  if (rgb.channels() != 3) {
    throw DimensionError("rgb_to_hvi expects a 3-channel image");
  }
  for (double s : rgb.values()) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw RangeError("rgb_to_hvi input sample outside [0, 1]");
    }
  }
  const std::size_t h = rgb.height(), w = rgb.width();
  HviImage out{PlanarImage(1, h, w), PlanarImage(1, h, w), PlanarImage(1, h, w),
               k};
  parallel_for(0, h, [&](std::size_t y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto p =
          rgb_to_hvi_pixel(rgb.at(0, y, x), rgb.at(1, y, x), rgb.at(2, y, x), k);
      out.h_plane.at(0, y, x) = p[0];
      out.v_plane.at(0, y, x) = p[1];
      out.intensity.at(0, y, x) = p[2];
    }
  });
  return out;
}

PlanarImage hvi_to_rgb(const HviImage& hvi) {
  check_k(hvi.k);
  const std::size_t h = hvi.height(), w = hvi.width();
  if (!hvi.h_plane.same_shape(hvi.intensity) ||
      !hvi.v_plane.same_shape(hvi.intensity) || hvi.intensity.channels() != 1) {
    throw DimensionError("HVI planes must be single-channel with equal size");
  }
  PlanarImage out(3, h, w);
  parallel_for(0, h, [&](std::size_t y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto p =
          hvi_to_rgb_pixel(hvi.h_plane.at(0, y, x), hvi.v_plane.at(0, y, x),
                           hvi.intensity.at(0, y, x), hvi.k);
      for (std::size_t c = 0; c < 3; ++c) out.at(c, y, x) = p[c];
    }
  });
  return out;
}

}  // namespace phvi::hvi
