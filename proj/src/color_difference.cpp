#include "phvi/color_difference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"

namespace phvi::color {
namespace {

constexpr double kPi = std::numbers::pi;

// D65 reference white (Y normalized to 1).
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

double linearize(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  if (t > delta * delta * delta) return std::cbrt(t);
  return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

double degrees(double rad) { return rad * 180.0 / kPi; }
double radians(double deg) { return deg * kPi / 180.0; }

}  // namespace

Lab srgb_to_lab(double r, double g, double b) {
  const double rl = linearize(r), gl = linearize(g), bl = linearize(b);
  const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
  const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
  const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double ciede2000(const Lab& x, const Lab& y) {
  const double c1 = std::hypot(x.a, x.b);
  const double c2 = std::hypot(y.a, y.b);
  const double c_bar = (c1 + c2) / 2.0;
  const double c_bar7 = std::pow(c_bar, 7.0);
  const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + std::pow(25.0, 7.0))));

  const double a1p = (1.0 + g) * x.a;
  const double a2p = (1.0 + g) * y.a;
  const double c1p = std::hypot(a1p, x.b);
  const double c2p = std::hypot(a2p, y.b);

  auto hue = [](double b, double ap) {
    if (b == 0.0 && ap == 0.0) return 0.0;
    double h = degrees(std::atan2(b, ap));
    return h < 0.0 ? h + 360.0 : h;
  };
  const double h1p = hue(x.b, a1p);
  const double h2p = hue(y.b, a2p);

  const double dlp = y.l - x.l;
  const double dcp = c2p - c1p;
  double dhp = 0.0;
  if (c1p * c2p != 0.0) {
    dhp = h2p - h1p;
    if (dhp > 180.0) {
      dhp -= 360.0;
    } else if (dhp < -180.0) {
      dhp += 360.0;
    }
  }
  const double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(radians(dhp / 2.0));

  const double l_bar = (x.l + y.l) / 2.0;
  const double cp_bar = (c1p + c2p) / 2.0;
  double hp_bar = h1p + h2p;
  if (c1p * c2p != 0.0) {
    if (std::abs(h1p - h2p) <= 180.0) {
      hp_bar /= 2.0;
    } else if (h1p + h2p < 360.0) {
      hp_bar = (hp_bar + 360.0) / 2.0;
    } else {
      hp_bar = (hp_bar - 360.0) / 2.0;
    }
  }

  const double t = 1.0 - 0.17 * std::cos(radians(hp_bar - 30.0)) +
                   0.24 * std::cos(radians(2.0 * hp_bar)) +
                   0.32 * std::cos(radians(3.0 * hp_bar + 6.0)) -
                   0.20 * std::cos(radians(4.0 * hp_bar - 63.0));
  const double d_theta = 30.0 * std::exp(-std::pow((hp_bar - 275.0) / 25.0, 2.0));
  const double cp_bar7 = std::pow(cp_bar, 7.0);
  const double rc = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + std::pow(25.0, 7.0)));
  const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
  const double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
  const double sc = 1.0 + 0.045 * cp_bar;
  const double sh = 1.0 + 0.015 * cp_bar * t;
  const double rt = -std::sin(radians(2.0 * d_theta)) * rc;

  const double tl = dlp / sl;
  const double tc = dcp / sc;
  const double th = dHp / sh;
  return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + rt * tc * th));
}

double delta_e_loss(const PlanarImage& pred, const PlanarImage& gt) {
  if (!pred.same_shape(gt)) throw DimensionError("delta_e_loss: image shapes differ");
  if (pred.channels() != 3) throw DimensionError("delta_e_loss expects RGB images");
  const std::size_t h = pred.height(), w = pred.width();
  std::vector<double> de(h * w);
  parallel_for(0, h, [&](std::size_t y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Lab p = srgb_to_lab(pred.at(0, y, x), pred.at(1, y, x), pred.at(2, y, x));
      const Lab t = srgb_to_lab(gt.at(0, y, x), gt.at(1, y, x), gt.at(2, y, x));
      de[y * w + x] = ciede2000(p, t);
    }
  });
  return mean(de);
}

}  // namespace phvi::color
