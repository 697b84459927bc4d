#include "phvi/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "phvi/color_difference.hpp"
#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"

namespace phvi::metrics {
namespace {

void require_same_shape(const PlanarImage& a, const PlanarImage& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": image shapes differ");
  }
  if (a.empty()) throw DimensionError(std::string(what) + ": empty image");
}

std::array<double, kSsimWindow> gaussian_window() {
  std::array<double, kSsimWindow> g{};
  const double center = (kSsimWindow - 1) / 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < kSsimWindow; ++i) {
    const double d = static_cast<double>(i) - center;
    g[i] = std::exp(-(d * d) / (2.0 * kSsimSigma * kSsimSigma));
    total += g[i];
  }
  for (double& v : g) v /= total;
  return g;
}

// Separable "valid" Gaussian filter of one plane.
std::vector<double> filter_valid(std::span<const double> plane, std::size_t h,
                                 std::size_t w,
                                 const std::array<double, kSsimWindow>& g) {
  const std::size_t oh = h - kSsimWindow + 1;
  const std::size_t ow = w - kSsimWindow + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kSsimWindow; ++k) acc += g[k] * plane[y * w + x + k];
      rows[y * ow + x] = acc;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kSsimWindow; ++k) acc += g[k] * rows[(y + k) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

double channel_ssim(std::span<const double> a, std::span<const double> b,
                    std::size_t h, std::size_t w,
                    const std::array<double, kSsimWindow>& g) {
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = filter_valid(a, h, w, g);
  const auto mu_b = filter_valid(b, h, w, g);
  const auto e_aa = filter_valid(aa, h, w, g);
  const auto e_bb = filter_valid(bb, h, w, g);
  const auto e_ab = filter_valid(ab, h, w, g);

  std::vector<double> local(mu_a.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    local[i] = ((2.0 * ma * mb + kSsimC1) * (2.0 * cov + kSsimC2)) /
               ((ma * ma + mb * mb + kSsimC1) * (var_a + var_b + kSsimC2));
  }
  return mean(local);
}

}  // namespace

double psnr(const PlanarImage& pred, const PlanarImage& gt) {
  require_same_shape(pred, gt, "psnr");
  std::vector<double> sq(pred.size());
  const auto p = pred.values();
  const auto t = gt.values();
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = p[i] - t[i];
    sq[i] = d * d;
  }
  const double mse = mean(sq);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const PlanarImage& pred, const PlanarImage& gt) {
  require_same_shape(pred, gt, "ssim");
  if (pred.height() < kSsimWindow || pred.width() < kSsimWindow) {
    throw DimensionError("ssim requires both spatial dims >= 11");
  }
  const auto g = gaussian_window();
  std::vector<double> per_channel(pred.channels());
  parallel_for(0, pred.channels(), [&](std::size_t c) {
    per_channel[c] = channel_ssim(pred.plane(c), gt.plane(c), pred.height(),
                                  pred.width(), g);
  });
  return mean(per_channel);
}

PairMetrics evaluate_pair(const PlanarImage& pred, const PlanarImage& gt) {
  return {psnr(pred, gt), ssim(pred, gt), color::delta_e_loss(pred, gt)};
}

double l1_loss(const PlanarImage& pred, const PlanarImage& gt) {
  require_same_shape(pred, gt, "l1_loss");
  std::vector<double> diff(pred.size());
  const auto p = pred.values();
  const auto t = gt.values();
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(p[i] - t[i]);
  return mean(diff);
}

PlanarImage sobel_magnitude(const PlanarImage& image) {
  const std::size_t h = image.height(), w = image.width();
  PlanarImage out(image.channels(), h, w);
  if (h == 0 || w == 0) return out;
  for (std::size_t c = 0; c < image.channels(); ++c) {
    auto px = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
      y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(h) - 1);
      x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(w) - 1);
      return image.at(c, static_cast<std::size_t>(y), static_cast<std::size_t>(x));
    };
    for (std::size_t uy = 0; uy < h; ++uy) {
      for (std::size_t ux = 0; ux < w; ++ux) {
        const auto y = static_cast<std::ptrdiff_t>(uy);
        const auto x = static_cast<std::ptrdiff_t>(ux);
        const double gx = (px(y - 1, x + 1) + 2.0 * px(y, x + 1) + px(y + 1, x + 1)) -
                          (px(y - 1, x - 1) + 2.0 * px(y, x - 1) + px(y + 1, x - 1));
        const double gy = (px(y + 1, x - 1) + 2.0 * px(y + 1, x) + px(y + 1, x + 1)) -
                          (px(y - 1, x - 1) + 2.0 * px(y - 1, x) + px(y - 1, x + 1));
        out.at(c, uy, ux) = std::sqrt(gx * gx + gy * gy);
      }
    }
  }
  return out;
}

double edge_loss(const PlanarImage& pred, const PlanarImage& gt) {
  require_same_shape(pred, gt, "edge_loss");
  return l1_loss(sobel_magnitude(pred), sobel_magnitude(gt));
}

}  // namespace phvi::metrics
