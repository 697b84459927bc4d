#pragma once

// Scalar reference computations for the loss tests and the acceptance run.

#include <algorithm>
#include <vector>

#include "phvi/color_hvi.hpp"
#include "phvi/image.hpp"
#include "phvi/losses.hpp"
#include "phvi/metrics.hpp"

namespace phvi::test {

inline double plain_mean(const PlanarImage& img) {
  double s = 0.0;
  for (double v : img.values()) s += v;
  return s / static_cast<double>(img.size());
}

inline double alpha_oracle(const PlanarImage& p, const PlanarImage& g) {
  const double mp = std::max(plain_mean(p), 1e-6), mg = std::max(plain_mean(g), 1e-6);
  return std::max(mp / mg, mg / mp);
}

inline PlanarImage rescaled_hvi(const hvi::HviImage& x) {
  PlanarImage out = x.stacked();
  for (std::size_t c = 0; c < 2; ++c)
    for (double& v : out.plane(c)) v = (v + 1.0) / 2.0;
  return out;
}

/// alpha * (six reconstruction terms) for one sample.
inline double sample_oracle(const loss::Sample& s) {
  using namespace phvi::metrics;
  const PlanarImage ph = s.pred_hvi.stacked(), gh = s.gt_hvi.stacked();
  const double rgb = l1_loss(s.pred_rgb, s.gt_rgb) + (1.0 - ssim(s.pred_rgb, s.gt_rgb)) +
                     edge_loss(s.pred_rgb, s.gt_rgb);
  const double hv = l1_loss(ph, gh) +
                    (1.0 - ssim(rescaled_hvi(s.pred_hvi), rescaled_hvi(s.gt_hvi))) +
                    edge_loss(ph, gh);
  return alpha_oracle(s.pred_rgb, s.gt_rgb) * (rgb + hv);
}

/// O(n^2) rank lookup: strictly smaller values plus equal values at lower index.
inline std::vector<double> fdm_terms_oracle(const std::vector<double>& p,
                                            const std::vector<double>& g) {
  std::vector<double> sorted_g = g;
  std::sort(sorted_g.begin(), sorted_g.end());
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t rank = 0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p[j] < p[i] || (p[j] == p[i] && j < i)) ++rank;
    const double d = p[i] - sorted_g[rank];
    terms[i] = d * d;
  }
  return terms;
}

inline double fdm_oracle(const std::vector<double>& p, const std::vector<double>& g) {
  double sum = 0.0;
  for (double t : fdm_terms_oracle(p, g)) sum += t;
  return sum / static_cast<double>(p.size());
}

}  // namespace phvi::test
