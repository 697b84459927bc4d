#pragma once

#include "phvi/image.hpp"

namespace phvi::metrics {

/// Gaussian SSIM window parameters.
inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

/// 10 log10(1 / MSE) with peak 1. Identical images give +infinity.
double psnr(const PlanarImage& pred, const PlanarImage& gt);

/// Mean local SSIM over all valid 11x11 Gaussian windows (sigma 1.5),
/// averaged over channels. Throws DimensionError if either spatial dim < 11.
double ssim(const PlanarImage& pred, const PlanarImage& gt);

struct PairMetrics {
  double psnr = 0.0;
  double ssim = 0.0;
  double delta_e = 0.0;
};

/// PSNR, SSIM and mean CIEDE2000 of one RGB prediction against its target.
PairMetrics evaluate_pair(const PlanarImage& pred, const PlanarImage& gt);

/// Mean absolute difference over all samples.
double l1_loss(const PlanarImage& pred, const PlanarImage& gt);

/// Per-channel Sobel gradient magnitude, replicate-edge boundary.
PlanarImage sobel_magnitude(const PlanarImage& image);

/// Mean |sobel(pred) - sobel(gt)| over channels and pixels.
double edge_loss(const PlanarImage& pred, const PlanarImage& gt);

}  // namespace phvi::metrics
