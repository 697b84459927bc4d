#pragma once

#include <span>
#include <vector>

#include "phvi/color_hvi.hpp"
#include "phvi/features.hpp"
#include "phvi/image.hpp"

namespace phvi::loss {

/// Lower bound applied to both global means before taking their ratio.
inline constexpr double kMeanFloor = 1e-6;

struct LossWeights {
  double lambda_delta_e = 0.1;
  double lambda_fdm = 0.01;

  /// Throws ParameterError unless both are finite and >= 0.
  void validate() const;
};

struct SampleStats {
  double mu_pred = 0.0;
  double mu_gt = 0.0;
  double alpha = 1.0;
};

/// One training pair in both domains.
struct Sample {
  PlanarImage pred_rgb;
  PlanarImage gt_rgb;
  hvi::HviImage pred_hvi;
  hvi::HviImage gt_hvi;
};

/// Builds a Sample by applying the forward HVI transform to both images.
Sample make_sample(PlanarImage pred_rgb, PlanarImage gt_rgb, double k);

/// Per-sample loss terms. The ssim_* fields hold 1 - SSIM.
struct SampleTerms {
  double l1_rgb = 0.0;
  double ssim_rgb = 0.0;
  double edge_rgb = 0.0;
  double l1_hvi = 0.0;
  double ssim_hvi = 0.0;
  double edge_hvi = 0.0;
  SampleStats stats;
  double delta_e = 0.0;
  double fdm = 0.0;

  double unweighted_sum() const {
    return (l1_rgb + ssim_rgb + edge_rgb) + (l1_hvi + ssim_hvi + edge_hvi);
  }
};

struct LossReport {
  std::vector<SampleTerms> samples;
  double l_p = 0.0;
  double l_delta_e = 0.0;
  double l_fdm = 0.0;
  double l_total = 0.0;
  LossWeights weights;
};

/// Global mean over all channels and pixels of both images, each floored at
/// kMeanFloor, and alpha = max(mu_gt / mu_pred, mu_pred / mu_gt).
SampleStats sample_stats(const PlanarImage& pred, const PlanarImage& gt);
double alpha_coefficient(const PlanarImage& pred, const PlanarImage& gt);

/// Rescales (h, v, I) planes so h and v land in [0, 1] as well, for SSIM
/// window statistics.
PlanarImage hvi_for_ssim(const hvi::HviImage& image);

/// L1, 1 - SSIM and Sobel edge terms in RGB and HVI plus alpha for one sample.
SampleTerms reconstruction_terms(const Sample& sample);

struct ReconstructionResult {
  double l_p = 0.0;
  std::vector<SampleTerms> samples;
};

/// l_p = (1/N) sum_i alpha_i * (six-term sum)_i. Throws ParameterError on an
/// empty batch.
ReconstructionResult reconstruction_loss(std::span<const Sample> batch);

/// Squared gaps (f_pred[i] - f_gt[rank(f_pred[i])])^2 in the original index
/// order of f_pred. Ranks come from a stable ascending sort, so duplicated
/// values are ranked by index.
std::vector<double> fdm_terms(const features::FeatureVector& pred,
                              const features::FeatureVector& gt);

/// Mean of fdm_terms. Throws DimensionError on length mismatch or n = 0.
double fdm_loss(const features::FeatureVector& pred,
                const features::FeatureVector& gt);

/// Full objective: l_total = l_p + lambda_de * mean(delta_e) + lambda_fdm *
/// mean(fdm). FDM compares `extractor` features of pred/gt RGB.
LossReport total_loss(std::span<const Sample> batch, const LossWeights& weights,
                      const features::FeatureExtractor& extractor);

}  // namespace phvi::loss
