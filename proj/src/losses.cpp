#include "phvi/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phvi/color_difference.hpp"
#include "phvi/errors.hpp"
#include "phvi/metrics.hpp"

namespace phvi::loss {

void LossWeights::validate() const {
  for (double v : {lambda_delta_e, lambda_fdm}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ParameterError("loss weights must be finite and non-negative");
    }
  }
}

Sample make_sample(PlanarImage pred_rgb, PlanarImage gt_rgb, double k) {
  if (!pred_rgb.same_shape(gt_rgb)) {
    throw DimensionError("prediction and ground truth shapes differ");
  }
  hvi::HviImage pred_hvi = hvi::rgb_to_hvi(pred_rgb, k);
  hvi::HviImage gt_hvi = hvi::rgb_to_hvi(gt_rgb, k);
  return {std::move(pred_rgb), std::move(gt_rgb), std::move(pred_hvi),
          std::move(gt_hvi)};
}

SampleStats sample_stats(const PlanarImage& pred, const PlanarImage& gt) {
  SampleStats s;
  s.mu_pred = std::max(mean(pred.values()), kMeanFloor);
  s.mu_gt = std::max(mean(gt.values()), kMeanFloor);
  s.alpha = std::max(s.mu_gt / s.mu_pred, s.mu_pred / s.mu_gt);
  return s;
}

double alpha_coefficient(const PlanarImage& pred, const PlanarImage& gt) {
  return sample_stats(pred, gt).alpha;
}

PlanarImage hvi_for_ssim(const hvi::HviImage& image) {
  PlanarImage out = image.stacked();
  for (std::size_t c = 0; c < 2; ++c) {
    for (double& v : out.plane(c)) v = (v + 1.0) / 2.0;
  }
  return out;
}

SampleTerms reconstruction_terms(const Sample& sample) {
  if (!sample.pred_rgb.same_shape(sample.gt_rgb)) {
    throw DimensionError("sample RGB shapes differ");
  }
  const PlanarImage pred_hvi = sample.pred_hvi.stacked();
  const PlanarImage gt_hvi = sample.gt_hvi.stacked();

  SampleTerms t;
  t.l1_rgb = metrics::l1_loss(sample.pred_rgb, sample.gt_rgb);
  t.ssim_rgb = 1.0 - metrics::ssim(sample.pred_rgb, sample.gt_rgb);
  t.edge_rgb = metrics::edge_loss(sample.pred_rgb, sample.gt_rgb);
  t.l1_hvi = metrics::l1_loss(pred_hvi, gt_hvi);
  t.ssim_hvi = 1.0 - metrics::ssim(hvi_for_ssim(sample.pred_hvi),
                                   hvi_for_ssim(sample.gt_hvi));
  t.edge_hvi = metrics::edge_loss(pred_hvi, gt_hvi);
  t.stats = sample_stats(sample.pred_rgb, sample.gt_rgb);
  return t;
}

ReconstructionResult reconstruction_loss(std::span<const Sample> batch) {
  if (batch.empty()) throw ParameterError("reconstruction loss needs N >= 1");
  ReconstructionResult r;
  std::vector<double> weighted;
  for (const Sample& s : batch) {
    r.samples.push_back(reconstruction_terms(s));
    weighted.push_back(r.samples.back().stats.alpha *
                       r.samples.back().unweighted_sum());
  }
  r.l_p = mean(weighted);
  return r;
}

std::vector<double> fdm_terms(const features::FeatureVector& pred,
                              const features::FeatureVector& gt) {
  const std::size_t n = pred.values.size();
  if (n == 0) throw DimensionError("fdm_loss needs non-empty feature vectors");
  if (gt.values.size() != n) {
    throw DimensionError("fdm_loss feature lengths differ");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
    return pred.values[a] < pred.values[b];
  });
  std::vector<double> gt_sorted = gt.values;
  std::ranges::stable_sort(gt_sorted);

  std::vector<double> terms(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const std::size_t i = order[rank];
    const double d = pred.values[i] - gt_sorted[rank];
    terms[i] = d * d;
  }
  return terms;
}

double fdm_loss(const features::FeatureVector& pred,
                const features::FeatureVector& gt) {
  return mean(fdm_terms(pred, gt));
}

LossReport total_loss(std::span<const Sample> batch, const LossWeights& weights,
                      const features::FeatureExtractor& extractor) {
  weights.validate();
  ReconstructionResult rec = reconstruction_loss(batch);

  LossReport report;
  report.weights = weights;
  report.l_p = rec.l_p;
  report.samples = std::move(rec.samples);

  std::vector<double> de(batch.size()), fdm(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    de[i] = color::delta_e_loss(batch[i].pred_rgb, batch[i].gt_rgb);
    fdm[i] = fdm_loss(extractor.extract(batch[i].pred_rgb),
                      extractor.extract(batch[i].gt_rgb));
    report.samples[i].delta_e = de[i];
    report.samples[i].fdm = fdm[i];
  }
  report.l_delta_e = mean(de);
  report.l_fdm = mean(fdm);
  report.l_total = report.l_p + weights.lambda_delta_e * report.l_delta_e +
                   weights.lambda_fdm * report.l_fdm;
  return report;
}

}  // namespace phvi::loss
