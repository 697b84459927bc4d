#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "phvi/features.hpp"
#include "phvi/losses.hpp"
#include "phvi/metrics.hpp"

namespace phvi::io {

/// Reals as JSON numbers; +infinity as the string "inf" (JSON has no
/// infinity literal), NaN as null.
nlohmann::json real_to_json(double v);
double real_from_json(const nlohmann::json& v);

struct LossConfig {
  loss::LossWeights weights;
  features::ExtractorConfig fdm;
};

/// {"lambda_delta_e": x, "lambda_fdm": y, "fdm": {"seed": s, "dim": n}};
/// every key optional, defaults from LossWeights / ExtractorConfig.
LossConfig parse_loss_config(const std::string& text);
nlohmann::json loss_config_to_json(const LossConfig& config);

struct MetricEntry {
  std::string pred;
  std::string gt;
  metrics::PairMetrics values;
};

/// {"psnr", "ssim", "delta_e", "lpips": null, "samples": [...], "config": {...}}.
/// Top-level values are means over the samples.
nlohmann::json metric_report(const std::vector<MetricEntry>& entries,
                             const nlohmann::json& config);

/// Per-sample terms plus l_p, l_delta_e, l_fdm, l_total and the weights used.
nlohmann::json loss_report_to_json(const loss::LossReport& report,
                                   const LossConfig& config);

}  // namespace phvi::io
