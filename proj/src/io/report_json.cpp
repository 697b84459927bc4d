#include "phvi/io/report_json.hpp"

#include <cmath>
#include <limits>

#include "phvi/errors.hpp"

namespace phvi::io {

using nlohmann::json;

json real_to_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

LossConfig parse_loss_config(const std::string& text) {
  LossConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("loss_config", std::string("malformed loss config: ") + e.what());
  }
  auto read = [&](const json& obj, const char* key, auto& dst) {
    if (!obj.contains(key)) return;
    try {
      dst = obj.at(key).get<std::remove_reference_t<decltype(dst)>>();
    } catch (const json::exception&) {
      throw ParseError(key, std::string("loss config key '") + key + "' has the wrong type");
    }
  };
  read(j, "lambda_delta_e", cfg.weights.lambda_delta_e);
  read(j, "lambda_fdm", cfg.weights.lambda_fdm);
  if (j.contains("fdm")) {
    const json& fdm = j.at("fdm");
    read(fdm, "seed", cfg.fdm.seed);
    read(fdm, "dim", cfg.fdm.dim);
  }
  try {
    cfg.weights.validate();
  } catch (const ParameterError& e) {
    throw ParseError("lambda", e.what());
  }
  if (cfg.fdm.dim == 0) throw ParseError("dim", "fdm dim must be positive");
  return cfg;
}

json loss_config_to_json(const LossConfig& config) {
  return {{"lambda_delta_e", config.weights.lambda_delta_e},
          {"lambda_fdm", config.weights.lambda_fdm},
          {"fdm", {{"seed", config.fdm.seed}, {"dim", config.fdm.dim}}}};
}

json metric_report(const std::vector<MetricEntry>& entries, const json& config) {
  json samples = json::array();
  double psnr = 0.0, ssim = 0.0, de = 0.0;
  for (const MetricEntry& e : entries) {
    samples.push_back({{"pred", e.pred},
                       {"gt", e.gt},
                       {"psnr", real_to_json(e.values.psnr)},
                       {"ssim", e.values.ssim},
                       {"delta_e", e.values.delta_e}});
    psnr += e.values.psnr;
    ssim += e.values.ssim;
    de += e.values.delta_e;
  }
  const double n = entries.empty() ? 1.0 : static_cast<double>(entries.size());
  return {{"psnr", real_to_json(psnr / n)},
          {"ssim", ssim / n},
          {"delta_e", de / n},
          {"lpips", nullptr},
          {"samples", samples},
          {"config", config}};
}

json loss_report_to_json(const loss::LossReport& report, const LossConfig& config) {
  json samples = json::array();
  for (const loss::SampleTerms& t : report.samples) {
    samples.push_back({{"l1_rgb", t.l1_rgb},
                       {"ssim_rgb", t.ssim_rgb},
                       {"edge_rgb", t.edge_rgb},
                       {"l1_hvi", t.l1_hvi},
                       {"ssim_hvi", t.ssim_hvi},
                       {"edge_hvi", t.edge_hvi},
                       {"mu_pred", t.stats.mu_pred},
                       {"mu_gt", t.stats.mu_gt},
                       {"alpha", t.stats.alpha},
                       {"delta_e", t.delta_e},
                       {"fdm", t.fdm}});
  }
  return {{"samples", samples},
          {"l_p", report.l_p},
          {"l_delta_e", report.l_delta_e},
          {"l_fdm", report.l_fdm},
          {"l_total", report.l_total},
          {"weights",
           {{"lambda_delta_e", report.weights.lambda_delta_e},
            {"lambda_fdm", report.weights.lambda_fdm}}},
          {"config", loss_config_to_json(config)}};
}

}  // namespace phvi::io
