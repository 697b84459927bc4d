// phvi: command-line front end for the RAW rendering pipeline, image metrics,
// training-loss evaluation and the embedded self-test suites.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phvi/errors.hpp"
#include "phvi/features.hpp"
#include "phvi/io/files.hpp"
#include "phvi/io/png_io.hpp"
#include "phvi/io/raw_io.hpp"
#include "phvi/io/report_json.hpp"
#include "phvi/losses.hpp"
#include "phvi/metrics.hpp"
#include "phvi/network.hpp"
#include "phvi/parallel.hpp"
#include "phvi/selftest.hpp"
#include "phvi/wavelet.hpp"
#include "phvi/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitMismatch = 3;

struct RenderArgs {
  fs::path raw, meta, weights, out;
  std::optional<double> hvi_k;
};

struct MetricsArgs {
  std::vector<fs::path> pred, gt;
};

struct LossArgs {
  std::vector<fs::path> pred, gt;
  std::optional<fs::path> config;
  std::optional<fs::path> fdm_matrix;
  std::optional<double> lambda_de, lambda_fdm, hvi_k;
  std::optional<std::uint64_t> fdm_seed;
};

struct WeightArgs {
  std::uint64_t seed = 0;
  fs::path out;
  std::size_t base_channels = 16;
  std::size_t depth = 3;
  double hvi_k = 1.0;
};

struct SynthArgs {
  std::size_t width = 128, height = 128;
  std::uint64_t seed = 0;
  fs::path raw, meta;
};

void require_exists(const fs::path& p, const char* flag) {
  if (!fs::exists(p)) {
    throw phvi::ParseError(flag, std::string(flag) + ": no such file " + p.string());
  }
}

int report_error(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << "\n";
  return code;
}

int run_render(const RenderArgs& a) {
  try {
    require_exists(a.raw, "--raw");
    require_exists(a.meta, "--meta");
    require_exists(a.weights, "--weights");
    const phvi::raw::BayerFrame frame = phvi::io::load_bayer(a.raw, a.meta);
    phvi::net::WeightBundle bundle = phvi::net::load_weights(a.weights);
    if (a.hvi_k) {
      if (!(*a.hvi_k > 0.0)) throw phvi::ParseError("--hvi-k", "--hvi-k must be positive");
      bundle.mutable_config().hvi_k = *a.hvi_k;
    }

    const auto start = std::chrono::steady_clock::now();
    const phvi::raw::PackedRaw packed =
        phvi::raw::preprocess(frame, a.raw.filename().string());
    const phvi::PlanarImage rgb = phvi::net::render(packed, bundle);
    phvi::io::write_png_rgb8(rgb, a.out);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();

    std::cout << json{{"output", a.out.string()},
                      {"width", rgb.width()},
                      {"height", rgb.height()},
                      {"elapsed_ms", ms}}
                     .dump()
              << "\n";
    return kExitOk;
  } catch (const phvi::ParseError& e) {
    std::cerr << "error: invalid field '" << e.field() << "': " << e.what() << "\n";
    return kExitInvalid;
  } catch (const phvi::WeightError& e) {
    return report_error(e, kExitMismatch);
  } catch (const phvi::DimensionError& e) {
    return report_error(e, kExitMismatch);
  } catch (const phvi::InvalidMetadataError& e) {
    return report_error(e, kExitInvalid);
  } catch (const phvi::ParameterError& e) {
    return report_error(e, kExitInvalid);
  } catch (const std::exception& e) {
    return report_error(e, kExitFailure);
  }
}

int run_metrics(const MetricsArgs& a) {
  try {
    if (a.pred.size() != a.gt.size()) {
      throw phvi::ParseError("--gt", "--pred and --gt lists differ in length");
    }
    std::vector<phvi::io::MetricEntry> entries;
    for (std::size_t i = 0; i < a.pred.size(); ++i) {
      const phvi::PlanarImage pred = phvi::io::read_png_rgb(a.pred[i]);
      const phvi::PlanarImage gt = phvi::io::read_png_rgb(a.gt[i]);
      if (!pred.same_shape(gt)) {
        throw phvi::DimensionError(a.pred[i].string() + " and " + a.gt[i].string() +
                                   " have different dimensions");
      }
      entries.push_back({a.pred[i].string(), a.gt[i].string(),
                         phvi::metrics::evaluate_pair(pred, gt)});
    }
    const json config = {{"ssim_window", phvi::metrics::kSsimWindow},
                         {"ssim_sigma", phvi::metrics::kSsimSigma},
                         {"peak", 1.0},
                         {"white_point", "D65"}};
    std::cout << phvi::io::metric_report(entries, config).dump(2) << "\n";
    return kExitOk;
  } catch (const phvi::Error& e) {
    return report_error(e, kExitInvalid);
  } catch (const std::exception& e) {
    return report_error(e, kExitFailure);
  }
}

int run_loss(const LossArgs& a) {
  try {
    if (a.pred.size() != a.gt.size()) {
      throw phvi::ParseError("--gt", "--pred and --gt lists differ in length");
    }
    phvi::io::LossConfig cfg;
    if (a.config) cfg = phvi::io::parse_loss_config(phvi::io::read_text(*a.config));
    if (a.lambda_de) cfg.weights.lambda_delta_e = *a.lambda_de;
    if (a.lambda_fdm) cfg.weights.lambda_fdm = *a.lambda_fdm;
    if (a.fdm_seed) cfg.fdm.seed = *a.fdm_seed;
    cfg.weights.validate();
    const double k = a.hvi_k.value_or(1.0);

    std::vector<phvi::loss::Sample> batch;
    for (std::size_t i = 0; i < a.pred.size(); ++i) {
      phvi::PlanarImage pred = phvi::io::read_png_rgb(a.pred[i]);
      phvi::PlanarImage gt = phvi::io::read_png_rgb(a.gt[i]);
      if (!pred.same_shape(gt)) {
        throw phvi::DimensionError(a.pred[i].string() + " and " + a.gt[i].string() +
                                   " have different dimensions");
      }
      batch.push_back(phvi::loss::make_sample(std::move(pred), std::move(gt), k));
    }
    if (batch.empty()) throw phvi::ParseError("--pred", "at least one sample is required");

    const phvi::features::FeatureExtractor extractor =
        a.fdm_matrix ? phvi::features::FeatureExtractor::from_file(*a.fdm_matrix)
                     : phvi::features::FeatureExtractor(cfg.fdm, 3);
    const phvi::loss::LossReport report =
        phvi::loss::total_loss(batch, cfg.weights, extractor);
    json out = phvi::io::loss_report_to_json(report, cfg);
    out["config"]["hvi_k"] = k;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  } catch (const phvi::Error& e) {
    return report_error(e, kExitInvalid);
  } catch (const std::exception& e) {
    return report_error(e, kExitFailure);
  }
}

int run_selftest(std::uint64_t seed, const std::string& fault) {
  if (fault == "wavelet") phvi::wavelet::testing::set_hh_sign_fault(true);
  const auto results = phvi::selftest::run_all(seed);
  phvi::wavelet::testing::set_hh_sign_fault(false);

  json suites = json::array();
  bool ok = true;
  for (const auto& r : results) {
    suites.push_back({{"name", r.name},
                      {"cases", r.cases},
                      {"failures", r.failures},
                      {"passed", r.passed()}});
    if (!r.passed()) {
      suites.back()["first_failure"] = r.first_failure;
      if (ok) std::cerr << "FAILED suite " << r.name << ": " << r.first_failure << "\n";
      ok = false;
    }
  }
  std::cout << json{{"passed", ok}, {"suite_count", results.size()}, {"suites", suites}}
                   .dump(2)
            << "\n";
  return ok ? kExitOk : kExitFailure;
}

int run_generate_weights(const WeightArgs& a) {
  try {
    phvi::net::NetworkConfig cfg{a.base_channels, a.depth, a.hvi_k};
    const auto bundle = phvi::net::generate_weights(cfg, a.seed);
    phvi::net::save_weights(bundle, a.out);
    std::cout << json{{"output", a.out.string()},
                      {"seed", a.seed},
                      {"tensors", bundle.tensors().size()}}
                     .dump()
              << "\n";
    return kExitOk;
  } catch (const phvi::Error& e) {
    return report_error(e, kExitInvalid);
  } catch (const std::exception& e) {
    return report_error(e, kExitFailure);
  }
}

// Smooth gradients plus a little noise, on a 10-bit sensor scale.
int run_synth_raw(const SynthArgs& a) {
  try {
    phvi::raw::BayerFrame frame;
    frame.width = a.width;
    frame.height = a.height;
    frame.black_levels = {64, 64, 64, 64};
    frame.white_level = 1023;
    frame.data.resize(a.width * a.height);
    std::mt19937_64 rng(a.seed);
    for (std::size_t y = 0; y < a.height; ++y) {
      for (std::size_t x = 0; x < a.width; ++x) {
        const double base = 64.0 + 600.0 * (static_cast<double>(x + y) /
                                            static_cast<double>(a.width + a.height));
        const double noise = static_cast<double>(rng() % 32);
        frame.data[y * a.width + x] = static_cast<std::uint16_t>(base + noise);
      }
    }
    frame.validate();
    phvi::io::save_bayer(frame, a.raw, a.meta);
    std::cout << json{{"raw", a.raw.string()}, {"meta", a.meta.string()}}.dump() << "\n";
    return kExitOk;
  } catch (const phvi::Error& e) {
    return report_error(e, kExitInvalid);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phvi: RAW night-photography rendering core"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = auto)");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "render a RAW frame to an 8-bit PNG");
  render_cmd->add_option("--raw", render.raw, "little-endian uint16 mosaic")->required();
  render_cmd->add_option("--meta", render.meta, "JSON sidecar")->required();
  render_cmd->add_option("--weights", render.weights, "weight file")->required();
  render_cmd->add_option("--out", render.out, "output PNG")->required();
  render_cmd->add_option("--hvi-k", render.hvi_k, "override the collapse exponent k");
  render_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR / SSIM / CIEDE2000 report");
  metrics_cmd->add_option("--pred", metrics.pred, "predicted PNG(s)")->required();
  metrics_cmd->add_option("--gt", metrics.gt, "ground-truth PNG(s)")->required();
  metrics_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  LossArgs loss;
  auto* loss_cmd = app.add_subcommand("loss", "evaluate the training objective on a batch");
  loss_cmd->add_option("--pred", loss.pred, "predicted PNG(s)")->required();
  loss_cmd->add_option("--gt", loss.gt, "ground-truth PNG(s)")->required();
  loss_cmd->add_option("--config", loss.config, "loss config JSON");
  loss_cmd->add_option("--lambda-de", loss.lambda_de, "CIEDE2000 loss weight");
  loss_cmd->add_option("--lambda-fdm", loss.lambda_fdm, "FDM loss weight");
  loss_cmd->add_option("--fdm-seed", loss.fdm_seed, "projection seed of the default extractor");
  loss_cmd->add_option("--fdm-matrix", loss.fdm_matrix, "JSON projection matrix extractor");
  loss_cmd->add_option("--hvi-k", loss.hvi_k, "collapse exponent k (default 1.0)");
  loss_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  std::uint64_t selftest_seed = 0;
  std::string fault;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the embedded property suites");
  selftest_cmd->add_option("--seed", selftest_seed, "random seed");
  selftest_cmd->add_option("--inject-fault", fault)->group("")->check(
      CLI::IsMember({"wavelet"}));
  selftest_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  WeightArgs weights;
  auto* weights_cmd =
      app.add_subcommand("generate-weights", "write a deterministic random weight file");
  weights_cmd->add_option("--seed", weights.seed, "random seed")->required();
  weights_cmd->add_option("--out", weights.out, "output weight file")->required();
  weights_cmd->add_option("--base-channels", weights.base_channels, "channel width");
  weights_cmd->add_option("--depth", weights.depth, "encoder levels");
  weights_cmd->add_option("--hvi-k", weights.hvi_k, "collapse exponent stored in the header");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-raw", "write a synthetic Bayer frame + sidecar");
  synth_cmd->add_option("--width", synth.width, "mosaic width (even)");
  synth_cmd->add_option("--height", synth.height, "mosaic height (even)");
  synth_cmd->add_option("--seed", synth.seed, "noise seed");
  synth_cmd->add_option("--out-raw", synth.raw, "mosaic output path")->required();
  synth_cmd->add_option("--out-meta", synth.meta, "sidecar output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  phvi::set_thread_count(threads);

  if (*render_cmd) return run_render(render);
  if (*metrics_cmd) return run_metrics(metrics);
  if (*loss_cmd) return run_loss(loss);
  if (*selftest_cmd) return run_selftest(selftest_seed, fault);
  if (*weights_cmd) return run_generate_weights(weights);
  if (*synth_cmd) return run_synth_raw(synth);
  return kExitInvalid;
}
