#include "phvi/features.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "phvi/errors.hpp"
#include "phvi/io/files.hpp"
#include "phvi/parallel.hpp"

namespace phvi::features {

FeatureExtractor::FeatureExtractor(const ExtractorConfig& config,
                                   std::size_t channels)
    : dim_(config.dim), grid_(config.grid), channels_(channels) {
  if (dim_ == 0 || grid_ == 0 || channels_ == 0) {
    throw ParameterError("feature extractor needs positive dim, grid and channels");
  }
  const std::size_t len = channels_ * grid_ * grid_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(len));
  std::mt19937_64 rng(config.seed);
  matrix_.resize(dim_ * len);
  for (double& v : matrix_) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = (2.0 * u - 1.0) * scale;
  }
}

FeatureExtractor FeatureExtractor::from_file(const std::filesystem::path& path) {
  FeatureExtractor fx;
  try {
    const auto j = nlohmann::json::parse(io::read_text(path));
    fx.dim_ = j.at("dim").get<std::size_t>();
    fx.grid_ = j.at("grid").get<std::size_t>();
    fx.channels_ = j.at("channels").get<std::size_t>();
    fx.matrix_ = j.at("matrix").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("matrix", std::string("malformed extractor file: ") + e.what());
  }
  if (fx.dim_ == 0 || fx.grid_ == 0 || fx.channels_ == 0 ||
      fx.matrix_.size() != fx.dim_ * fx.channels_ * fx.grid_ * fx.grid_) {
    throw ParseError("matrix", "extractor matrix size does not match dim/grid/channels");
  }
  return fx;
}

PlanarImage resample_bilinear(const PlanarImage& image, std::size_t out_h,
                              std::size_t out_w) {
  const std::size_t h = image.height(), w = image.width();
  if (h == 0 || w == 0) throw DimensionError("cannot resample an empty image");
  PlanarImage out(image.channels(), out_h, out_w);
  const double sy_scale = static_cast<double>(h) / static_cast<double>(out_h);
  const double sx_scale = static_cast<double>(w) / static_cast<double>(out_w);
  for (std::size_t y = 0; y < out_h; ++y) {
    const double sy = std::clamp((static_cast<double>(y) + 0.5) * sy_scale - 0.5,
                                 0.0, static_cast<double>(h - 1));
    const auto y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double sx = std::clamp((static_cast<double>(x) + 0.5) * sx_scale - 0.5,
                                   0.0, static_cast<double>(w - 1));
      const auto x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double fx = sx - static_cast<double>(x0);
      for (std::size_t c = 0; c < image.channels(); ++c) {
        const double top = (1.0 - fx) * image.at(c, y0, x0) + fx * image.at(c, y0, x1);
        const double bot = (1.0 - fx) * image.at(c, y1, x0) + fx * image.at(c, y1, x1);
        out.at(c, y, x) = (1.0 - fy) * top + fy * bot;
      }
    }
  }
  return out;
}

FeatureVector FeatureExtractor::extract(const PlanarImage& image) const {
  if (image.channels() != channels_) {
    throw DimensionError("feature extractor expects " + std::to_string(channels_) +
                         " channels, got " + std::to_string(image.channels()));
  }
  const PlanarImage small = resample_bilinear(image, grid_, grid_);
  const auto flat = small.values();
  FeatureVector out{std::vector<double>(dim_)};
  parallel_for(0, dim_, [&](std::size_t r) {
    const double* row = matrix_.data() + r * flat.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i) acc += row[i] * flat[i];
    out.values[r] = acc;
  });
  return out;
}

FeatureVector extract_features(const PlanarImage& image,
                               const ExtractorConfig& config) {
  return FeatureExtractor(config, image.channels()).extract(image);
}

}  // namespace phvi::features
