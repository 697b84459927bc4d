#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "phvi/image.hpp"

namespace phvi::features {

/// Flat feature vector compared by the distribution-matching loss.
struct FeatureVector {
  std::vector<double> values;
};

struct ExtractorConfig {
  std::uint64_t seed = 0;
  std::size_t dim = 256;
  std::size_t grid = 32;  // images are resampled to grid x grid first
};

/// Linear feature extractor: bilinear resample to grid x grid, flatten
/// (channel-major), multiply by a dim x (channels * grid * grid) matrix.
/// The default matrix is a fixed-seed uniform random projection; a matrix can
/// also be loaded from a JSON file to plug in other linear extractors.
class FeatureExtractor {
 public:
  FeatureExtractor(const ExtractorConfig& config, std::size_t channels);

  /// JSON: {"dim": n, "grid": g, "channels": c, "matrix": [n*c*g*g reals]}.
  static FeatureExtractor from_file(const std::filesystem::path& path);

  FeatureVector extract(const PlanarImage& image) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t grid() const noexcept { return grid_; }
  std::size_t channels() const noexcept { return channels_; }
  const std::vector<double>& matrix() const noexcept { return matrix_; }

 private:
  FeatureExtractor() = default;

  std::size_t dim_ = 0;
  std::size_t grid_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> matrix_;  // row-major dim x (channels * grid * grid)
};

/// Bilinear resample (pixel-centre aligned, edge-clamped) to out_h x out_w.
PlanarImage resample_bilinear(const PlanarImage& image, std::size_t out_h,
                              std::size_t out_w);

/// Convenience wrapper constructing the default extractor for `image`.
FeatureVector extract_features(const PlanarImage& image,
                               const ExtractorConfig& config);

}  // namespace phvi::features
