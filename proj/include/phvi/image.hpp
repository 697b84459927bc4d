#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phvi {

/// Channel-major planar image of real samples: data[(c * height + y) * width + x].
class PlanarImage {
 public:
  PlanarImage() = default;
  PlanarImage(std::size_t channels, std::size_t height, std::size_t width,
              double fill = 0.0);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * height_ + y) * width_ + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * height_ + y) * width_ + x];
  }

  std::span<double> plane(std::size_t c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const double> plane(std::size_t c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const PlanarImage& other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  /// Copies channel c into a new single-channel image.
  PlanarImage channel(std::size_t c) const;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Stacks the channels of a and b (a first). Spatial dims must match.
PlanarImage concat_channels(const PlanarImage& a, const PlanarImage& b);

/// Clamps every sample into [lo, hi].
void clamp_inplace(PlanarImage& image, double lo, double hi);

/// Pairwise (cascade) sum with a fixed split order; used by every reduction.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

}  // namespace phvi
