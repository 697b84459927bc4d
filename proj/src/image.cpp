#include "phvi/image.hpp"

#include <algorithm>
#include <string>

#include "phvi/errors.hpp"

namespace phvi {

PlanarImage::PlanarImage(std::size_t channels, std::size_t height,
                         std::size_t width, double fill)
    : channels_(channels),
      height_(height),
      width_(width),
      data_(channels * height * width, fill) {}

PlanarImage PlanarImage::channel(std::size_t c) const {
  if (c >= channels_) {
    throw DimensionError("channel index " + std::to_string(c) +
                         " out of range");
  }
  PlanarImage out(1, height_, width_);
  std::ranges::copy(plane(c), out.plane(0).begin());
  return out;
}

PlanarImage concat_channels(const PlanarImage& a, const PlanarImage& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DimensionError("concat_channels: spatial dimensions differ");
  }
  PlanarImage out(a.channels() + b.channels(), a.height(), a.width());
  auto it = std::ranges::copy(a.values(), out.values().begin()).out;
  std::ranges::copy(b.values(), it);
  return out;
}

void clamp_inplace(PlanarImage& image, double lo, double hi) {
  for (double& v : image.values()) v = std::clamp(v, lo, hi);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

}  // namespace phvi
