#pragma once

#include <cstddef>
#include <vector>

#include "phvi/image.hpp"

namespace phvi {

/// Dense 2-D convolution parameters, weights laid out [out][in][kh][kw].
struct ConvLayer {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t kernel = 1;  // square, odd
  std::vector<double> weights;
  std::vector<double> bias;

  static ConvLayer zeros(std::size_t out, std::size_t in, std::size_t kernel);

  double& w(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) {
    return weights[((o * in_channels + i) * kernel + ky) * kernel + kx];
  }
  double w(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const {
    return weights[((o * in_channels + i) * kernel + ky) * kernel + kx];
  }

  /// Throws WeightError when the buffers do not match the declared shape.
  void check() const;
};

/// Same-size convolution with zero padding of kernel/2 (cross-correlation, as
/// in common deep-learning frameworks).
PlanarImage conv2d(const PlanarImage& input, const ConvLayer& layer);

/// Leaky ramp: x for x >= 0, slope * x otherwise. slope = 1 is the identity.
void leaky_ramp_inplace(PlanarImage& image, double slope);

}  // namespace phvi
