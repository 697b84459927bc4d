#include "phvi/conv.hpp"

#include <string>

#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"

namespace phvi {

ConvLayer ConvLayer::zeros(std::size_t out, std::size_t in, std::size_t kernel) {
  return {out, in, kernel, std::vector<double>(out * in * kernel * kernel, 0.0),
          std::vector<double>(out, 0.0)};
}

void ConvLayer::check() const {
  if (kernel == 0 || kernel % 2 == 0) {
    throw WeightError("convolution kernel size must be odd");
  }
  if (weights.size() != out_channels * in_channels * kernel * kernel ||
      bias.size() != out_channels) {
    throw WeightError("convolution buffers do not match shape [" +
                      std::to_string(out_channels) + "," +
                      std::to_string(in_channels) + "," +
                      std::to_string(kernel) + "," + std::to_string(kernel) +
                      "]");
  }
}

PlanarImage conv2d(const PlanarImage& input, const ConvLayer& layer) {
  layer.check();
  if (input.channels() != layer.in_channels) {
    throw WeightError("convolution expects " +
                      std::to_string(layer.in_channels) +
                      " input channels, got " +
                      std::to_string(input.channels()));
  }
  const std::size_t h = input.height(), w = input.width();
  const auto pad = static_cast<std::ptrdiff_t>(layer.kernel / 2);
  PlanarImage out(layer.out_channels, h, w);

  // One task per (output channel, row); each output sample accumulates in a
  // fixed (in, ky, kx) order.
  parallel_for(0, layer.out_channels * h, [&](std::size_t task) {
    const std::size_t o = task / h;
    const std::size_t y = task % h;
    for (std::size_t x = 0; x < w; ++x) {
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < layer.in_channels; ++i) {
        for (std::size_t ky = 0; ky < layer.kernel; ++ky) {
          const std::ptrdiff_t sy =
              static_cast<std::ptrdiff_t>(y) + static_cast<std::ptrdiff_t>(ky) - pad;
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) continue;
          for (std::size_t kx = 0; kx < layer.kernel; ++kx) {
            const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) +
                                      static_cast<std::ptrdiff_t>(kx) - pad;
            if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(w)) continue;
            acc += layer.w(o, i, ky, kx) *
                   input.at(i, static_cast<std::size_t>(sy),
                            static_cast<std::size_t>(sx));
          }
        }
      }
      out.at(o, y, x) = acc;
    }
  });
  return out;
}

void leaky_ramp_inplace(PlanarImage& image, double slope) {
  if (slope == 1.0) return;
  for (double& v : image.values()) {
    if (v < 0.0) v *= slope;
  }
}

}  // namespace phvi
