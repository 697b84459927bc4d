#include "phvi/wavelet.hpp"

#include <atomic>
#include <string>

#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"

namespace phvi::wavelet {
namespace {

std::atomic<bool> g_hh_fault{false};

void require_pointwise(const ConvLayer& layer, const char* what) {
  if (layer.kernel != 1) {
    throw WeightError(std::string(what) + " must be a 1x1 convolution");
  }
}

}  // namespace

namespace testing {
void set_hh_sign_fault(bool enabled) { g_hh_fault.store(enabled); }
}  // namespace testing

SubbandSet dwt2_haar(const PlanarImage& plane) {
  if (plane.channels() != 1) {
    throw DimensionError("dwt2_haar operates on a single plane");
  }
  if (plane.height() % 2 != 0 || plane.width() % 2 != 0) {
    throw DimensionError("dwt2_haar requires even dimensions, got " +
                         std::to_string(plane.height()) + "x" +
                         std::to_string(plane.width()));
  }
  const std::size_t h = plane.height() / 2, w = plane.width() / 2;
  const double hh_sign = g_hh_fault.load() ? -1.0 : 1.0;
  SubbandSet out{PlanarImage(1, h, w), PlanarImage(1, h, w),
                 PlanarImage(1, h, w), PlanarImage(1, h, w)};
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double a = plane.at(0, 2 * y, 2 * x);
      const double b = plane.at(0, 2 * y, 2 * x + 1);
      const double c = plane.at(0, 2 * y + 1, 2 * x);
      const double d = plane.at(0, 2 * y + 1, 2 * x + 1);
      out.ll.at(0, y, x) = (a + b + c + d) / 2.0;
      out.lh.at(0, y, x) = (a + b - c - d) / 2.0;
      out.hl.at(0, y, x) = (a - b + c - d) / 2.0;
      out.hh.at(0, y, x) = hh_sign * (a - b - c + d) / 2.0;
    }
  }
  return out;
}

PlanarImage idwt2_haar(const SubbandSet& sub) {
  if (!sub.ll.same_shape(sub.lh) || !sub.ll.same_shape(sub.hl) ||
      !sub.ll.same_shape(sub.hh) || sub.ll.channels() != 1) {
    throw DimensionError("idwt2_haar sub-bands must be single planes of equal size");
  }
  const std::size_t h = sub.ll.height(), w = sub.ll.width();
  PlanarImage out(1, 2 * h, 2 * w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double ll = sub.ll.at(0, y, x);
      const double lh = sub.lh.at(0, y, x);
      const double hl = sub.hl.at(0, y, x);
      const double hh = sub.hh.at(0, y, x);
      out.at(0, 2 * y, 2 * x) = (ll + lh + hl + hh) / 2.0;
      out.at(0, 2 * y, 2 * x + 1) = (ll + lh - hl - hh) / 2.0;
      out.at(0, 2 * y + 1, 2 * x) = (ll - lh + hl - hh) / 2.0;
      out.at(0, 2 * y + 1, 2 * x + 1) = (ll - lh - hl + hh) / 2.0;
    }
  }
  return out;
}

PlanarImage wavelet_down_block(const PlanarImage& features,
                               const ConvLayer& fusion) {
  require_pointwise(fusion, "wavelet down-block fusion");
  const std::size_t c = features.channels();
  if (fusion.in_channels != 4 * c) {
    throw WeightError("wavelet down-block fusion expects " +
                      std::to_string(fusion.in_channels) +
                      " sub-band channels, features provide " +
                      std::to_string(4 * c));
  }
  if (features.height() % 2 != 0 || features.width() % 2 != 0) {
    throw DimensionError("wavelet down-block requires even dimensions");
  }
  PlanarImage bands(4 * c, features.height() / 2, features.width() / 2);
  parallel_for(0, c, [&](std::size_t ch) {
    const SubbandSet s = dwt2_haar(features.channel(ch));
    const PlanarImage* parts[4] = {&s.ll, &s.lh, &s.hl, &s.hh};
    for (std::size_t band = 0; band < 4; ++band) {
      auto dst = bands.plane(band * c + ch);
      auto src = parts[band]->plane(0);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  });
  return conv2d(bands, fusion);
}

PlanarImage wavelet_up_block(const PlanarImage& features,
                             const ConvLayer& adjust) {
  require_pointwise(adjust, "wavelet up-block adjust");
  if (adjust.out_channels == 0 || adjust.out_channels % 4 != 0) {
    throw WeightError("wavelet up-block adjust must produce a multiple of 4 channels");
  }
  const PlanarImage bands = conv2d(features, adjust);
  const std::size_t c_up = adjust.out_channels / 4;
  PlanarImage out(c_up, 2 * features.height(), 2 * features.width());
  parallel_for(0, c_up, [&](std::size_t ch) {
    const SubbandSet s{bands.channel(ch), bands.channel(c_up + ch),
                       bands.channel(2 * c_up + ch),
                       bands.channel(3 * c_up + ch)};
    const PlanarImage plane = idwt2_haar(s);
    auto src = plane.plane(0);
    std::copy(src.begin(), src.end(), out.plane(ch).begin());
  });
  return out;
}

}  // namespace phvi::wavelet
