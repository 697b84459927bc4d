#include "phvi/network.hpp"

#include "phvi/conv.hpp"
#include "phvi/errors.hpp"
#include "phvi/wavelet.hpp"

namespace phvi::net {
namespace {

std::size_t branch_channels(const std::string& branch) {
  if (branch == "hv") return 2;
  if (branch == "i") return 1;
  throw WeightError("unknown branch '" + branch + "'");
}

void check_divisible(const PlanarImage& image, std::size_t depth) {
  const std::size_t m = std::size_t{1} << depth;
  if (image.height() % m != 0 || image.width() % m != 0) {
    throw DimensionError("spatial dims " + std::to_string(image.height()) + "x" +
                         std::to_string(image.width()) +
                         " not divisible by 2^depth = " + std::to_string(m));
  }
}

}  // namespace

PlanarImage rggb_to_features(const raw::PackedRaw& raw, const WeightBundle& weights,
                             const ForwardOptions& options) {
  if (raw.planes.channels() != 4) {
    throw DimensionError("RGGB-to-features expects 4 packed planes");
  }
  PlanarImage x = conv2d(raw.planes, weights.conv("rggb.conv1"));
  leaky_ramp_inplace(x, options.negative_slope);
  return conv2d(x, weights.conv("rggb.conv2"));
}

PlanarImage features_to_rgb_proxy(const PlanarImage& features,
                                  const WeightBundle& weights) {
  const ConvLayer proxy = weights.conv("proxy");
  if (proxy.kernel != 1 || proxy.out_channels != 3) {
    throw WeightError("proxy must be a 1x1 convolution to 3 channels");
  }
  PlanarImage rgb = conv2d(features, proxy);
  clamp_inplace(rgb, 0.0, 1.0);
  return rgb;
}

BranchEncoding encode_branch(const PlanarImage& input, const WeightBundle& weights,
                             const std::string& branch,
                             const ForwardOptions& options) {
  const std::size_t depth = weights.config().depth;
  check_divisible(input, depth);
  if (input.channels() != branch_channels(branch)) {
    throw DimensionError("branch '" + branch + "' expects " +
                         std::to_string(branch_channels(branch)) + " channels");
  }
  BranchEncoding enc;
  PlanarImage x = conv2d(input, weights.conv(branch + ".stem"));
  leaky_ramp_inplace(x, options.negative_slope);
  for (std::size_t l = 0; l < depth; ++l) {
    enc.skips.push_back(x);
    x = wavelet::wavelet_down_block(
        x, weights.conv(branch + ".enc" + std::to_string(l) + ".fusion"));
    leaky_ramp_inplace(x, options.negative_slope);
  }
  x = conv2d(x, weights.conv(branch + ".bottleneck"));
  leaky_ramp_inplace(x, options.negative_slope);
  enc.bottom = std::move(x);
  return enc;
}

PlanarImage decode_branch(const BranchEncoding& encoding, const WeightBundle& weights,
                          const std::string& branch,
                          const ForwardOptions& options) {
  PlanarImage x = encoding.bottom;
  for (std::size_t l = encoding.skips.size(); l-- > 0;) {
    const std::string prefix = branch + ".dec" + std::to_string(l);
    PlanarImage up = wavelet::wavelet_up_block(x, weights.conv(prefix + ".adjust"));
    x = conv2d(concat_channels(up, encoding.skips[l]), weights.conv(prefix + ".fuse"));
    leaky_ramp_inplace(x, options.negative_slope);
  }
  return conv2d(x, weights.conv(branch + ".head"));
}

PlanarImage unet_branch_forward(const PlanarImage& input, const WeightBundle& weights,
                                const std::string& branch,
                                const ForwardOptions& options) {
  return decode_branch(encode_branch(input, weights, branch, options), weights,
                       branch, options);
}

PlanarImage render(const raw::PackedRaw& raw, const WeightBundle& bundle,
                   const ForwardOptions& options) {
  bundle.validate();
  const NetworkConfig& cfg = bundle.config();
  check_divisible(raw.planes, cfg.depth);

  const PlanarImage features = rggb_to_features(raw, bundle, options);
  const PlanarImage proxy = features_to_rgb_proxy(features, bundle);
  const hvi::HviImage hvi_in = hvi::rgb_to_hvi(proxy, cfg.hvi_k);

  BranchEncoding hv = encode_branch(concat_channels(hvi_in.h_plane, hvi_in.v_plane),
                                    bundle, "hv", options);
  BranchEncoding in = encode_branch(hvi_in.intensity, bundle, "i", options);

  // Cross-branch exchange at the bottleneck: each branch sees both.
  PlanarImage hv_bottom = conv2d(concat_channels(hv.bottom, in.bottom),
                                 bundle.conv("interact.hv"));
  PlanarImage in_bottom = conv2d(concat_channels(in.bottom, hv.bottom),
                                 bundle.conv("interact.i"));
  hv.bottom = std::move(hv_bottom);
  in.bottom = std::move(in_bottom);

  PlanarImage hv_out = decode_branch(hv, bundle, "hv", options);
  PlanarImage in_out = decode_branch(in, bundle, "i", options);
  clamp_inplace(hv_out, -1.0, 1.0);
  clamp_inplace(in_out, 0.0, 1.0);

  const hvi::HviImage hvi_out{hv_out.channel(0), hv_out.channel(1),
                              std::move(in_out), cfg.hvi_k};
  PlanarImage rgb = hvi::hvi_to_rgb(hvi_out);
  PlanarImage full = wavelet::wavelet_up_block(rgb, bundle.conv("final_up"));
  if (full.channels() != 3) {
    throw WeightError("final_up must produce 3 channels");
  }
  clamp_inplace(full, 0.0, 1.0);
  return full;
}

}  // namespace phvi::net
