#pragma once

#include <string>

#include "phvi/color_hvi.hpp"
#include "phvi/image.hpp"
#include "phvi/raw_frontend.hpp"
#include "phvi/weights.hpp"

namespace phvi::net {

/// Forward-pass knobs. A negative slope of 1 turns every activation into the
/// identity, which tests use to build analytically invertible networks.
struct ForwardOptions {
  double negative_slope = 0.2;
};

/// Two same-size 3x3 convolutions (4 -> C, C -> C) with an activation between.
PlanarImage rggb_to_features(const raw::PackedRaw& raw, const WeightBundle& weights,
                             const ForwardOptions& options = {});

/// 1x1 convolution C -> 3 followed by a clamp to [0, 1].
PlanarImage features_to_rgb_proxy(const PlanarImage& features,
                                  const WeightBundle& weights);

/// Encoder half of one branch: stem, then `depth` wavelet down-blocks.
/// `skips[l]` holds the level-l features the decoder concatenates back.
struct BranchEncoding {
  std::vector<PlanarImage> skips;
  PlanarImage bottom;
};

BranchEncoding encode_branch(const PlanarImage& input, const WeightBundle& weights,
                             const std::string& branch,
                             const ForwardOptions& options = {});

/// Decoder half: up-blocks with skip concatenation and 3x3 fusion, then the
/// head conv back to the branch's input channel count.
PlanarImage decode_branch(const BranchEncoding& encoding, const WeightBundle& weights,
                          const std::string& branch,
                          const ForwardOptions& options = {});

/// Full single-branch U-Net ("hv" or "i"), no cross-branch interaction.
/// Output has the input's shape.
PlanarImage unet_branch_forward(const PlanarImage& input, const WeightBundle& weights,
                                const std::string& branch,
                                const ForwardOptions& options = {});

/// Packed RAW (4 x H x W) to RGB at Bayer resolution (3 x 2H x 2W) in [0, 1].
PlanarImage render(const raw::PackedRaw& raw, const WeightBundle& bundle,
                   const ForwardOptions& options = {});

}  // namespace phvi::net
