#pragma once

#include "phvi/conv.hpp"
#include "phvi/image.hpp"

namespace phvi::wavelet {

/// One level of the orthonormal 2-D Haar transform of a single plane.
struct SubbandSet {
  PlanarImage ll;
  PlanarImage lh;
  PlanarImage hl;
  PlanarImage hh;
};

/// For each 2x2 block (a b / c d):
///   ll = (a+b+c+d)/2, lh = (a+b-c-d)/2, hl = (a-b+c-d)/2, hh = (a-b-c+d)/2.
/// Input must be single-channel with even height and width.
SubbandSet dwt2_haar(const PlanarImage& plane);

/// Exact inverse of dwt2_haar.
PlanarImage idwt2_haar(const SubbandSet& sub);

/// DWT of every channel, stacked band-major: [LL(0..C), LH(0..C), HL(0..C),
/// HH(0..C)], then the 1x1 `fusion` conv (C_out x 4C).
PlanarImage wavelet_down_block(const PlanarImage& features,
                               const ConvLayer& fusion);

/// 1x1 `adjust` conv to 4*C_up channels, split band-major into LL/LH/HL/HH
/// groups of C_up, and IDWT each quadruple to one channel at twice the size.
PlanarImage wavelet_up_block(const PlanarImage& features,
                             const ConvLayer& adjust);

namespace testing {
/// Flips the sign of the HH band in dwt2_haar. Fault injection for the
/// self-test suite only; never enable in production.
void set_hh_sign_fault(bool enabled);
}  // namespace testing

}  // namespace phvi::wavelet
