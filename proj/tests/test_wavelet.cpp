#include <doctest.h>

#include "phvi/errors.hpp"
#include "phvi/wavelet.hpp"
#include "test_support.hpp"

using namespace phvi;
using namespace phvi::wavelet;

namespace {

PlanarImage block(double a, double b, double c, double d) {
  PlanarImage p(1, 2, 2);
  p.at(0, 0, 0) = a;
  p.at(0, 0, 1) = b;
  p.at(0, 1, 0) = c;
  p.at(0, 1, 1) = d;
  return p;
}

double energy(const PlanarImage& p) {
  double e = 0.0;
  for (double v : p.values()) e += v * v;
  return e;
}

ConvLayer identity_1x1(std::size_t n) {
  ConvLayer l = ConvLayer::zeros(n, n, 1);
  for (std::size_t i = 0; i < n; ++i) l.w(i, i, 0, 0) = 1.0;
  return l;
}

}  // namespace

TEST_CASE("dwt of a constant plane concentrates in LL") {
  const SubbandSet s = dwt2_haar(PlanarImage(1, 4, 6, 0.3));
  for (double v : s.ll.values()) CHECK(v == doctest::Approx(0.6));
  for (const PlanarImage* b : {&s.lh, &s.hl, &s.hh})
    for (double v : b->values()) CHECK(v == 0.0);
}

TEST_CASE("dwt hand-evaluated blocks") {
  SubbandSet s = dwt2_haar(block(1, 0, 0, 0));
  CHECK(s.ll.at(0, 0, 0) == 0.5);
  CHECK(s.lh.at(0, 0, 0) == 0.5);
  CHECK(s.hl.at(0, 0, 0) == 0.5);
  CHECK(s.hh.at(0, 0, 0) == 0.5);

  s = dwt2_haar(block(1, 1, 0, 0));
  CHECK(s.ll.at(0, 0, 0) == 1.0);
  CHECK(s.lh.at(0, 0, 0) == 1.0);
  CHECK(s.hl.at(0, 0, 0) == 0.0);
  CHECK(s.hh.at(0, 0, 0) == 0.0);
}

TEST_CASE("idwt trivial inputs") {
  PlanarImage z(1, 3, 3);
  CHECK(energy(idwt2_haar({z, z, z, z})) == 0.0);
  const PlanarImage rec = idwt2_haar({PlanarImage(1, 3, 3, 1.4), z, z, z});
  for (double v : rec.values()) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("dimension errors") {
  CHECK_THROWS_AS(dwt2_haar(PlanarImage(1, 3, 4)), DimensionError);
  CHECK_THROWS_AS(dwt2_haar(PlanarImage(1, 4, 5)), DimensionError);
  PlanarImage a(1, 2, 2), b(1, 2, 3);
  CHECK_THROWS_AS(idwt2_haar({a, a, a, b}), DimensionError);
}

TEST_CASE("perfect reconstruction, Parseval and linearity on random planes") {
  test::Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const PlanarImage p = test::random_image(rng, 1, 64, 64, -1, 1);
    const PlanarImage q = test::random_image(rng, 1, 64, 64, -1, 1);
    const SubbandSet sp = dwt2_haar(p);
    CHECK(test::max_abs_diff(idwt2_haar(sp), p) <= 1e-6);
    const double bands = energy(sp.ll) + energy(sp.lh) + energy(sp.hl) + energy(sp.hh);
    CHECK(std::abs(bands - energy(p)) / energy(p) <= 1e-6);

    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    PlanarImage mix(1, 64, 64);
    for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = a * p.values()[i] + b * q.values()[i];
    const SubbandSet sm = dwt2_haar(mix);
    const SubbandSet sq = dwt2_haar(q);
    double err = 0.0;
    for (std::size_t i = 0; i < sm.ll.size(); ++i) {
      err = std::max(err, std::abs(sm.ll.values()[i] - (a * sp.ll.values()[i] + b * sq.ll.values()[i])));
      err = std::max(err, std::abs(sm.hh.values()[i] - (a * sp.hh.values()[i] + b * sq.hh.values()[i])));
    }
    CHECK(err <= 1e-6);
  }
}

TEST_CASE("down block with an LL selector returns the LL band") {
  test::Rng rng(32);
  const PlanarImage f = test::random_image(rng, 1, 8, 8);
  ConvLayer fusion = ConvLayer::zeros(1, 4, 1);
  fusion.w(0, 0, 0, 0) = 1.0;
  CHECK(test::max_abs_diff(wavelet_down_block(f, fusion), dwt2_haar(f).ll) == 0.0);
}

TEST_CASE("down block with zero weights yields the bias") {
  test::Rng rng(33);
  ConvLayer fusion = ConvLayer::zeros(3, 8, 1);
  fusion.bias = {0.1, -0.2, 0.3};
  const PlanarImage out = wavelet_down_block(test::random_image(rng, 2, 6, 4), fusion);
  CHECK(out.channels() == 3);
  CHECK(out.height() == 3);
  CHECK(out.width() == 2);
  for (double v : out.plane(1)) CHECK(v == -0.2);
}

TEST_CASE("down block matches a dense per-pixel matmul oracle") {
  test::Rng rng(34);
  const PlanarImage f = test::random_image(rng, 2, 6, 8, -1, 1);
  const ConvLayer fusion = test::random_conv(rng, 3, 8, 1);
  const PlanarImage out = wavelet_down_block(f, fusion);
  double err = 0.0;
  for (std::size_t y = 0; y < 3; ++y) {
    for (std::size_t x = 0; x < 4; ++x) {
      // Band-major input vector built straight from the 2x2 blocks.
      double v[8];
      for (std::size_t c = 0; c < 2; ++c) {
        const double a = f.at(c, 2 * y, 2 * x), b = f.at(c, 2 * y, 2 * x + 1);
        const double cc = f.at(c, 2 * y + 1, 2 * x), d = f.at(c, 2 * y + 1, 2 * x + 1);
        v[0 + c] = (a + b + cc + d) / 2;
        v[2 + c] = (a + b - cc - d) / 2;
        v[4 + c] = (a - b + cc - d) / 2;
        v[6 + c] = (a - b - cc + d) / 2;
      }
      for (std::size_t o = 0; o < 3; ++o) {
        double acc = fusion.bias[o];
        for (std::size_t i = 0; i < 8; ++i) acc += fusion.w(o, i, 0, 0) * v[i];
        err = std::max(err, std::abs(acc - out.at(o, y, x)));
      }
    }
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("down block errors") {
  CHECK_THROWS_AS(wavelet_down_block(PlanarImage(2, 4, 4), ConvLayer::zeros(2, 4, 1)), WeightError);
  CHECK_THROWS_AS(wavelet_down_block(PlanarImage(1, 4, 4), ConvLayer::zeros(1, 4, 3)), WeightError);
  CHECK_THROWS_AS(wavelet_down_block(PlanarImage(1, 3, 4), ConvLayer::zeros(1, 4, 1)), DimensionError);
}

TEST_CASE("up block: constant LL gives a constant plane, zero in gives zero out") {
  ConvLayer adjust = ConvLayer::zeros(4, 1, 1);
  adjust.w(0, 0, 0, 0) = 2.0;
  const PlanarImage out = wavelet_up_block(PlanarImage(1, 3, 5, 0.25), adjust);
  CHECK(out.height() == 6);
  CHECK(out.width() == 10);
  for (double v : out.values()) CHECK(v == doctest::Approx(0.25));

  test::Rng rng(35);
  ConvLayer random = test::random_conv(rng, 8, 3, 1);
  std::fill(random.bias.begin(), random.bias.end(), 0.0);
  const PlanarImage out0 = wavelet_up_block(PlanarImage(3, 4, 4), random);
  for (double v : out0.values()) CHECK(v == 0.0);

  CHECK_THROWS_AS(wavelet_up_block(PlanarImage(1, 2, 2), ConvLayer::zeros(6, 1, 1)), WeightError);
}

TEST_CASE("down block followed by the matching up block is the identity") {
  test::Rng rng(36);
  for (std::size_t c : {1u, 2u, 3u}) {
    const PlanarImage f = test::random_image(rng, c, 16, 12, -1, 1);
    const PlanarImage back =
        wavelet_up_block(wavelet_down_block(f, identity_1x1(4 * c)), identity_1x1(4 * c));
    CHECK(back.same_shape(f));
    CHECK(test::max_abs_diff(back, f) <= 1e-6);
  }
}

TEST_CASE("blocks are linear in their feature input") {
  test::Rng rng(37);
  ConvLayer fusion = test::random_conv(rng, 4, 8, 1);
  ConvLayer adjust = test::random_conv(rng, 8, 4, 1);
  std::fill(fusion.bias.begin(), fusion.bias.end(), 0.0);
  std::fill(adjust.bias.begin(), adjust.bias.end(), 0.0);
  const PlanarImage p = test::random_image(rng, 2, 8, 8, -1, 1);
  const PlanarImage q = test::random_image(rng, 2, 8, 8, -1, 1);
  PlanarImage sum(2, 8, 8);
  for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] = 2.0 * p.values()[i] - 0.5 * q.values()[i];

  const PlanarImage dp = wavelet_down_block(p, fusion), dq = wavelet_down_block(q, fusion);
  const PlanarImage ds = wavelet_down_block(sum, fusion);
  PlanarImage expect(dp.channels(), dp.height(), dp.width());
  for (std::size_t i = 0; i < expect.size(); ++i) expect.values()[i] = 2.0 * dp.values()[i] - 0.5 * dq.values()[i];
  CHECK(test::max_abs_diff(ds, expect) <= 1e-12);

  const PlanarImage up = wavelet_up_block(ds, adjust);
  const PlanarImage up_p = wavelet_up_block(dp, adjust), up_q = wavelet_up_block(dq, adjust);
  PlanarImage expect_up(up.channels(), up.height(), up.width());
  for (std::size_t i = 0; i < expect_up.size(); ++i) expect_up.values()[i] = 2.0 * up_p.values()[i] - 0.5 * up_q.values()[i];
  CHECK(test::max_abs_diff(up, expect_up) <= 1e-12);
}

TEST_CASE("fault hook flips the HH band only") {
  const PlanarImage p = block(1, 0, 0, 0);
  testing::set_hh_sign_fault(true);
  const SubbandSet s = dwt2_haar(p);
  testing::set_hh_sign_fault(false);
  CHECK(s.hh.at(0, 0, 0) == -0.5);
  CHECK(s.ll.at(0, 0, 0) == 0.5);
  CHECK(dwt2_haar(p).hh.at(0, 0, 0) == 0.5);
}
