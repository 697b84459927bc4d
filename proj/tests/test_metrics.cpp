#include <doctest.h>

#include <cmath>

#include "phvi/errors.hpp"
#include "phvi/metrics.hpp"
#include "test_support.hpp"

using namespace phvi;
using namespace phvi::metrics;

namespace {

// Straight 2-D windowed SSIM, one window position at a time.
double ssim_oracle(const PlanarImage& a, const PlanarImage& b) {
  const int win = 11;
  double g[11][11], total = 0.0;
  for (int i = 0; i < win; ++i)
    for (int j = 0; j < win; ++j) {
      const double dy = i - 5, dx = j - 5;
      g[i][j] = std::exp(-(dx * dx + dy * dy) / (2 * 1.5 * 1.5));
      total += g[i][j];
    }
  double channels = 0.0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t y = 0; y + win <= a.height(); ++y) {
      for (std::size_t x = 0; x + win <= a.width(); ++x) {
        double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
        for (int i = 0; i < win; ++i)
          for (int j = 0; j < win; ++j) {
            const double w = g[i][j] / total;
            const double va = a.at(c, y + i, x + j), vb = b.at(c, y + i, x + j);
            ma += w * va;
            mb += w * vb;
          }
        for (int i = 0; i < win; ++i)
          for (int j = 0; j < win; ++j) {
            const double w = g[i][j] / total;
            const double da = a.at(c, y + i, x + j) - ma, db = b.at(c, y + i, x + j) - mb;
            saa += w * da * da;
            sbb += w * db * db;
            sab += w * da * db;
          }
        sum += ((2 * ma * mb + 1e-4) * (2 * sab + 9e-4)) /
               ((ma * ma + mb * mb + 1e-4) * (saa + sbb + 9e-4));
        ++count;
      }
    }
    channels += sum / count;
  }
  return channels / static_cast<double>(a.channels());
}

}  // namespace

TEST_CASE("psnr sentinel, worked value and errors") {
  test::Rng rng(61);
  const PlanarImage a = test::random_image(rng, 3, 8, 8, 0.0, 0.8);
  CHECK(std::isinf(psnr(a, a)));
  CHECK(psnr(a, a) > 0);

  PlanarImage b = a;
  for (double& v : b.values()) v += 0.1;
  CHECK(psnr(b, a) == doctest::Approx(20.0).epsilon(1e-9));
  CHECK_THROWS_AS(psnr(a, PlanarImage(3, 8, 7)), DimensionError);
}

TEST_CASE("psnr decreases as noise grows") {
  test::Rng rng(62);
  int wins = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const PlanarImage gt = test::random_image(rng, 3, 32, 32, 0.2, 0.8);
    PlanarImage lo = gt, hi = gt;
    for (double& v : lo.values()) v += 0.01 * rng.normal();
    for (double& v : hi.values()) v += 0.05 * rng.normal();
    wins += psnr(lo, gt) > psnr(hi, gt) ? 1 : 0;
  }
  CHECK(wins == 20);
}

TEST_CASE("ssim of an image with itself is one") {
  test::Rng rng(63);
  const PlanarImage a = test::random_image(rng, 3, 24, 17);
  CHECK(std::abs(ssim(a, a) - 1.0) <= 1e-9);
}

TEST_CASE("ssim on constant images reduces to the luminance term") {
  const PlanarImage a(3, 16, 16, 0.7), b(3, 16, 16, 0.2);
  const double expect = (2 * 0.7 * 0.2 + kSsimC1) / (0.49 + 0.04 + kSsimC1);
  CHECK(ssim(a, b) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("ssim of anti-correlated patterns is negative and matches the oracle") {
  PlanarImage a(1, 16, 16), b(1, 16, 16);
  for (std::size_t y = 0; y < 16; ++y)
    for (std::size_t x = 0; x < 16; ++x) {
      const double s = ((x + y) % 2 == 0) ? 0.3 : -0.3;
      a.at(0, y, x) = 0.5 + s;
      b.at(0, y, x) = 0.5 - s;
    }
  const double v = ssim(a, b);
  CHECK(v < 0.0);
  CHECK(std::abs(v - ssim_oracle(a, b)) <= 1e-9);

  test::Rng rng(64);
  const PlanarImage p = test::random_image(rng, 2, 20, 23), q = test::random_image(rng, 2, 20, 23);
  CHECK(std::abs(ssim(p, q) - ssim_oracle(p, q)) <= 1e-9);
}

TEST_CASE("ssim rejects images smaller than the window") {
  CHECK_THROWS_AS(ssim(PlanarImage(1, 10, 20), PlanarImage(1, 10, 20)), DimensionError);
}

TEST_CASE("edge loss: identity, constant images and a step edge") {
  test::Rng rng(65);
  const PlanarImage a = test::random_image(rng, 3, 12, 12);
  CHECK(edge_loss(a, a) == 0.0);
  CHECK(edge_loss(PlanarImage(3, 8, 8, 0.1), PlanarImage(3, 8, 8, 0.9)) == 0.0);

  PlanarImage step(1, 8, 16), flat(1, 8, 16, 0.3);
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t x = 8; x < 16; ++x) step.at(0, y, x) = 1.0;

  // Direct stencil: only columns 7 and 8 see the step, each with |gx| = 1+2+1.
  double oracle = 0.0;
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t x = 0; x < 16; ++x) {
      auto px = [&](long yy, long xx) {
        yy = std::clamp(yy, 0L, 7L);
        xx = std::clamp(xx, 0L, 15L);
        return step.at(0, yy, xx);
      };
      const long Y = static_cast<long>(y), X = static_cast<long>(x);
      const double gx = px(Y - 1, X + 1) + 2 * px(Y, X + 1) + px(Y + 1, X + 1) -
                        px(Y - 1, X - 1) - 2 * px(Y, X - 1) - px(Y + 1, X - 1);
      oracle += std::abs(gx);
    }
  oracle /= 8 * 16;
  CHECK(oracle == doctest::Approx(0.5));
  CHECK(edge_loss(step, flat) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK_THROWS_AS(edge_loss(step, PlanarImage(1, 8, 8)), DimensionError);
}

TEST_CASE("l1 loss") {
  const PlanarImage a(2, 3, 3, 0.25), b(2, 3, 3, 0.75);
  CHECK(l1_loss(a, b) == 0.5);
  CHECK(l1_loss(a, a) == 0.0);
}
