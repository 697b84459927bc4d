#include <doctest.h>

#include <cmath>

#include "phvi/errors.hpp"
#include "phvi/parallel.hpp"
#include "phvi/raw_frontend.hpp"
#include "test_support.hpp"

using namespace phvi;
using namespace phvi::raw;

namespace {

BayerFrame make_frame(std::size_t w, std::size_t h, std::uint16_t fill = 100) {
  BayerFrame f;
  f.width = w;
  f.height = h;
  f.data.assign(w * h, fill);
  f.black_levels = {64, 64, 64, 64};
  f.white_level = 4160;
  return f;
}

PackedRaw random_packed(test::Rng& rng, std::size_t h, std::size_t w) {
  return {test::random_image(rng, 4, h, w), "rand"};
}

double smooth(double x, double y) {
  return 0.5 + 0.2 * std::sin(x / 9.0) * std::cos(y / 11.0) + 0.1 * std::cos((x + y) / 13.0);
}

}  // namespace

TEST_CASE("black_white_correct endpoints and the worked value") {
  BayerFrame f = make_frame(2, 2);
  f.data = {64, 4160, 2112, 0};
  const RealMosaic m = black_white_correct(f);
  CHECK(m.at(0, 0) == 0.0);
  CHECK(m.at(0, 1) == 1.0);
  CHECK(m.at(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.at(1, 1) == 0.0);  // below black level clamps
}

TEST_CASE("black_white_correct uses the per-site level") {
  BayerFrame f = make_frame(2, 2, 1000);
  f.black_levels = {0, 100, 200, 300};
  f.white_level = 1100;
  const RealMosaic m = black_white_correct(f);
  CHECK(m.at(0, 0) == doctest::Approx(1000.0 / 1100.0));
  CHECK(m.at(0, 1) == doctest::Approx(900.0 / 1000.0));
  CHECK(m.at(1, 0) == doctest::Approx(800.0 / 900.0));
  CHECK(m.at(1, 1) == doctest::Approx(700.0 / 800.0));
}

TEST_CASE("black_white_correct is monotone in the raw value") {
  BayerFrame f = make_frame(2, 2);
  double prev = -1.0;
  for (std::uint32_t s = 0; s <= 5000; s += 7) {
    f.data.assign(4, static_cast<std::uint16_t>(s));
    const double v = black_white_correct(f).at(1, 1);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("invalid metadata is rejected") {
  BayerFrame f = make_frame(4, 4);
  f.white_level = 64;
  CHECK_THROWS_AS(black_white_correct(f), InvalidMetadataError);

  f = make_frame(3, 4);
  CHECK_THROWS_AS(f.validate(), DimensionError);

  f = make_frame(4, 4);
  f.homography.m = {1, 2, 0, 2, 4, 0, 0, 0, 1};
  CHECK_THROWS_AS(f.validate(), ParameterError);

  f = make_frame(4, 4);
  f.crop = {1, 0, 2, 2};
  CHECK_THROWS_AS(f.validate(), InvalidMetadataError);
}

TEST_CASE("pack_rggb site selection per pattern") {
  const RealMosaic m{2, 2, {1.0, 2.0, 3.0, 4.0}};  // [[a, b], [c, d]]
  auto planes = [](const PackedRaw& p) {
    return std::array<double, 4>{p.planes.at(0, 0, 0), p.planes.at(1, 0, 0),
                                 p.planes.at(2, 0, 0), p.planes.at(3, 0, 0)};
  };
  CHECK(planes(pack_rggb(m, BayerPattern::kRGGB)) == std::array<double, 4>{1, 2, 3, 4});
  CHECK(planes(pack_rggb(m, BayerPattern::kBGGR)) == std::array<double, 4>{4, 3, 2, 1});
  CHECK(planes(pack_rggb(m, BayerPattern::kGRBG)) == std::array<double, 4>{2, 1, 4, 3});
  CHECK(planes(pack_rggb(m, BayerPattern::kGBRG)) == std::array<double, 4>{3, 4, 1, 2});
}

TEST_CASE("pack_rggb on a 4x4 mosaic matches index enumeration") {
  RealMosaic m{4, 4, {}};
  for (int i = 0; i < 16; ++i) m.data.push_back(i);
  const PackedRaw p = pack_rggb(m, BayerPattern::kRGGB);
  REQUIRE(p.planes.height() == 2);
  REQUIRE(p.planes.width() == 2);
  // Enumerate all 16 mosaic indices and route each to its plane by parity.
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) {
      const std::size_t plane = (y % 2) * 2 + (x % 2);
      CHECK(p.planes.at(plane, y / 2, x / 2) == m.at(y, x));
    }
  }
}

TEST_CASE("pack then unpack reproduces the mosaic for every pattern") {
  test::Rng rng(11);
  RealMosaic m{8, 6, {}};
  for (int i = 0; i < 48; ++i) m.data.push_back(rng.uniform());
  for (auto pat : {BayerPattern::kRGGB, BayerPattern::kBGGR, BayerPattern::kGRBG,
                   BayerPattern::kGBRG}) {
    CHECK(unpack_rggb(pack_rggb(m, pat), pat).data == m.data);
  }
  CHECK_THROWS_AS(pack_rggb(RealMosaic{3, 2, std::vector<double>(6)}, BayerPattern::kRGGB),
                  DimensionError);
}

TEST_CASE("pattern names round trip") {
  for (auto name : {"RGGB", "BGGR", "GRBG", "GBRG"}) {
    CHECK(to_string(parse_pattern(name)) == name);
  }
  CHECK_THROWS_AS(parse_pattern("RGBG"), ParseError);
}

TEST_CASE("identity warp with full crop is exact") {
  test::Rng rng(1);
  const PackedRaw p = random_packed(rng, 10, 12);
  const PackedRaw out = warp_and_crop(p, Homography::identity(), {});
  CHECK(test::max_abs_diff(out.planes, p.planes) == 0.0);
  CHECK(out.source_id == "rand");
}

TEST_CASE("identity warp on a sub-crop returns the cropped region") {
  test::Rng rng(2);
  const PackedRaw p = random_packed(rng, 10, 12);
  const PackedRaw out = warp_and_crop(p, Homography::identity(), {3, 2, 5, 4});
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t y = 0; y < 4; ++y)
      for (std::size_t x = 0; x < 5; ++x) CHECK(out.planes.at(c, y, x) == p.planes.at(c, y + 2, x + 3));
}

TEST_CASE("integer translation matches the shift oracle on the interior") {
  test::Rng rng(3);
  const PackedRaw p = random_packed(rng, 16, 16);
  const PackedRaw out = warp_and_crop(p, Homography::translation(3, 0), {4, 2, 10, 12});
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t y = 0; y < 12; ++y) {
      for (std::size_t x = 0; x < 10; ++x) {
        CHECK(out.planes.at(c, y, x) == p.planes.at(c, y + 2, x + 4 - 3));
      }
    }
  }
}

TEST_CASE("translation leaves uncovered pixels zero") {
  test::Rng rng(4);
  const PackedRaw p = random_packed(rng, 8, 8);
  const PackedRaw out = warp_and_crop(p, Homography::translation(3, 0), {});
  for (std::size_t y = 0; y < 8; ++y) {
    for (std::size_t x = 0; x < 3; ++x) CHECK(out.planes.at(0, y, x) == 0.0);
  }
}

TEST_CASE("90 degree rotation matches the index-rotation oracle") {
  PackedRaw p{PlanarImage(4, 8, 8), "asym"};
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t y = 0; y < 8; ++y)
      for (std::size_t x = 0; x < 8; ++x) p.planes.at(c, y, x) = 0.01 * (c * 64 + y * 8 + x) + (x == 1 && y == 0 ? 0.5 : 0.0);
  // (x, y) -> (7 - y, x)
  const Homography rot{{0, -1, 7, 1, 0, 0, 0, 0, 1}};
  const PackedRaw out = warp_and_crop(p, rot, {});
  double err = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t ty = 0; ty < 8; ++ty) {
      for (std::size_t tx = 0; tx < 8; ++tx) {
        err = std::max(err, std::abs(out.planes.at(c, ty, tx) - p.planes.at(c, 7 - tx, ty)));
      }
    }
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("warp composition agrees with the product homography on smooth images") {
  PackedRaw p{PlanarImage(4, 64, 64), "smooth"};
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t y = 0; y < 64; ++y)
      for (std::size_t x = 0; x < 64; ++x) p.planes.at(c, y, x) = smooth(x + 3.0 * c, y);

  const double a = 0.05;
  const Homography h1{{std::cos(a), -std::sin(a), 2.3, std::sin(a), std::cos(a), -1.7, 0, 0, 1}};
  const Homography h2{{1.02, 0.01, -0.6, -0.015, 0.99, 1.25, 1e-5, -2e-5, 1}};
  const PackedRaw twice = warp_and_crop(warp_and_crop(p, h2, {}), h1, {});
  const PackedRaw once = warp_and_crop(p, h1 * h2, {});

  // Interior only: the two routes zero-fill different border strips.
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t y = 12; y < 52; ++y)
      for (std::size_t x = 12; x < 52; ++x, ++n) total += std::abs(twice.planes.at(c, y, x) - once.planes.at(c, y, x));
  // bilinear error bound for this curvature is ~4e-4 per resampling
  CHECK(total / static_cast<double>(n) <= 1e-3);
}

TEST_CASE("warp composition is exact for affine maps of a linear ramp") {
  PackedRaw p{PlanarImage(4, 48, 48), "ramp"};
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t y = 0; y < 48; ++y)
      for (std::size_t x = 0; x < 48; ++x) p.planes.at(c, y, x) = 0.1 + 0.01 * x + 0.007 * y + 0.05 * c;

  const Homography h1{{0.98, -0.05, 1.3, 0.05, 0.98, -0.4, 0, 0, 1}};
  const Homography h2{{1.01, 0.02, -0.7, -0.01, 0.99, 0.9, 0, 0, 1}};
  const PackedRaw twice = warp_and_crop(warp_and_crop(p, h2, {}), h1, {});
  const PackedRaw once = warp_and_crop(p, h1 * h2, {});
  double worst = 0.0;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t y = 6; y < 42; ++y)
      for (std::size_t x = 6; x < 42; ++x)
        worst = std::max(worst, std::abs(twice.planes.at(c, y, x) - once.planes.at(c, y, x)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("warp rejects singular homographies and out-of-frame crops") {
  test::Rng rng(5);
  const PackedRaw p = random_packed(rng, 8, 8);
  CHECK_THROWS_AS(warp_and_crop(p, Homography{{0, 0, 0, 0, 0, 0, 0, 0, 1}}, {}), ParameterError);
  CHECK_THROWS_AS(warp_and_crop(p, Homography::identity(), {4, 4, 5, 2}), InvalidMetadataError);
}

TEST_CASE("homography inverse and product") {
  const Homography h{{1.1, 0.2, 3, -0.1, 0.9, 2, 0.001, 0.002, 1}};
  const Homography id = h * h.inverse();
  for (int i = 0; i < 9; ++i) CHECK(id.m[i] == doctest::Approx(i % 4 == 0 ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("warp result is independent of the thread count") {
  test::Rng rng(6);
  const PackedRaw p = random_packed(rng, 32, 40);
  const Homography h{{0.98, 0.05, 1.3, -0.04, 1.01, -0.7, 1e-4, 0, 1}};
  set_thread_count(1);
  const PackedRaw a = warp_and_crop(p, h, {2, 2, 30, 24});
  set_thread_count(4);
  const PackedRaw b = warp_and_crop(p, h, {2, 2, 30, 24});
  set_thread_count(1);
  CHECK(a.planes.values().size() == b.planes.values().size());
  CHECK(std::equal(a.planes.values().begin(), a.planes.values().end(), b.planes.values().begin()));
}

TEST_CASE("preprocess chains correction, packing and alignment") {
  BayerFrame f = make_frame(8, 8, 2112);
  f.crop = {1, 1, 2, 2};
  const PackedRaw p = preprocess(f, "frame");
  CHECK(p.planes.channels() == 4);
  CHECK(p.planes.height() == 2);
  CHECK(p.planes.width() == 2);
  CHECK(p.planes.at(3, 1, 1) == doctest::Approx(0.5));
}
