#include "phvi/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "phvi/ciede2000_reference.hpp"
#include "phvi/color_difference.hpp"
#include "phvi/color_hvi.hpp"
#include "phvi/losses.hpp"
#include "phvi/wavelet.hpp"

namespace phvi::selftest {
namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

void fail(SuiteResult& r, const std::string& detail) {
  if (r.failures++ == 0) r.first_failure = detail;
}

// Rank of values[i] in a stable ascending order, found by counting.
std::size_t brute_rank(const std::vector<double>& values, std::size_t i) {
  std::size_t rank = 0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] < values[i] || (values[j] == values[i] && j < i)) ++rank;
  }
  return rank;
}

}  // namespace

SuiteResult wavelet_reconstruction(std::uint64_t seed, std::size_t trials) {
  SuiteResult r;
  r.name = "wavelet";
  Uniform u(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    PlanarImage p(1, 64, 64);
    for (double& v : p.values()) v = u(-1.0, 1.0);
    const wavelet::SubbandSet s = wavelet::dwt2_haar(p);
    const PlanarImage back = wavelet::idwt2_haar(s);
    double err = 0.0, src_energy = 0.0, band_energy = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      err = std::max(err, std::abs(back.values()[i] - p.values()[i]));
      src_energy += p.values()[i] * p.values()[i];
    }
    for (const PlanarImage* b : {&s.ll, &s.lh, &s.hl, &s.hh}) {
      for (double v : b->values()) band_energy += v * v;
    }
    const double parseval = std::abs(band_energy - src_energy) / src_energy;
    ++r.cases;
    if (err > 1e-6 || parseval > 1e-6) {
      std::ostringstream os;
      os << "trial " << t << " (seed " << seed << "): max abs error " << err
         << ", Parseval relative error " << parseval << ", p[0..3] = " << p.at(0, 0, 0)
         << " " << p.at(0, 0, 1) << " " << p.at(0, 1, 0) << " " << p.at(0, 1, 1);
      fail(r, os.str());
    }
  }
  return r;
}

SuiteResult hvi_round_trip(std::uint64_t seed, std::size_t pixels) {
  SuiteResult r;
  r.name = "hvi";
  Uniform u(seed);
  for (double k : {0.5, 1.0, 2.0}) {
    for (std::size_t n = 0; n < pixels; ++n) {
      double rgb[3] = {u(), u(), u()};
      if (std::max({rgb[0], rgb[1], rgb[2]}) < 0.01) rgb[u.index(3)] = u(0.01, 1.0);
      const auto hvi = hvi::rgb_to_hvi_pixel(rgb[0], rgb[1], rgb[2], k);
      const auto back = hvi::hvi_to_rgb_pixel(hvi[0], hvi[1], hvi[2], k);
      double err = 0.0;
      for (int c = 0; c < 3; ++c) err = std::max(err, std::abs(back[c] - rgb[c]));
      ++r.cases;
      if (err > 1e-5) {
        std::ostringstream os;
        os.precision(17);
        os << "rgb (" << rgb[0] << ", " << rgb[1] << ", " << rgb[2] << "), k " << k
           << ": round-trip error " << err;
        fail(r, os.str());
      }
    }
    const double gray = u();
    const auto g = hvi::rgb_to_hvi_pixel(gray, gray, gray, k);
    ++r.cases;
    if (g[0] != 0.0 || g[1] != 0.0 || g[2] != gray) {
      fail(r, "gray pixel " + std::to_string(gray) + " produced non-zero chroma");
    }
  }
  return r;
}

SuiteResult ciede2000_conformance() {
  SuiteResult r;
  r.name = "ciede2000";
  for (std::size_t i = 0; i < color::kCiede2000Conformance.size(); ++i) {
    const auto& p = color::kCiede2000Conformance[i];
    const color::Lab x{p.l1, p.a1, p.b1};
    const color::Lab y{p.l2, p.a2, p.b2};
    const double d = color::ciede2000(x, y);
    const double d_swapped = color::ciede2000(y, x);
    ++r.cases;
    if (std::abs(d - p.delta_e) > 1e-4 || d != d_swapped) {
      std::ostringstream os;
      os.precision(10);
      os << "pair " << i + 1 << " (" << p.l1 << ", " << p.a1 << ", " << p.b1 << ") vs ("
         << p.l2 << ", " << p.a2 << ", " << p.b2 << "): got " << d << " / " << d_swapped
         << ", expected " << p.delta_e;
      fail(r, os.str());
    }
  }
  return r;
}

SuiteResult fdm_bruteforce(std::uint64_t seed, std::size_t vectors) {
  SuiteResult r;
  r.name = "fdm";
  Uniform u(seed);
  constexpr std::size_t kLengths[] = {1, 2, 17, 64, 256};
  for (std::size_t t = 0; t < vectors; ++t) {
    const std::size_t n = kLengths[t % std::size(kLengths)];
    features::FeatureVector pred{std::vector<double>(n)}, gt{std::vector<double>(n)};
    const bool duplicates = t % 2 == 1;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse quantization forces repeated values in half the vectors.
      pred.values[i] = duplicates ? std::floor(u(0.0, 4.0)) : u(-2.0, 2.0);
      gt.values[i] = duplicates ? std::floor(u(0.0, 4.0)) : u(-2.0, 2.0);
    }
    std::vector<double> expected(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t rank = brute_rank(pred.values, i);
      double matched = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (brute_rank(gt.values, j) == rank) matched = gt.values[j];
      }
      const double d = pred.values[i] - matched;
      expected[i] = d * d;
    }
    const std::vector<double> got = loss::fdm_terms(pred, gt);
    ++r.cases;
    if (got != expected || loss::fdm_loss(pred, gt) != mean(expected)) {
      fail(r, "vector " + std::to_string(t) + " (n = " + std::to_string(n) +
                  ", seed " + std::to_string(seed) + ") differs from rank oracle");
    }

    // Any permutation of gt must give zero loss.
    features::FeatureVector perm = gt;
    for (std::size_t i = n; i > 1; --i) std::swap(perm.values[i - 1], perm.values[u.index(i)]);
    ++r.cases;
    if (loss::fdm_loss(perm, gt) != 0.0) {
      fail(r, "permutation of vector " + std::to_string(t) + " gave non-zero loss");
    }
  }
  return r;
}

SuiteResult alpha_properties(std::uint64_t seed, std::size_t pairs) {
  SuiteResult r;
  r.name = "alpha";
  Uniform u(seed);
  for (std::size_t t = 0; t < pairs; ++t) {
    PlanarImage pred(3, 4, 4), gt(3, 4, 4);
    const double sp = u(), sg = u();
    for (double& v : pred.values()) v = sp * u();
    for (double& v : gt.values()) v = sg * u();
    const double a = loss::alpha_coefficient(pred, gt);
    const double b = loss::alpha_coefficient(gt, pred);
    ++r.cases;
    if (!(a >= 1.0) || a != b) {
      std::ostringstream os;
      os << "pair " << t << " (seed " << seed << "): alpha " << a << ", swapped " << b;
      fail(r, os.str());
    }
  }
  PlanarImage lo(1, 2, 2, 0.1), hi(1, 2, 2, 0.2);
  ++r.cases;
  if (std::abs(loss::alpha_coefficient(lo, hi) - 2.0) > 1e-12) {
    fail(r, "mu_pred 0.1 / mu_gt 0.2 did not give alpha 2");
  }
  ++r.cases;
  if (loss::alpha_coefficient(hi, hi) != 1.0) fail(r, "equal means did not give alpha 1");
  return r;
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {wavelet_reconstruction(seed), hvi_round_trip(seed + 1), ciede2000_conformance(),
          fdm_bruteforce(seed + 2), alpha_properties(seed + 3)};
}

}  // namespace phvi::selftest
