#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phvi::selftest {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;  // inputs of the first failing case

  bool passed() const noexcept { return failures == 0; }
};

SuiteResult wavelet_reconstruction(std::uint64_t seed, std::size_t trials = 1000);
SuiteResult hvi_round_trip(std::uint64_t seed, std::size_t pixels = 10000);
SuiteResult ciede2000_conformance();
SuiteResult fdm_bruteforce(std::uint64_t seed, std::size_t vectors = 500);
SuiteResult alpha_properties(std::uint64_t seed, std::size_t pairs = 1000);

/// Every embedded suite, in a fixed order.
std::vector<SuiteResult> run_all(std::uint64_t seed = 0);

}  // namespace phvi::selftest
