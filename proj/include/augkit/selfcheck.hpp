#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace augkit {

inline constexpr std::uint64_t kMinSelfcheckDraws = 100'000;

struct SelfcheckOptions {
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 0;
  /// Negative control: swaps in a strength mapping that runs backwards for
  /// rotate, which the monotonicity check must catch.
  bool corrupt_strength_mapping = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the pixel-identity oracles, space algebra, strength monotonicity,
/// record replay and TA uniformity checks. Throws ConfigError when
/// draws < kMinSelfcheckDraws.
std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opts);

}  // namespace augkit
