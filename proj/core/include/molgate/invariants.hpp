#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molgate/config.hpp"

namespace molgate {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured residual or difference
  double threshold = 0.0;  // pass iff value < threshold (or == 0 for exact checks)
  bool passed = false;
  std::string detail;
};

struct InvariantOptions {
  std::uint64_t seed = 20240611;
  int eigensystem_samples = 1000;
  bool composite = true;       // include the composite-tier checks
  bool certify = true;         // convergence_certify on both tiers
};

// Property checks run by `molgate certify` and the acceptance test.
std::vector<CheckResult> run_invariant_suite(const RunConfig& config,
                                             const InvariantOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);
std::string format_check(const CheckResult& r);

}  // namespace molgate
