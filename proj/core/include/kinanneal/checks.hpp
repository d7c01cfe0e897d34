#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kinanneal {

struct CheckReport {
  std::string suite;
  bool passed = false;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::string detail;  // summary, plus the failing case when !passed
};

// Test-harness hook: replaces acceptance_from_delta inside the detailed
// balance sweep so a deliberately broken acceptance rule is caught.
using AcceptanceRule = std::function<double(double delta_f, double temperature)>;

CheckReport check_detailed_balance(std::uint64_t seed, const AcceptanceRule& rule = {});
CheckReport check_entropy_dissipation(std::uint64_t seed);
CheckReport check_structure_preservation();
CheckReport check_symmetry_identity();

// Runs the suites named in `suites` ("detailed-balance", "entropy", "fp",
// "symmetry"); empty runs all.
std::vector<CheckReport> run_checks(const std::vector<std::string>& suites = {},
                                    std::uint64_t seed = 0x5eedULL);

}  // namespace kinanneal
