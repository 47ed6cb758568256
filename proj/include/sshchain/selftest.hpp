#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sshchain {

struct SelfTestOptions {
  std::uint64_t seed = 20240601;
  /// Test fixture: builds the real-space chain with the z coupling negated.
  bool inject_z_sign_error = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Dimer oracles, chiral symmetry, winding analytic vs numeric, winding from
/// the real-space chain vs the closed form, the three Schmidt-number routes,
/// an N = 2 closed-form solve and SIMD vs scalar kernels.
SelfTestReport selftest(const SelfTestOptions& opts = {});

}  // namespace sshchain
