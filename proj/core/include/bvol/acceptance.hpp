#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bvol/bergman.hpp"

namespace bvol {

enum class Profile { quick, full };

std::string_view to_string(Profile profile);
Profile parse_profile(std::string_view name);

/// Samples per Monte Carlo estimate: 2e4 (quick) or 2e5 (full).
std::size_t profile_samples(Profile profile);

using LaplacianFn = std::function<double(const BergmanPoint&, const TangentParam&, const ChartPoint&)>;

struct AcceptanceOptions {
  Profile profile = Profile::quick;
  std::uint64_t seed = 0;
  /// Laplacian under test in the finite-difference criterion.
  LaplacianFn laplacian;
  /// Criteria to run (1-11); empty means all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;  // not part of the JSON report
};

struct AcceptanceReport {
  Profile profile = Profile::quick;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool all_passed() const;
  /// Deterministic for a fixed profile and seed: timings are left out.
  std::string to_json() const;
};

AcceptanceReport run_acceptance_suite(const AcceptanceOptions& options);

}  // namespace bvol
