#pragma once

#include <string>
#include <vector>

namespace roughfilm::selftest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Deterministic per-check lines ("ok ..." / "FAIL ...") safe to serialize.
  std::vector<std::string> checks;
  /// Non-deterministic notes (timings); excluded from byte-compared reports.
  std::vector<std::string> timing_notes;
};

struct Report {
  std::vector<CriterionResult> criteria;
  bool all_passed = false;
};

/// Runs the validation suite: flat-film oracle, parallel/general cross-check,
/// kernel mass identity, slab exactness, homogeneity/reconstruction,
/// null-direction, gamma-convergence sweeps, structural invariants, and a
/// thread-count determinism probe. All tolerances are fixed here.
Report run_acceptance(int threads);

}  // namespace roughfilm::selftest
