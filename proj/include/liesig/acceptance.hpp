#ifndef LIESIG_ACCEPTANCE_HPP
#define LIESIG_ACCEPTANCE_HPP

// The end-to-end acceptance checks, shared by `liesig verify` and the
// acceptance test binary.  Every tolerance is fixed here.

#include <functional>
#include <string>
#include <vector>

namespace liesig {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct AcceptanceOptions {
  int threads = 1;
  /// Criterion ids to run; empty runs all.
  std::vector<int> only;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One "PASS|FAIL  #id  title  (time)  detail" line.
std::string format_result_line(const CriterionResult& r);

}  // namespace liesig

#endif
