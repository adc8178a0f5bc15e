#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mcf {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool skipped = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0: no runtime bound
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> failures;  // which sub-checks failed
};

struct AcceptanceOptions {
  // Skips the two expensive criteria (Jacobi, flow); everything else runs at full size.
  bool quick = false;
};

constexpr int kCriteriaCount = 8;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// "[PASS] 4 bessel/heat kernel  key=value ...  (1.23 s / 120 s)"
std::string format_result(const CriterionResult& r);

}  // namespace mcf
