// Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.
#include <cstdio>

#include "kvnlab/verify.hpp"

int main() {
  kvnlab::ExperimentConfig cfg;  // documented defaults throughout
  const kvnlab::RunReport report = kvnlab::run_full_verify(cfg);

  int failures = 0;
  for (const auto& check : report.checks) {
    std::printf("criterion %2d %-26s %s  measured %.6e %s %.1e  (%.1f s)\n", check.id, check.name.c_str(),
                check.passed ? "PASS" : "FAIL", check.measured, check.relation.c_str(), check.threshold,
                check.runtime_seconds);
    if (!check.detail.empty()) std::printf("              %s\n", check.detail.c_str());
    if (!check.passed) ++failures;
  }
  std::printf("acceptance: %d/%zu criteria passed, wall time %.1f s\n", static_cast<int>(report.checks.size()) - failures,
              report.checks.size(), report.runtime_seconds);
  return failures == 0 ? 0 : 1;
}
