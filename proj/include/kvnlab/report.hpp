#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "kvnlab/config.hpp"

namespace kvnlab {

// One pass/fail check inside a report.  id > 0 for numbered acceptance
// criteria, 0 for per-experiment invariant checks.
struct CheckResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // how measured compares to threshold, e.g. "<"
  bool passed = false;
  double runtime_seconds = 0.0;
  std::string detail;
};

struct RunReport {
  ExperimentConfig config;
  std::map<std::string, double> metrics;
  std::vector<std::string> series_files;
  std::vector<CheckResult> checks;
  double runtime_seconds = 0.0;

  bool all_passed() const;
};

nlohmann::json check_to_json(const CheckResult& check);
nlohmann::json report_to_json(const RunReport& report);

// Serialized report with every runtime_seconds field removed; the byte-level
// determinism contract is stated on this form.
std::string report_canonical_string(const RunReport& report);

void write_report_json(const std::string& path, const RunReport& report);

// Shared series writer: fixed column order, %.16e per value.
void write_series_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

}  // namespace kvnlab
