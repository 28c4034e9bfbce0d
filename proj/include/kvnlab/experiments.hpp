#pragma once

#include "kvnlab/report.hpp"

namespace kvnlab {

// Dispatches on cfg.experiment, writes the run artifacts (series CSV, scan
// CSV, snapshots, report.json) under resolve_output_dir(cfg) and returns the
// report.  Check failures land in the report, not in exceptions.
RunReport run_experiment(const ExperimentConfig& cfg);

}  // namespace kvnlab
