#pragma once

#include "kvnlab/report.hpp"

namespace kvnlab {

// Acceptance checks 1-9 at their pinned scales.  Physics constants, the seed
// and the Fock-state parameters come from cfg; thresholds are fixed in code.
std::vector<CheckResult> run_verify_pass(const ExperimentConfig& cfg);

// Runs the pass twice, byte-compares the canonical serializations (runtime
// fields stripped), and appends the determinism check as criterion 10.
RunReport run_full_verify(const ExperimentConfig& cfg);

}  // namespace kvnlab
