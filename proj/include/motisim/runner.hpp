// Drives a simulation to t_end, collecting a DiagnosticsRecord every
// `cadence` steps and optional field snapshots, with a graceful abort when
// the blow-up ceiling is hit or a solve fails.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "motisim/diagnostics.hpp"
#include "motisim/motility.hpp"
#include "motisim/solver.hpp"

namespace motisim {

struct RunOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  int cadence = 10;          // diagnostics every this many steps
  double ceiling = 1e8;      // abort once max u exceeds this
  int snapshot_cadence = 0;  // 0 = endpoints only (when out_dir is set)
  std::filesystem::path out_dir;  // empty = no snapshot files
};

struct RunResult {
  SimState state;  // final (or last completed) state
  std::vector<DiagnosticsRecord> records;
  std::string abort_reason;  // empty when the run reached t_end
  bool ceiling_abort = false;
  double wall_seconds = 0.0;
};

// Chooses the motility anchor for state0.tau when it is not already set.
// Always emits an initial record at t = 0; t_end = 0 means zero steps.
RunResult run(SimState state0, Motility& m, const RunOptions& opts);

}  // namespace motisim
