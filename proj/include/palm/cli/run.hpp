#pragma once

#include <string>
#include <vector>

#include "palm/cli/config.hpp"

namespace palm::cli {

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
  double err_l2 = 0.0, err_linf = 0.0;
  double err_l2_aux = 0.0, err_linf_aux = 0.0;
  double area_error = 0.0;  // windowed runs: final-time interface error
  double wall_seconds = 0.0;
};

struct RunSummary {
  std::string out_dir;
  std::vector<TrialRecord> trials;
  double mean_l2 = 0.0, std_l2 = 0.0;
  double best_l2 = 0.0;
  int exit_code = 0;  // 0 ok, 2 all trials diverged
};

// Executes `trials` independent runs (seeds seed, seed+1, ...) and persists
// config snapshot, per-epoch histories, checkpoints, prediction grids and a
// summary under out_dir.
RunSummary run_experiment(const RunConfig& cfg, const std::string& out_dir);

// Default output root: $PALM_RUNS_DIR or ./runs.
std::string default_out_root();

// Locates a data file: as given, else under $PALM_DATA_DIR.
std::string resolve_data_path(const std::string& path);

}  // namespace palm::cli
