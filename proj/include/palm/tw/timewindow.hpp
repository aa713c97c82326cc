#pragma once

#include <functional>
#include <vector>

#include "palm/nn/network.hpp"
#include "palm/problems/factories.hpp"
#include "palm/train/trainer.hpp"

namespace palm::tw {

// Sequential non-overlapping time windows over [t0, t0 + n_windows * dt].
// Each window trains a fresh network; its terminal state becomes the next
// window's initial-condition targets.
struct WindowSchedule {
  int n_windows = 40;
  double dt = 0.2;
  double t0 = 0.0;
  double period = 8.0;      // flow-reversal period of the vortex
  int nx = 65, ny = 65, nt = 11;
  bool warm_start = false;  // reuse the previous window's weights instead of
                            // a fresh initialisation
  nn::NetworkSpec net_spec;
};

struct HandoffField {
  int window = 0;                // window whose terminal state this is
  std::vector<double> xy;        // spatial grid, n x 2
  std::vector<double> phi;       // values at the window's terminal time
};

struct WindowRun {
  std::vector<nn::Network> nets;
  std::vector<HandoffField> handoffs;
  std::vector<train::TrainResult> results;
  bool diverged = false;
  int windows_completed = 0;
};

// Trains all windows in order. A diverged window aborts the sequence; the
// handoffs produced so far stay valid. on_window, when set, runs after each
// finished window (checkpointing, progress).
WindowRun run_windows(const WindowSchedule& sched, const train::TrainConfig& per_window,
                      std::uint64_t seed,
                      const std::function<void(int, const nn::Network&, const train::TrainResult&)>&
                          on_window = nullptr);

// Index of the window owning time t; a t exactly on an interior boundary
// belongs to the later window.
int window_of(const WindowSchedule& sched, double t, int windows_available);

// Evaluates the stitched per-window models at (x, y, t) query points.
std::vector<double> evaluate_global(const std::vector<nn::Network>& nets,
                                    const WindowSchedule& sched, const double* xyt, std::size_t n);

}  // namespace palm::tw
