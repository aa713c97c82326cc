#pragma once

#include <limits>
#include <string>
#include <vector>

#include "palm/alm/alm.hpp"
#include "palm/nn/network.hpp"
#include "palm/opt/scheduler.hpp"
#include "palm/problems/problem.hpp"
#include "palm/train/evaluate.hpp"

namespace palm::train {

struct OptimizerSpec {
  enum class Kind { Adam, Lbfgs, AdamThenLbfgs };
  Kind kind = Kind::Lbfgs;
  opt::AdamConfig adam;
  opt::LbfgsConfig lbfgs;
  long adam_epochs = 0;  // hybrid: epochs run with Adam before switching
};

struct TrainConfig {
  long epochs = 1000;
  OptimizerSpec optimizer;
  opt::SchedulerConfig scheduler;
  alm::AlmConfig alm;                // eta is resolved from eta_groups
  std::vector<double> eta_groups;    // per constraint group; empty = optimizer default
  Aggregation aggregation = Aggregation::Expectation;
  alm::DistanceFn phi = alm::DistanceFn::Quadratic;
  problems::SamplingPlan plan;       // mesh/counts; seed is derived from the run seed
  long error_every = 0;              // error norms every k epochs (0: final only)
  std::string csv_path;              // per-epoch log; empty disables
  std::vector<double> reference;     // channel-0 values on the eval grid when
                                     // the problem has no closed form
};

struct ErrorPair {
  double l2 = std::numeric_limits<double>::quiet_NaN();
  double linf = std::numeric_limits<double>::quiet_NaN();
};

struct EpochLog {
  long epoch = 0;
  double J = 0.0, L = 0.0, lr = 0.0;
  // per constraint group, in problem order (means of the per-point values in
  // pointwise mode)
  std::vector<double> C, lambda, mu;
  ErrorPair err, err_aux;
  bool dual_updated = false;
};

struct TrainResult {
  bool diverged = false;
  long epochs_run = 0;
  std::vector<EpochLog> history;
  std::vector<std::string> group_labels;
  ErrorPair final_error, final_error_aux;
  long wolfe_failures = 0;
};

// Default penalty scaling factor for the primal optimizer choice.
double default_eta(OptimizerSpec::Kind kind);

// Trains the network in place. All randomness derives from run_seed.
TrainResult train(const problems::Problem& prob, nn::Network& net, const TrainConfig& cfg,
                  std::uint64_t run_seed);

// Error norms of the network against the exact solution (or external
// reference values) on the problem's evaluation grid.
void grid_errors(const problems::Problem& prob, const nn::Network& net,
                 const std::vector<double>& reference, ErrorPair& main_err, ErrorPair& aux_err);

}  // namespace palm::train
