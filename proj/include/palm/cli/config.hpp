#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "palm/nn/network.hpp"
#include "palm/train/trainer.hpp"
#include "palm/tw/timewindow.hpp"

namespace palm::cli {

// One experiment: problem, model, optimisation recipe, trials. Serialises to
// and from the JSON preset format.
struct RunConfig {
  std::string name;                 // preset name (informational)
  std::string problem;
  nlohmann::json problem_params = nlohmann::json::object();

  std::vector<int> hidden{20, 20, 20};
  int out_channels = 1;
  bool fourier = false;
  double fourier_sigma = 1.0;
  std::string head = "linear";      // linear | sigmoid

  std::string optimizer = "lbfgs";  // adam | lbfgs | adam+lbfgs
  double lr = 1e-3;
  long adam_epochs = 0;             // adam+lbfgs: epochs before the switch
  int lbfgs_history = 50;
  int max_line_evals = 25;

  std::string scheduler = "none";   // none | plateau | exponential
  double sched_factor = 0.98;
  int sched_patience = 100;
  int sched_period = 1000;

  std::string strategy = "adaptive";  // monotonic | conditional | adaptive | rmsprop
  std::vector<double> eta;            // per constraint group; empty = default
  double zeta = 0.99, omega = 0.999, epsilon = 1e-16;
  double beta = 2.0, mu_max = 1e4;

  std::string aggregation = "expectation";  // expectation | pointwise
  std::string phi = "quadratic";            // quadratic | abs

  std::string sampling;             // mesh | fixed-random | resample; empty = problem default
  std::vector<int> mesh;
  int n_interior = 0, n_boundary = 0, n_initial = 0;

  long epochs = 1000;
  int trials = 1;
  std::uint64_t seed = 1;
  long error_every = 100;

  // time-windowed runs (vortex)
  bool windowed = false;
  int n_windows = 0;
  double window_dt = 0.0;
  double period = 8.0;

  std::string reference_file;       // external reference grid, when needed
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

// Resolved components (throw std::invalid_argument on bad fields).
nn::NetworkSpec make_network_spec(const RunConfig& c, int in_dim);
train::TrainConfig make_train_config(const RunConfig& c,
                                     const problems::SamplingPlan& problem_default);
tw::WindowSchedule make_window_schedule(const RunConfig& c);

}  // namespace palm::cli
