#include "palm/cli/presets.hpp"

namespace palm::cli {

namespace {

RunConfig base(const std::string& name, const std::string& problem) {
  RunConfig c;
  c.name = name;
  c.problem = problem;
  return c;
}

std::vector<Preset> build() {
  std::vector<Preset> out;

  {
    RunConfig c = base("composite-heat", "composite-heat");
    c.hidden = {30, 30, 30};
    c.out_channels = 2;
    c.optimizer = "lbfgs";
    c.epochs = 5000;
    c.trials = 1;
    c.error_every = 50;
    out.push_back({c.name, "heat conduction in a two-material bar, expectation constraints",
                   false, c});
  }
  {
    RunConfig c = base("composite-heat-pointwise", "composite-heat");
    c.hidden = {30, 30, 30};
    c.out_channels = 2;
    c.optimizer = "lbfgs";
    c.epochs = 5000;
    c.trials = 1;
    c.aggregation = "pointwise";
    c.error_every = 50;
    out.push_back({c.name, "same problem with one multiplier per sampled point", false, c});
  }
  {
    RunConfig c = base("burgers-rarefaction-coarse", "burgers");
    c.hidden = {20, 20, 20};
    c.optimizer = "adam";
    c.epochs = 10000;
    c.trials = 5;
    c.mesh = {66, 33};
    c.sampling = "mesh";
    c.error_every = 100;
    out.push_back({c.name, "transonic rarefaction on the 66x33 mesh, Adam", false, c});
  }
  {
    RunConfig c = base("burgers-rarefaction-fine", "burgers");
    c.hidden = {20, 20, 20};
    c.optimizer = "adam";
    c.epochs = 10000;
    c.trials = 5;
    c.mesh = {130, 65};
    c.sampling = "mesh";
    c.error_every = 100;
    out.push_back({c.name, "transonic rarefaction on the 130x65 mesh, Adam", false, c});
  }
  {
    RunConfig c = base("poisson-b8", "poisson1d");
    c.problem_params["b"] = 8;
    c.hidden = {100, 100, 100, 100};
    c.optimizer = "adam";
    c.scheduler = "plateau";
    c.sched_factor = 0.98;
    c.sched_patience = 100;
    c.epochs = 100000;
    c.trials = 5;
    c.mesh = {130};
    c.sampling = "mesh";
    c.error_every = 500;
    out.push_back({c.name, "two-scale Poisson, b=8, batch 128", false, c});
  }
  {
    RunConfig c = base("poisson-b50-batch512", "poisson1d");
    c.problem_params["b"] = 50;
    c.hidden = {100, 100, 100, 100};
    c.optimizer = "adam";
    c.scheduler = "plateau";
    c.sched_factor = 0.98;
    c.sched_patience = 100;
    c.epochs = 100000;
    c.trials = 5;
    c.mesh = {514};
    c.sampling = "mesh";
    c.error_every = 500;
    out.push_back({c.name, "two-scale Poisson, b=50, batch 512, plain MLP", true, c});
  }
  {
    RunConfig c = base("poisson-b50-fourier", "poisson1d");
    c.problem_params["b"] = 50;
    c.hidden = {100, 100};
    c.fourier = true;
    c.fourier_sigma = 1.0;
    c.optimizer = "adam";
    c.scheduler = "exponential";
    c.sched_factor = 0.9;
    c.sched_period = 1000;
    c.epochs = 40000;
    c.trials = 5;
    c.sampling = "resample";
    c.n_interior = 512;
    c.error_every = 500;
    out.push_back({c.name, "two-scale Poisson, b=50, random feature layer, resampled batches",
                   false, c});
  }
  {
    RunConfig c = base("helmholtz-a1-4", "helmholtz-sine");
    c.problem_params["a1"] = 1;
    c.problem_params["a2"] = 4;
    c.hidden = {16, 16};
    c.optimizer = "lbfgs";
    c.eta = {1.0};
    c.epochs = 1800;
    c.trials = 5;
    c.mesh = {51, 51};
    c.sampling = "mesh";
    c.error_every = 100;
    out.push_back({c.name, "Helmholtz with the (1, 4) sine solution, 2x16 net", false, c});
  }
  {
    RunConfig c = base("helmholtz-a1-4-long", "helmholtz-sine");
    c.problem_params["a1"] = 1;
    c.problem_params["a2"] = 4;
    c.hidden = {16, 16};
    c.optimizer = "lbfgs";
    c.eta = {1.0};
    c.epochs = 5000;
    c.trials = 5;
    c.mesh = {51, 51};
    c.sampling = "mesh";
    c.error_every = 100;
    out.push_back({c.name, "Helmholtz (1, 4) run extended to 5000 epochs", false, c});
  }
  {
    RunConfig c = base("helmholtz-a6-adam", "helmholtz-sine");
    c.problem_params["a1"] = 6;
    c.problem_params["a2"] = 6;
    c.hidden = {128, 128, 128, 128, 128, 128};
    c.optimizer = "adam";
    c.scheduler = "plateau";
    c.epochs = 500000;
    c.trials = 5;
    c.mesh = {51, 51};
    c.sampling = "mesh";
    c.eta = {1.0};
    c.error_every = 1000;
    out.push_back({c.name, "Helmholtz (6, 6), deep network, Adam", true, c});
  }
  {
    RunConfig c = base("helmholtz-a6-lbfgs-3x40", "helmholtz-sine");
    c.problem_params["a1"] = 6;
    c.problem_params["a2"] = 6;
    c.hidden = {40, 40, 40};
    c.optimizer = "lbfgs";
    c.eta = {1.0};
    c.epochs = 50000;
    c.trials = 5;
    c.mesh = {51, 51};
    c.sampling = "mesh";
    c.error_every = 500;
    out.push_back({c.name, "Helmholtz (6, 6), shallow 3x40 net", true, c});
  }
  {
    RunConfig c = base("helmholtz-L4", "helmholtz-gaussian");
    c.problem_params["L"] = 4;
    c.hidden = {20, 20, 20};
    c.optimizer = "lbfgs";
    c.eta = {1.0};
    c.epochs = 80000;
    c.trials = 5;
    c.sampling = "fixed-random";
    c.n_interior = 6400;
    c.n_boundary = 80;
    c.error_every = 1000;
    c.reference_file = "data/helmholtz_ref_L4.grid";
    out.push_back({c.name, "Gaussian-source Helmholtz, level 4", true, c});
  }
  {
    RunConfig c = base("helmholtz-L5-fourier", "helmholtz-gaussian");
    c.problem_params["L"] = 5;
    c.hidden = {60, 60, 60};
    c.fourier = true;
    c.fourier_sigma = 1.0;
    c.optimizer = "lbfgs";
    c.eta = {1.0};
    c.epochs = 80000;
    c.trials = 5;
    c.sampling = "fixed-random";
    c.n_interior = 6400;
    c.n_boundary = 80;
    c.error_every = 1000;
    c.reference_file = "data/helmholtz_ref_L5.grid";
    out.push_back({c.name, "Gaussian-source Helmholtz, level 5, random feature layer", true, c});
  }
  {
    RunConfig c = base("vortex-T8", "vortex");
    c.hidden = {40, 40, 40, 40, 40, 40};
    c.head = "sigmoid";
    c.optimizer = "adam+lbfgs";
    c.adam_epochs = 3000;
    c.epochs = 5000;
    c.eta = {0.01, 0.01};
    c.trials = 5;
    c.windowed = true;
    c.n_windows = 40;
    c.window_dt = 0.2;
    c.period = 8.0;
    c.mesh = {129, 129, 11};
    c.error_every = 0;
    out.push_back({c.name, "reversible vortex advection over the full period", true, c});
  }
  {
    RunConfig c = base("vortex-T2-desk", "vortex");
    c.hidden = {20, 20, 20};
    c.head = "sigmoid";
    c.optimizer = "adam+lbfgs";
    c.adam_epochs = 3000;
    c.epochs = 5000;
    c.eta = {0.01, 0.01};
    c.trials = 1;
    c.windowed = true;
    c.n_windows = 10;
    c.window_dt = 0.2;
    c.period = 2.0;
    c.mesh = {65, 65, 11};
    c.error_every = 0;
    out.push_back({c.name, "shortened vortex run: T=2, 10 windows, coarse mesh", false, c});
  }
  {
    RunConfig c = base("inverse-heat-source", "inverse-heat-source");
    c.problem_params["noise"] = 0.0;
    c.hidden = {40};
    c.out_channels = 2;
    c.optimizer = "lbfgs";
    c.epochs = 10000;
    c.trials = 1;
    c.eta = {1.0, 1.0, 0.01};
    c.error_every = 100;
    out.push_back({c.name, "space-wise heat source recovery, noiseless", false, c});
  }
  {
    RunConfig c = base("inverse-heat-source-noise1", "inverse-heat-source");
    c.problem_params["noise"] = 0.01;
    c.hidden = {40};
    c.out_channels = 2;
    c.optimizer = "lbfgs";
    c.epochs = 10000;
    c.trials = 1;
    c.eta = {1.0, 1.0, 0.01};
    c.error_every = 100;
    out.push_back({c.name, "heat source recovery with 1% measurement noise", false, c});
  }
  {
    RunConfig c = base("inverse-heat-source-noise5", "inverse-heat-source");
    c.problem_params["noise"] = 0.05;
    c.hidden = {40};
    c.out_channels = 2;
    c.optimizer = "lbfgs";
    c.epochs = 10000;
    c.trials = 1;
    c.eta = {1.0, 1.0, 0.01};
    c.error_every = 100;
    out.push_back({c.name, "heat source recovery with 5% measurement noise", false, c});
  }
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace palm::cli
