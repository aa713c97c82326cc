#include "palm/cli/config.hpp"

#include <stdexcept>

namespace palm::cli {

namespace {

template <typename T>
void fetch(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  fetch(j, "name", c.name);
  if (!j.contains("problem")) bad("config: missing 'problem'");
  const auto& p = j.at("problem");
  if (p.is_string()) {
    c.problem = p.get<std::string>();
  } else {
    c.problem = p.at("name").get<std::string>();
    c.problem_params = p;
    c.problem_params.erase("name");
  }
  if (j.contains("network")) {
    const auto& n = j.at("network");
    fetch(n, "hidden", c.hidden);
    fetch(n, "out_channels", c.out_channels);
    fetch(n, "fourier", c.fourier);
    fetch(n, "fourier_sigma", c.fourier_sigma);
    fetch(n, "head", c.head);
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    fetch(o, "kind", c.optimizer);
    fetch(o, "lr", c.lr);
    fetch(o, "adam_epochs", c.adam_epochs);
    fetch(o, "lbfgs_history", c.lbfgs_history);
    fetch(o, "max_line_evals", c.max_line_evals);
  }
  if (j.contains("scheduler")) {
    const auto& s = j.at("scheduler");
    fetch(s, "kind", c.scheduler);
    fetch(s, "factor", c.sched_factor);
    fetch(s, "patience", c.sched_patience);
    fetch(s, "period", c.sched_period);
  }
  if (j.contains("alm")) {
    const auto& a = j.at("alm");
    fetch(a, "strategy", c.strategy);
    if (a.contains("eta")) {
      if (a.at("eta").is_number())
        c.eta = {a.at("eta").get<double>()};
      else
        c.eta = a.at("eta").get<std::vector<double>>();
    }
    fetch(a, "zeta", c.zeta);
    fetch(a, "omega", c.omega);
    fetch(a, "epsilon", c.epsilon);
    fetch(a, "beta", c.beta);
    fetch(a, "mu_max", c.mu_max);
  }
  fetch(j, "aggregation", c.aggregation);
  fetch(j, "phi", c.phi);
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    fetch(s, "mode", c.sampling);
    fetch(s, "mesh", c.mesh);
    fetch(s, "n_interior", c.n_interior);
    fetch(s, "n_boundary", c.n_boundary);
    fetch(s, "n_initial", c.n_initial);
  }
  fetch(j, "epochs", c.epochs);
  fetch(j, "trials", c.trials);
  fetch(j, "seed", c.seed);
  fetch(j, "error_every", c.error_every);
  if (j.contains("windows")) {
    const auto& w = j.at("windows");
    c.windowed = true;
    fetch(w, "count", c.n_windows);
    fetch(w, "dt", c.window_dt);
    fetch(w, "period", c.period);
  }
  fetch(j, "reference_file", c.reference_file);
  if (c.epochs < 1) bad("config: epochs must be >= 1");
  if (c.trials < 1) bad("config: trials must be >= 1");
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  nlohmann::json p = c.problem_params;
  p["name"] = c.problem;
  j["problem"] = p;
  j["network"] = {{"hidden", c.hidden},
                  {"out_channels", c.out_channels},
                  {"fourier", c.fourier},
                  {"fourier_sigma", c.fourier_sigma},
                  {"head", c.head}};
  j["optimizer"] = {{"kind", c.optimizer},
                    {"lr", c.lr},
                    {"adam_epochs", c.adam_epochs},
                    {"lbfgs_history", c.lbfgs_history},
                    {"max_line_evals", c.max_line_evals}};
  j["scheduler"] = {{"kind", c.scheduler},
                    {"factor", c.sched_factor},
                    {"patience", c.sched_patience},
                    {"period", c.sched_period}};
  nlohmann::json alm = {{"strategy", c.strategy}, {"zeta", c.zeta},   {"omega", c.omega},
                        {"epsilon", c.epsilon},   {"beta", c.beta},   {"mu_max", c.mu_max}};
  if (!c.eta.empty()) alm["eta"] = c.eta;
  j["alm"] = alm;
  j["aggregation"] = c.aggregation;
  j["phi"] = c.phi;
  nlohmann::json s;
  if (!c.sampling.empty()) s["mode"] = c.sampling;
  if (!c.mesh.empty()) s["mesh"] = c.mesh;
  if (c.n_interior) s["n_interior"] = c.n_interior;
  if (c.n_boundary) s["n_boundary"] = c.n_boundary;
  if (c.n_initial) s["n_initial"] = c.n_initial;
  if (!s.is_null()) j["sampling"] = s;
  j["epochs"] = c.epochs;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["error_every"] = c.error_every;
  if (c.windowed)
    j["windows"] = {{"count", c.n_windows}, {"dt", c.window_dt}, {"period", c.period}};
  if (!c.reference_file.empty()) j["reference_file"] = c.reference_file;
  return j;
}

nn::NetworkSpec make_network_spec(const RunConfig& c, int in_dim) {
  nn::NetworkSpec spec;
  spec.in_dim = in_dim;
  spec.out_dim = c.out_channels;
  if (c.head == "linear")
    spec.head = nn::Head::Linear;
  else if (c.head == "sigmoid")
    spec.head = nn::Head::Sigmoid;
  else
    bad("config: unknown head '" + c.head + "'");
  if (c.fourier) {
    if (c.hidden.empty() || c.hidden.front() % 2 != 0)
      bad("config: fourier networks need an even first hidden width");
    spec.fourier = true;
    // the random feature layer stands in for the first hidden layer
    spec.fourier_m = c.hidden.front() / 2;
    spec.fourier_sigma = c.fourier_sigma;
    spec.hidden.assign(c.hidden.begin() + 1, c.hidden.end());
  } else {
    spec.hidden = c.hidden;
  }
  return spec;
}

train::TrainConfig make_train_config(const RunConfig& c,
                                     const problems::SamplingPlan& problem_default) {
  train::TrainConfig t;
  t.epochs = c.epochs;
  if (c.optimizer == "adam") {
    t.optimizer.kind = train::OptimizerSpec::Kind::Adam;
  } else if (c.optimizer == "lbfgs") {
    t.optimizer.kind = train::OptimizerSpec::Kind::Lbfgs;
  } else if (c.optimizer == "adam+lbfgs") {
    t.optimizer.kind = train::OptimizerSpec::Kind::AdamThenLbfgs;
    t.optimizer.adam_epochs = c.adam_epochs;
  } else {
    bad("config: unknown optimizer '" + c.optimizer + "'");
  }
  t.optimizer.adam.lr = c.lr;
  t.optimizer.lbfgs.history = c.lbfgs_history;
  t.optimizer.lbfgs.max_line_evals = c.max_line_evals;

  if (c.scheduler == "none")
    t.scheduler.kind = opt::SchedulerKind::None;
  else if (c.scheduler == "plateau")
    t.scheduler.kind = opt::SchedulerKind::Plateau;
  else if (c.scheduler == "exponential")
    t.scheduler.kind = opt::SchedulerKind::Exponential;
  else
    bad("config: unknown scheduler '" + c.scheduler + "'");
  t.scheduler.factor = c.sched_factor;
  t.scheduler.patience = c.sched_patience;
  t.scheduler.period = c.sched_period;

  if (c.strategy == "monotonic")
    t.alm.strategy = alm::PenaltyStrategy::Monotonic;
  else if (c.strategy == "conditional")
    t.alm.strategy = alm::PenaltyStrategy::Conditional;
  else if (c.strategy == "adaptive")
    t.alm.strategy = alm::PenaltyStrategy::Adaptive;
  else if (c.strategy == "rmsprop")
    t.alm.strategy = alm::PenaltyStrategy::RmsProp;
  else
    bad("config: unknown penalty strategy '" + c.strategy + "'");
  t.alm.zeta = c.zeta;
  t.alm.omega = c.omega;
  t.alm.epsilon = c.epsilon;
  t.alm.beta = c.beta;
  t.alm.mu_max = c.mu_max;
  t.eta_groups = c.eta;

  if (c.aggregation == "expectation")
    t.aggregation = train::Aggregation::Expectation;
  else if (c.aggregation == "pointwise")
    t.aggregation = train::Aggregation::Pointwise;
  else
    bad("config: unknown aggregation '" + c.aggregation + "'");

  if (c.phi == "quadratic")
    t.phi = alm::DistanceFn::Quadratic;
  else if (c.phi == "abs")
    t.phi = alm::DistanceFn::Abs;
  else
    bad("config: unknown phi '" + c.phi + "'");

  t.plan = problem_default;
  if (!c.sampling.empty()) {
    if (c.sampling == "mesh")
      t.plan.mode = problems::SamplingPlan::Mode::UniformMesh;
    else if (c.sampling == "fixed-random")
      t.plan.mode = problems::SamplingPlan::Mode::FixedRandom;
    else if (c.sampling == "resample")
      t.plan.mode = problems::SamplingPlan::Mode::ResamplePerEpoch;
    else
      bad("config: unknown sampling mode '" + c.sampling + "'");
  }
  if (!c.mesh.empty()) t.plan.mesh = c.mesh;
  if (c.n_interior) t.plan.n_interior = c.n_interior;
  if (c.n_boundary) t.plan.n_boundary = c.n_boundary;
  if (c.n_initial) t.plan.n_initial = c.n_initial;

  t.error_every = c.error_every;
  return t;
}

tw::WindowSchedule make_window_schedule(const RunConfig& c) {
  tw::WindowSchedule s;
  s.n_windows = c.n_windows;
  s.dt = c.window_dt;
  s.period = c.period;
  if (c.mesh.size() == 3) {
    s.nx = c.mesh[0];
    s.ny = c.mesh[1];
    s.nt = c.mesh[2];
  }
  if (s.n_windows < 1) bad("config: windows.count must be >= 1");
  if (s.dt <= 0.0) bad("config: windows.dt must be positive");
  return s;
}

}  // namespace palm::cli
