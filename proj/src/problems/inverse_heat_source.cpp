#include <cmath>
#include <numbers>

#include "palm/problems/factories.hpp"

namespace palm::problems {

namespace {

constexpr double kPi = std::numbers::pi;

double exact_u(double x, double t) { return 5.0 * std::exp(-3.0 * t) * std::sin(kPi * x); }

double h_of_t(double t) { return 5.0 * std::exp(-3.0 * t); }

// F := u_t - (kappa' u_x + kappa u_xx) - F(x) H(t), with the source channel
// read from a pinned-time pass
struct InverseHeatOp final : ResidualOp {
  double eval(const double* x, const double* jets, int d, const double*, double extra_val,
              double* seed, double* seed_extra) const override {
    JetRef u{jets, d};
    SeedRef s{seed, d};
    const double kp = 2.0 * x[0];          // kappa'(x), kappa = 4 + x^2
    const double k = 4.0 + x[0] * x[0];
    const double H = h_of_t(x[1]);
    s.g(1, 1.0);
    s.g(0, -kp);
    s.h(0, 0, -k);
    *seed_extra += -H;
    return u.g(1) - kp * u.g(0) - k * u.h(0, 0) - H * extra_val;
  }
};

}  // namespace

double inverse_heat_exact_source(double x) {
  // substitute u = 5 e^{-3t} sin(pi x) into the conduction equation
  return (-3.0 + kPi * kPi * (4.0 + x * x)) * std::sin(kPi * x) -
         2.0 * kPi * x * std::cos(kPi * x);
}

Problem make_inverse_heat_source(double noise_level, std::uint64_t noise_seed) {
  Problem p;
  p.name = "inverse-heat-source";
  p.dim = 2;
  p.channels = 2;  // (u, F)
  p.lo = {0.0, 0.0};
  p.hi = {1.0, 1.0};

  p.batches.resize(4);
  p.batches[0].data_width = 1;   // final-time measurements
  p.batches[1].data_width = 1;   // boundary
  p.batches[2].data_width = 1;   // initial
  p.batches[3].needs_jets = true;
  p.batches[3].has_extra = true;       // source channel at pinned time
  p.batches[3].extra_t_const = 0.0;
  p.batches[3].extra_channel = 1;

  p.terms.push_back({.label = "J", .objective = true, .batch = 0, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "I", .batch = 2, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "F", .batch = 3, .op = std::make_shared<InverseHeatOp>()});

  p.sample = [noise_level, noise_seed](const SamplingPlan& plan, long epoch, SampleSet& out) {
    Rng rng(mix_seed(plan.seed, static_cast<std::uint64_t>(epoch)));
    Rng noise_rng(mix_seed(noise_seed, 0));
    out.assign(4, Batch{});

    const int nm = plan.n_initial;  // measurement/initial/boundary trace sizes match
    Batch& m = out[0];
    m.n = nm;
    const auto xs = mesh_axis(0.0, 1.0, nm);
    for (int i = 0; i < nm; ++i) {
      m.x.push_back(xs[i]);
      m.x.push_back(1.0);
      const double n = noise_level * noise_rng.normal();
      m.data.push_back((1.0 + n) * exact_u(xs[i], 1.0));
    }
    Batch& bc = out[1];
    bc.n = 2 * plan.n_boundary;
    const auto ts = mesh_axis(0.0, 1.0, plan.n_boundary);
    for (int side = 0; side < 2; ++side)
      for (int i = 0; i < plan.n_boundary; ++i) {
        bc.x.push_back(side == 0 ? 0.0 : 1.0);
        bc.x.push_back(ts[i]);
        bc.data.push_back(0.0);  // sin(0) = sin(pi) = 0
      }
    Batch& ic = out[2];
    ic.n = nm;
    for (int i = 0; i < nm; ++i) {
      ic.x.push_back(xs[i]);
      ic.x.push_back(0.0);
      ic.data.push_back(exact_u(xs[i], 0.0));
    }
    Batch& in = out[3];
    in.n = plan.n_interior;
    for (int i = 0; i < in.n; ++i) {
      in.x.push_back(rng.uniform(0.0, 1.0));
      in.x.push_back(rng.uniform(0.0, 1.0));
    }
  };

  p.has_exact = true;
  p.exact = [](const double* x, int ch) {
    return ch == 0 ? exact_u(x[0], x[1]) : inverse_heat_exact_source(x[0]);
  };
  // the source channel is meaningful only on the pinned-time slice
  p.eval_mask = [](const double* x, int ch) { return ch == 0 || x[1] == 0.0; };
  p.aux_channel = 1;

  p.eval_grid.shape = {201, 201};

  p.default_plan.mode = SamplingPlan::Mode::FixedRandom;
  p.default_plan.n_interior = 10000;
  p.default_plan.n_boundary = 128;
  p.default_plan.n_initial = 128;
  return p;
}

}  // namespace palm::problems
