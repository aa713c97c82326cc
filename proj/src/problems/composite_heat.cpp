#include <cmath>
#include <numbers>

#include "palm/problems/factories.hpp"

namespace palm::problems {

namespace {

constexpr double kPi = std::numbers::pi;

double kappa(double x) { return x < 0.0 ? 1.0 : 3.0 * kPi; }

double exact_u(double x, double t) { return x < 0.0 ? std::sin(3.0 * kPi * x) : t * x; }

double exact_q(double x, double t) {
  return x < 0.0 ? 3.0 * kPi * std::cos(3.0 * kPi * x) : 3.0 * kPi * t;
}

// source from substituting the manufactured solution into u_t = q_x + s
double source(double x, double /*t*/) {
  return x < 0.0 ? 9.0 * kPi * kPi * std::sin(3.0 * kPi * x) : x;
}

// F := u_t - q_x - s
struct HeatOp final : ResidualOp {
  double eval(const double* x, const double* jets, int d, const double*, double,
              double* seed, double*) const override {
    const int nc = ad::jet_comps(d);
    JetRef u{jets, d}, q{jets + nc, d};
    SeedRef su{seed, d}, sq{seed + nc, d};
    su.g(1, 1.0);
    sq.g(0, -1.0);
    return u.g(1) - q.g(0) - source(x[0], x[1]);
  }
};

// Q := q - kappa u_x
struct FluxOp final : ResidualOp {
  double eval(const double* x, const double* jets, int d, const double*, double,
              double* seed, double*) const override {
    const int nc = ad::jet_comps(d);
    JetRef u{jets, d}, q{jets + nc, d};
    SeedRef su{seed, d}, sq{seed + nc, d};
    const double k = kappa(x[0]);
    sq.v(1.0);
    su.g(0, -k);
    return q.v() - k * u.g(0);
  }
};

}  // namespace

Problem make_composite_heat() {
  Problem p;
  p.name = "composite-heat";
  p.dim = 2;
  p.channels = 2;
  p.lo = {-1.0, 0.0};
  p.hi = {1.0, 2.0};

  p.batches.resize(3);
  p.batches[0].needs_jets = true;                // interior
  p.batches[1].data_width = 1;                   // boundary targets g
  p.batches[2].data_width = 1;                   // initial targets h

  p.terms.push_back({.label = "J", .objective = true, .batch = 0,
                     .op = std::make_shared<HeatOp>()});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "I", .batch = 2, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "Q", .batch = 0, .op = std::make_shared<FluxOp>()});

  p.sample = [](const SamplingPlan& plan, long epoch, SampleSet& out) {
    Rng rng(mix_seed(plan.seed, static_cast<std::uint64_t>(epoch)));
    out.assign(3, Batch{});
    // interior points strictly inside each material subdomain
    Batch& in = out[0];
    in.n = plan.n_interior;
    in.x.resize(static_cast<std::size_t>(in.n) * 2);
    for (int i = 0; i < in.n; ++i) {
      double x;
      do {
        x = rng.uniform(-1.0, 1.0);
      } while (x == 0.0);
      in.x[2 * i] = x;
      in.x[2 * i + 1] = rng.uniform(0.0, 2.0);
    }
    Batch& bc = out[1];
    bc.n = 2 * plan.n_boundary;
    bc.x.resize(static_cast<std::size_t>(bc.n) * 2);
    bc.data.resize(bc.n);
    for (int i = 0; i < bc.n; ++i) {
      const double xb = (i < plan.n_boundary) ? -1.0 : 1.0;
      const double t = rng.uniform(0.0, 2.0);
      bc.x[2 * i] = xb;
      bc.x[2 * i + 1] = t;
      bc.data[i] = exact_u(xb, t);
    }
    Batch& ic = out[2];
    ic.n = plan.n_initial;
    ic.x.resize(static_cast<std::size_t>(ic.n) * 2);
    ic.data.resize(ic.n);
    for (int i = 0; i < ic.n; ++i) {
      double x;
      do {
        x = rng.uniform(-1.0, 1.0);
      } while (x == 0.0);
      ic.x[2 * i] = x;
      ic.x[2 * i + 1] = 0.0;
      ic.data[i] = exact_u(x, 0.0);
    }
  };

  p.has_exact = true;
  p.exact = [](const double* x, int ch) {
    return ch == 0 ? exact_u(x[0], x[1]) : exact_q(x[0], x[1]);
  };
  // the flux is double-valued on the interface
  p.eval_mask = [](const double* x, int ch) { return ch == 0 || x[0] != 0.0; };

  p.eval_grid.shape = {201, 201};
  p.aux_channel = 1;

  p.default_plan.mode = SamplingPlan::Mode::FixedRandom;
  p.default_plan.n_interior = 10000;
  p.default_plan.n_boundary = 5000;
  p.default_plan.n_initial = 5000;
  return p;
}

}  // namespace palm::problems
