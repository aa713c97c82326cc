#include <cmath>
#include <numbers>

#include "palm/problems/factories.hpp"

namespace palm::problems {

namespace {

constexpr double kPi = std::numbers::pi;

// u'' = s for u = sin(2 pi x) + 0.1 sin(b pi x)
struct PoissonOp final : ResidualOp {
  explicit PoissonOp(int b) : b_(b) {}
  double eval(const double* x, const double* jets, int d, const double*, double,
              double* seed, double*) const override {
    JetRef u{jets, d};
    SeedRef s{seed, d};
    s.h(0, 0, 1.0);
    const double bb = static_cast<double>(b_);
    const double src = -4.0 * kPi * kPi * std::sin(2.0 * kPi * x[0]) -
                       0.1 * bb * bb * kPi * kPi * std::sin(bb * kPi * x[0]);
    return u.h(0, 0) - src;
  }
  int b_;
};

}  // namespace

Problem make_poisson1d(int b) {
  Problem p;
  p.name = "poisson1d-b" + std::to_string(b);
  p.dim = 1;
  p.channels = 1;
  p.lo = {0.0};
  p.hi = {1.0};

  p.batches.resize(2);
  p.batches[0].needs_jets = true;
  p.batches[1].data_width = 1;

  p.terms.push_back({.label = "J", .objective = true, .batch = 0,
                     .op = std::make_shared<PoissonOp>(b)});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});

  p.sample = [](const SamplingPlan& plan, long epoch, SampleSet& out) {
    out.assign(2, Batch{});
    Batch& in = out[0];
    if (plan.mode == SamplingPlan::Mode::UniformMesh) {
      // mesh[0] nodes including the two boundary nodes
      const auto xs = mesh_axis(0.0, 1.0, plan.mesh[0]);
      in.n = plan.mesh[0] - 2;
      for (int i = 1; i < plan.mesh[0] - 1; ++i) in.x.push_back(xs[i]);
    } else {
      Rng rng(mix_seed(plan.seed, static_cast<std::uint64_t>(epoch)));
      in.n = plan.n_interior;
      for (int i = 0; i < in.n; ++i) in.x.push_back(rng.uniform(0.0, 1.0));
    }
    Batch& bc = out[1];
    bc.n = 2;
    bc.x = {0.0, 1.0};
    bc.data = {0.0, 0.0};
  };

  p.has_exact = true;
  p.exact = [b](const double* x, int) {
    return std::sin(2.0 * kPi * x[0]) + 0.1 * std::sin(b * kPi * x[0]);
  };

  p.eval_grid.shape = {1001};

  p.default_plan.mode = SamplingPlan::Mode::UniformMesh;
  p.default_plan.mesh = {130};
  return p;
}

}  // namespace palm::problems
