#include <cmath>

#include "palm/problems/factories.hpp"

namespace palm::problems {

namespace {

double exact_sol(double x, double t) {
  if (x <= -0.2 * t) return -0.2;
  if (x >= 0.4 * t) return 0.4;
  return x / t;
}

double initial(double x) { return x <= 0.0 ? -0.2 : 0.4; }

// F := u_t + u u_x
struct BurgersOp final : ResidualOp {
  double eval(const double*, const double* jets, int d, const double*, double,
              double* seed, double*) const override {
    JetRef u{jets, d};
    SeedRef s{seed, d};
    s.g(1, 1.0);
    s.v(u.g(0));
    s.g(0, u.v());
    return u.g(1) + u.v() * u.g(0);
  }
};

}  // namespace

Problem make_burgers() {
  Problem p;
  p.name = "burgers";
  p.dim = 2;
  p.channels = 1;
  p.lo = {-0.5, 0.0};
  p.hi = {0.5, 1.0};

  p.batches.resize(3);
  p.batches[0].needs_jets = true;
  p.batches[1].data_width = 1;
  p.batches[2].data_width = 1;

  p.terms.push_back({.label = "J", .objective = true, .batch = 0,
                     .op = std::make_shared<BurgersOp>()});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "I", .batch = 2, .value_term = true, .channel = 0});

  // Structured mesh: nx * nt nodes; interior residuals exclude the boundary
  // columns and the initial row, the boundary batch takes whole columns at
  // x = +-1/2, the initial batch the interior nodes of the t = 0 row.
  p.sample = [](const SamplingPlan& plan, long, SampleSet& out) {
    const int nx = plan.mesh[0], nt = plan.mesh[1];
    const auto xs = mesh_axis(-0.5, 0.5, nx);
    const auto ts = mesh_axis(0.0, 1.0, nt);
    out.assign(3, Batch{});
    Batch& in = out[0];
    in.n = (nx - 2) * (nt - 1);
    in.x.reserve(static_cast<std::size_t>(in.n) * 2);
    for (int j = 1; j < nt; ++j)
      for (int i = 1; i < nx - 1; ++i) {
        in.x.push_back(xs[i]);
        in.x.push_back(ts[j]);
      }
    Batch& bc = out[1];
    bc.n = 2 * nt;
    for (int side = 0; side < 2; ++side)
      for (int j = 0; j < nt; ++j) {
        bc.x.push_back(side == 0 ? -0.5 : 0.5);
        bc.x.push_back(ts[j]);
        bc.data.push_back(side == 0 ? -0.2 : 0.4);
      }
    Batch& ic = out[2];
    ic.n = nx - 2;
    for (int i = 1; i < nx - 1; ++i) {
      ic.x.push_back(xs[i]);
      ic.x.push_back(0.0);
      ic.data.push_back(initial(xs[i]));
    }
  };

  p.has_exact = true;
  p.exact = [](const double* x, int) { return exact_sol(x[0], x[1]); };

  p.eval_grid.shape = {258, 129};

  p.default_plan.mode = SamplingPlan::Mode::UniformMesh;
  p.default_plan.mesh = {66, 33};
  return p;
}

}  // namespace palm::problems
