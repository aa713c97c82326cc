#include <cmath>
#include <numbers>
#include <stdexcept>

#include "palm/problems/factories.hpp"

namespace palm::problems {

namespace {
constexpr double kPi = std::numbers::pi;
}

void vortex_velocity(double x, double y, double t, double period, double& u, double& v) {
  // (u, v) = (dPsi/dy, -dPsi/dx) for Psi = sin^2(pi x) sin^2(pi y) cos(pi t/T) / pi
  const double c = std::cos(kPi * t / period);
  const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
  u = sx * sx * std::sin(2.0 * kPi * y) * c;
  v = -std::sin(2.0 * kPi * x) * sy * sy * c;
}

double vortex_indicator(double x, double y) {
  const double dx = x - 0.5, dy = y - 0.75;
  return dx * dx + dy * dy <= 0.15 * 0.15 ? 1.0 : 0.0;
}

std::vector<double> vortex_spatial_grid(int nx, int ny) {
  const auto xs = mesh_axis(0.0, 1.0, nx);
  const auto ys = mesh_axis(0.0, 1.0, ny);
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      pts.push_back(xs[i]);
      pts.push_back(ys[j]);
    }
  return pts;
}

namespace {

// F := phi_t + u phi_x + v phi_y
struct AdvectionOp final : ResidualOp {
  explicit AdvectionOp(double period) : period_(period) {}
  double eval(const double* x, const double* jets, int d, const double*, double,
              double* seed, double*) const override {
    JetRef phi{jets, d};
    SeedRef s{seed, d};
    double u, v;
    vortex_velocity(x[0], x[1], x[2], period_, u, v);
    s.g(2, 1.0);
    s.g(0, u);
    s.g(1, v);
    return phi.g(2) + u * phi.g(0) + v * phi.g(1);
  }
  double period_;
};

}  // namespace

Problem make_vortex(const VortexParams& vp) {
  if (!vp.ic_values.empty() &&
      vp.ic_values.size() != static_cast<std::size_t>(vp.nx) * vp.ny)
    throw std::invalid_argument("vortex: initial-condition field does not match the grid");

  Problem p;
  p.name = "vortex";
  p.dim = 3;
  p.channels = 1;
  p.lo = {0.0, 0.0, vp.t_begin};
  p.hi = {1.0, 1.0, vp.t_end};

  p.batches.resize(3);
  p.batches[0].needs_jets = true;   // interior
  p.batches[1].data_width = 1;      // boundary, phi = 0
  p.batches[2].data_width = 1;      // window-initial targets

  p.terms.push_back({.label = "J", .objective = true, .batch = 0,
                     .op = std::make_shared<AdvectionOp>(vp.period)});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});
  p.terms.push_back({.label = "I", .batch = 2, .value_term = true, .channel = 0});

  p.sample = [vp](const SamplingPlan&, long, SampleSet& out) {
    const auto xs = mesh_axis(0.0, 1.0, vp.nx);
    const auto ys = mesh_axis(0.0, 1.0, vp.ny);
    const auto ts = mesh_axis(vp.t_begin, vp.t_end, vp.nt);
    out.assign(3, Batch{});
    Batch& in = out[0];
    for (double t : ts)
      for (int j = 1; j < vp.ny - 1; ++j)
        for (int i = 1; i < vp.nx - 1; ++i) {
          in.x.push_back(xs[i]);
          in.x.push_back(ys[j]);
          in.x.push_back(t);
        }
    in.n = (vp.nx - 2) * (vp.ny - 2) * vp.nt;
    Batch& bc = out[1];
    for (double t : ts)
      for (int j = 0; j < vp.ny; ++j)
        for (int i = 0; i < vp.nx; ++i) {
          if (i != 0 && i != vp.nx - 1 && j != 0 && j != vp.ny - 1) continue;
          bc.x.push_back(xs[i]);
          bc.x.push_back(ys[j]);
          bc.x.push_back(t);
          bc.data.push_back(0.0);
        }
    bc.n = static_cast<int>(bc.data.size());
    Batch& ic = out[2];
    const auto grid = vortex_spatial_grid(vp.nx, vp.ny);
    ic.n = vp.nx * vp.ny;
    ic.x.reserve(static_cast<std::size_t>(ic.n) * 3);
    for (int r = 0; r < ic.n; ++r) {
      ic.x.push_back(grid[2 * r]);
      ic.x.push_back(grid[2 * r + 1]);
      ic.x.push_back(vp.t_begin);
      ic.data.push_back(vp.ic_values.empty() ? vortex_indicator(grid[2 * r], grid[2 * r + 1])
                                             : vp.ic_values[r]);
    }
  };

  p.has_exact = false;
  p.eval_grid.shape = {vp.nx, vp.ny, vp.nt};

  p.default_plan.mode = SamplingPlan::Mode::UniformMesh;
  p.default_plan.mesh = {vp.nx, vp.ny, vp.nt};
  return p;
}

}  // namespace palm::problems
