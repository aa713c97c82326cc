#include <cmath>
#include <numbers>
#include <stdexcept>

#include "palm/problems/factories.hpp"

namespace palm::problems {

namespace {

constexpr double kPi = std::numbers::pi;

// F := laplace(u) + k^2 u - s
struct HelmholtzOp final : ResidualOp {
  HelmholtzOp(double k, std::function<double(double, double)> src)
      : k2_(k * k), src_(std::move(src)) {}
  double eval(const double* x, const double* jets, int d, const double*, double,
              double* seed, double*) const override {
    JetRef u{jets, d};
    SeedRef s{seed, d};
    s.h(0, 0, 1.0);
    s.h(1, 1, 1.0);
    s.v(k2_);
    return u.h(0, 0) + u.h(1, 1) + k2_ * u.v() - src_(x[0], x[1]);
  }
  double k2_;
  std::function<double(double, double)> src_;
};

struct Rect {
  double x0, x1, y0, y1;
};

void mesh_sampler(const Rect& r, const SamplingPlan& plan, long epoch, SampleSet& out,
                  const std::function<double(double, double)>& g) {
  out.assign(2, Batch{});
  Batch& in = out[0];
  Batch& bc = out[1];
  const double x0 = r.x0, x1 = r.x1, y0 = r.y0, y1 = r.y1;
  if (plan.mode == SamplingPlan::Mode::UniformMesh) {
    const int nx = plan.mesh[0], ny = plan.mesh[1];
    const auto xs = mesh_axis(x0, x1, nx);
    const auto ys = mesh_axis(y0, y1, ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const bool edge = i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
        Batch& b = edge ? bc : in;
        b.x.push_back(xs[i]);
        b.x.push_back(ys[j]);
        if (edge) b.data.push_back(g(xs[i], ys[j]));
      }
    in.n = (nx - 2) * (ny - 2);
    bc.n = 2 * nx + 2 * ny - 4;
  } else {
    Rng rng(mix_seed(plan.seed, static_cast<std::uint64_t>(epoch)));
    in.n = plan.n_interior;
    for (int i = 0; i < in.n; ++i) {
      in.x.push_back(rng.uniform(x0, x1));
      in.x.push_back(rng.uniform(y0, y1));
    }
    bc.n = 4 * plan.n_boundary;
    for (int side = 0; side < 4; ++side)
      for (int i = 0; i < plan.n_boundary; ++i) {
        double x, y;
        switch (side) {
          case 0: x = x0; y = rng.uniform(y0, y1); break;
          case 1: x = x1; y = rng.uniform(y0, y1); break;
          case 2: x = rng.uniform(x0, x1); y = y0; break;
          default: x = rng.uniform(x0, x1); y = y1; break;
        }
        bc.x.push_back(x);
        bc.x.push_back(y);
        bc.data.push_back(g(x, y));
      }
  }
}

}  // namespace

Problem make_helmholtz_sine(int a1, int a2) {
  Problem p;
  p.name = "helmholtz-a" + std::to_string(a1) + "-" + std::to_string(a2);
  p.dim = 2;
  p.channels = 1;
  p.lo = {-1.0, -1.0};
  p.hi = {1.0, 1.0};

  const double k = 1.0;
  auto exact = [a1, a2](double x, double y) {
    return std::sin(a1 * kPi * x) * std::sin(a2 * kPi * y);
  };
  // substitute the separable solution into the operator
  auto src = [a1, a2, k, exact](double x, double y) {
    return (k * k - kPi * kPi * (a1 * a1 + a2 * a2)) * exact(x, y);
  };

  p.batches.resize(2);
  p.batches[0].needs_jets = true;
  p.batches[1].data_width = 1;
  p.terms.push_back({.label = "J", .objective = true, .batch = 0,
                     .op = std::make_shared<HelmholtzOp>(k, src)});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});

  const Rect r{-1.0, 1.0, -1.0, 1.0};
  p.sample = [r, exact](const SamplingPlan& plan, long epoch, SampleSet& out) {
    mesh_sampler(r, plan, epoch, out, exact);
  };

  p.has_exact = true;
  p.exact = [exact](const double* x, int) { return exact(x[0], x[1]); };
  p.eval_grid.shape = {201, 201};

  p.default_plan.mode = SamplingPlan::Mode::UniformMesh;
  p.default_plan.mesh = {51, 51};
  return p;
}

double helmholtz_gaussian_wavenumber(int level) {
  return std::pow(2.0, level) * kPi / 1.6;
}

double helmholtz_gaussian_sigma(int level) { return 0.8 / std::pow(2.0, level); }

Problem make_helmholtz_gaussian(int level) {
  if (level >= 6)
    throw std::invalid_argument(
        "helmholtz-gaussian: levels >= 6 are not supported; the finite-difference "
        "reference solution is unreliable there");
  Problem p;
  p.name = "helmholtz-L" + std::to_string(level);
  p.dim = 2;
  p.channels = 1;
  p.lo = {0.0, 0.0};
  p.hi = {1.0, 1.0};

  const double k = helmholtz_gaussian_wavenumber(level);
  const double sg = helmholtz_gaussian_sigma(level);
  auto src = [sg](double x, double y) {
    const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
    return 1.0 / (2.0 * kPi * sg * sg) * std::exp(-r2 / (2.0 * sg * sg));
  };

  p.batches.resize(2);
  p.batches[0].needs_jets = true;
  p.batches[1].data_width = 1;
  p.terms.push_back({.label = "J", .objective = true, .batch = 0,
                     .op = std::make_shared<HelmholtzOp>(k, src)});
  p.terms.push_back({.label = "B", .batch = 1, .value_term = true, .channel = 0});

  const Rect r{0.0, 1.0, 0.0, 1.0};
  p.sample = [r](const SamplingPlan& plan, long epoch, SampleSet& out) {
    mesh_sampler(r, plan, epoch, out, [](double, double) { return 0.0; });
  };

  p.has_exact = false;  // compared against an external reference grid
  p.eval_grid.shape = {361, 361};

  p.default_plan.mode = SamplingPlan::Mode::FixedRandom;
  p.default_plan.n_interior = 6400;
  p.default_plan.n_boundary = 80;
  return p;
}

}  // namespace palm::problems
