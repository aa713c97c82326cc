#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "palm/problems/factories.hpp"
#include "palm/problems/registry.hpp"
#include "palm/util/rng.hpp"
#include "testutil.hpp"

using namespace palm;
using problems::Problem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;

// packs per-channel jets into the engine layout expected by residual ops
std::vector<double> pack_jets(const std::vector<ad::Jet2>& jets) {
  const int d = jets[0].dim;
  const int nc = ad::jet_comps(d);
  std::vector<double> out(jets.size() * nc);
  for (std::size_t ch = 0; ch < jets.size(); ++ch) {
    double* p = out.data() + ch * nc;
    p[0] = jets[ch].v;
    for (int i = 0; i < d; ++i) p[1 + i] = jets[ch].g[i];
    for (int k = 0; k < ad::hess_size(d); ++k) p[1 + d + k] = jets[ch].h[k];
  }
  return out;
}

// |residual| of an operator term fed with finite-difference jets of the
// exact solution; the fields are supplied in long double so the second
// derivatives of high-frequency solutions stay well below the tolerance
double oracle_residual(const Problem& prob, std::size_t term_idx,
                       const std::vector<testutil::FieldFn>& fields, const std::vector<double>& x,
                       double extra_val = 0.0) {
  const int d = prob.dim;
  std::vector<ad::Jet2> jets;
  for (const auto& field : fields) jets.push_back(testutil::fd_jet(field, x));
  const auto packed = pack_jets(jets);
  std::vector<double> seed(packed.size(), 0.0);
  double seed_extra = 0.0;
  return prob.terms[term_idx].op->eval(x.data(), packed.data(), d, nullptr, extra_val,
                                       seed.data(), &seed_extra);
}

// derivative seeds written by an operator match finite differences of its
// residual over the jet components
void check_op_seeds(const Problem& prob, std::size_t term_idx, const std::vector<double>& x,
                    double extra_val, Rng& rng) {
  const int d = prob.dim;
  const int nc = ad::jet_comps(d);
  std::vector<double> jets(static_cast<std::size_t>(prob.channels) * nc);
  for (double& j : jets) j = rng.uniform(-1.0, 1.0);
  std::vector<double> seed(jets.size(), 0.0);
  double seed_extra = 0.0;
  const auto& op = *prob.terms[term_idx].op;
  op.eval(x.data(), jets.data(), d, nullptr, extra_val, seed.data(), &seed_extra);
  const double h = 1e-6;
  for (std::size_t k = 0; k < jets.size(); ++k) {
    std::vector<double> jp = jets, jm = jets;
    jp[k] += h;
    jm[k] -= h;
    std::vector<double> dummy(jets.size(), 0.0);
    double de = 0.0;
    const double rp = op.eval(x.data(), jp.data(), d, nullptr, extra_val, dummy.data(), &de);
    const double rm = op.eval(x.data(), jm.data(), d, nullptr, extra_val, dummy.data(), &de);
    CHECK(seed[k] == doctest::Approx((rp - rm) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
  if (extra_val != 0.0) {
    std::vector<double> dummy(jets.size(), 0.0);
    double de = 0.0;
    const double rp = op.eval(x.data(), jets.data(), d, nullptr, extra_val + h, dummy.data(), &de);
    const double rm = op.eval(x.data(), jets.data(), d, nullptr, extra_val - h, dummy.data(), &de);
    CHECK(seed_extra == doctest::Approx((rp - rm) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
}

}  // namespace

TEST_CASE("composite heat: exact values and oracle residuals") {
  const Problem p = problems::make_composite_heat();
  const double x1[] = {-0.5, 0.7};
  CHECK(p.exact(x1, 0) == doctest::Approx(1.0));  // sin(-3 pi / 2)
  const double x2[] = {0.5, 1.0};
  CHECK(p.exact(x2, 0) == doctest::Approx(0.5));
  CHECK(p.exact(x2, 1) == doctest::Approx(3.0 * kPi));

  const std::vector<testutil::FieldFn> fields{
      [](const std::vector<long double>& q) -> long double {
        return q[0] < 0.0L ? std::sin(3.0L * kPiL * q[0]) : q[1] * q[0];
      },
      [](const std::vector<long double>& q) -> long double {
        return q[0] < 0.0L ? 3.0L * kPiL * std::cos(3.0L * kPiL * q[0]) : 3.0L * kPiL * q[1];
      }};
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    double x;
    do {
      x = rng.uniform(-1.0, 1.0);
    } while (std::fabs(x) < 0.02);
    const std::vector<double> pt{x, rng.uniform(0.05, 1.95)};
    CHECK(std::fabs(oracle_residual(p, 0, fields, pt)) < 1e-6);  // F
    CHECK(std::fabs(oracle_residual(p, 3, fields, pt)) < 1e-6);  // Q
  }
  check_op_seeds(p, 0, {0.3, 0.5}, 0.0, rng);
  check_op_seeds(p, 3, {-0.3, 0.5}, 0.0, rng);
}

TEST_CASE("burgers: exact branches and oracle residuals") {
  const Problem p = problems::make_burgers();
  const double sonic[] = {0.0, 0.5};
  CHECK(p.exact(sonic, 0) == doctest::Approx(0.0));
  const double left[] = {-0.4, 1.0};
  CHECK(p.exact(left, 0) == doctest::Approx(-0.2));
  const double ic0[] = {0.0, 0.0};
  CHECK(p.exact(ic0, 0) == doctest::Approx(-0.2));  // x <= 0 takes the left state

  const std::vector<testutil::FieldFn> fields{[](const std::vector<long double>& q) -> long double {
    if (q[0] <= -0.2L * q[1]) return -0.2L;
    if (q[0] >= 0.4L * q[1]) return 0.4L;
    return q[0] / q[1];
  }};
  Rng rng(32);
  int tested = 0;
  while (tested < 300) {
    const double t = rng.uniform(0.1, 1.0);
    const double x = rng.uniform(-0.5, 0.5);
    // stay away from the solution's derivative kinks
    if (std::fabs(x + 0.2 * t) < 0.03 || std::fabs(x - 0.4 * t) < 0.03) continue;
    ++tested;
    CHECK(std::fabs(oracle_residual(p, 0, fields, {x, t})) < 1e-6);
  }
  check_op_seeds(p, 0, {0.1, 0.4}, 0.0, rng);
}

TEST_CASE("poisson: exact values and oracle residuals at both wavenumbers") {
  const Problem p8 = problems::make_poisson1d(8);
  const double q[] = {0.25};
  CHECK(p8.exact(q, 0) == doctest::Approx(1.0));  // sin(pi/2) + 0.1 sin(2 pi)
  const double q0[] = {0.0}, q1[] = {1.0};
  CHECK(p8.exact(q0, 0) == doctest::Approx(0.0));
  CHECK(std::fabs(p8.exact(q1, 0)) < 1e-12);

  Rng rng(33);
  for (int b : {8, 50}) {
    const Problem p = problems::make_poisson1d(b);
    const std::vector<testutil::FieldFn> fields{
        [b](const std::vector<long double>& q) -> long double {
          return std::sin(2.0L * kPiL * q[0]) + 0.1L * std::sin(b * kPiL * q[0]);
        }};
    for (int trial = 0; trial < 300; ++trial) {
      const std::vector<double> pt{rng.uniform(0.02, 0.98)};
      CHECK(std::fabs(oracle_residual(p, 0, fields, pt)) < 1e-6);
    }
  }
  check_op_seeds(p8, 0, {0.3}, 0.0, rng);
}

TEST_CASE("helmholtz sine variant: source ratio and oracle residuals") {
  const Problem p = problems::make_helmholtz_sine(1, 4);
  const double q[] = {0.5, 0.125};
  CHECK(p.exact(q, 0) == doctest::Approx(1.0));

  const std::vector<testutil::FieldFn> fields{[](const std::vector<long double>& q) -> long double {
    return std::sin(kPiL * q[0]) * std::sin(4.0L * kPiL * q[1]);
  }};
  Rng rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<double> pt{rng.uniform(-0.98, 0.98), rng.uniform(-0.98, 0.98)};
    CHECK(std::fabs(oracle_residual(p, 0, fields, pt)) < 1e-6);
  }
  check_op_seeds(p, 0, {0.2, -0.4}, 0.0, rng);

  // boundary values of the separable solution vanish for integer wavenumbers
  for (double y : {-1.0, -0.25, 0.6, 1.0}) {
    const double edge[] = {1.0, y};
    CHECK(std::fabs(p.exact(edge, 0)) < 1e-12);
  }
}

TEST_CASE("helmholtz gaussian variant: parameters and refusal above level 5") {
  CHECK(problems::helmholtz_gaussian_wavenumber(5) == doctest::Approx(20.0 * kPi));
  CHECK(problems::helmholtz_gaussian_sigma(5) == doctest::Approx(0.025));
  CHECK_NOTHROW(problems::make_helmholtz_gaussian(4));
  CHECK_THROWS_WITH_AS(problems::make_helmholtz_gaussian(6), doctest::Contains("reference"),
                       std::invalid_argument);
}

TEST_CASE("vortex: velocity field, divergence, indicator") {
  double u, v;
  problems::vortex_velocity(0.5, 0.75, 0.0, 8.0, u, v);
  CHECK(u == doctest::Approx(-1.0));
  CHECK(v == doctest::Approx(0.0));

  // divergence vanishes identically: du/dx = pi sin(2 pi x) sin(2 pi y) cos(..)
  // and dv/dy is its negative
  Rng rng(35);
  for (int trial = 0; trial < 300; ++trial) {
    const double x = rng.uniform(0.0, 1.0), y = rng.uniform(0.0, 1.0), t = rng.uniform(0.0, 8.0);
    const double c = std::cos(kPi * t / 8.0);
    const double dudx = kPi * std::sin(2 * kPi * x) * std::sin(2 * kPi * y) * c;
    const double dvdy = -kPi * std::sin(2 * kPi * x) * std::sin(2 * kPi * y) * c;
    CHECK(std::fabs(dudx + dvdy) < 1e-10);
    // cross-check the hand partials against the implemented velocity
    const double h = 1e-6;
    double up, um, vp, vm, w;
    problems::vortex_velocity(x + h, y, t, 8.0, up, w);
    problems::vortex_velocity(x - h, y, t, 8.0, um, w);
    problems::vortex_velocity(x, y + h, t, 8.0, w, vp);
    problems::vortex_velocity(x, y - h, t, 8.0, w, vm);
    CHECK((up - um) / (2 * h) == doctest::Approx(dudx).epsilon(1e-4).scale(1.0));
    CHECK((vp - vm) / (2 * h) == doctest::Approx(dvdy).epsilon(1e-4).scale(1.0));
  }

  CHECK(problems::vortex_indicator(0.5, 0.75) == 1.0);
  CHECK(problems::vortex_indicator(0.1, 0.1) == 0.0);

  problems::VortexParams vp_cfg;
  const Problem p = problems::make_vortex(vp_cfg);
  Rng rng2(36);
  check_op_seeds(p, 0, {0.3, 0.6, 0.1}, 0.0, rng2);
}

TEST_CASE("inverse heat source: exact values and oracle residuals") {
  const Problem p = problems::make_inverse_heat_source(0.0, 99);
  const double q[] = {0.5, 1.0};
  CHECK(p.exact(q, 0) == doctest::Approx(5.0 * std::exp(-3.0)));
  // at x = 1/2 the cos term vanishes: F = -3 + 4.25 pi^2
  CHECK(problems::inverse_heat_exact_source(0.5) ==
        doctest::Approx(-3.0 + 4.25 * kPi * kPi));

  Rng rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<double> pt{rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98)};
    const double extra = problems::inverse_heat_exact_source(pt[0]);
    CHECK(std::fabs(oracle_residual(p, 3, pt, extra)) < 1e-6);
  }
  check_op_seeds(p, 3, {0.3, 0.6}, 1.5, rng);

  // noiseless measurements reduce to the exact final-time trace
  problems::SamplingPlan plan = p.default_plan;
  plan.seed = 7;
  problems::SampleSet ss;
  p.sample(plan, 0, ss);
  for (int i = 0; i < ss[0].n; ++i) {
    const double x[] = {ss[0].x[2 * i], 1.0};
    CHECK(ss[0].data[i] == doctest::Approx(p.exact(x, 0)).epsilon(1e-14));
  }
}

TEST_CASE("inverse heat source: noise is trial-seeded and scales with the level") {
  const Problem p1 = problems::make_inverse_heat_source(0.05, 42);
  const Problem p2 = problems::make_inverse_heat_source(0.05, 42);
  const Problem p3 = problems::make_inverse_heat_source(0.05, 43);
  problems::SamplingPlan plan = p1.default_plan;
  plan.seed = 1;
  problems::SampleSet a, b, c;
  p1.sample(plan, 0, a);
  p2.sample(plan, 0, b);
  p3.sample(plan, 0, c);
  CHECK(a[0].data == b[0].data);   // same noise seed, same measurements
  CHECK(a[0].data != c[0].data);   // different trial, different noise
}

TEST_CASE("burgers mesh decomposition 66x33") {
  const Problem p = problems::make_burgers();
  problems::SamplingPlan plan = p.default_plan;  // 66 x 33
  problems::SampleSet ss;
  p.sample(plan, 0, ss);
  CHECK(ss[0].n == 64 * 32);
  CHECK(ss[1].n == 66);  // 33 per boundary
  CHECK(ss[2].n == 64);
}

TEST_CASE("mesh_axis endpoints") {
  const auto xs = problems::mesh_axis(0.0, 1.0, 3);
  CHECK(xs[0] == 0.0);
  CHECK(xs[1] == 0.5);
  CHECK(xs[2] == 1.0);
}

TEST_CASE("resampling is reproducible for a fixed seed and epoch") {
  const Problem p = problems::make_poisson1d(50);
  problems::SamplingPlan plan;
  plan.mode = problems::SamplingPlan::Mode::ResamplePerEpoch;
  plan.n_interior = 64;
  plan.seed = 5;
  problems::SampleSet a, b, c;
  p.sample(plan, 3, a);
  p.sample(plan, 3, b);
  p.sample(plan, 4, c);
  CHECK(a[0].x == b[0].x);
  CHECK(a[0].x != c[0].x);
}

TEST_CASE("problem registry") {
  CHECK_THROWS_AS(problems::make_problem("no-such-problem", {}, 1), std::invalid_argument);
  const Problem p = problems::make_problem("poisson1d", nlohmann::json{{"b", 50}}, 1);
  CHECK(p.name == "poisson1d-b50");
  CHECK(problems::problem_names().size() == 7);
}
