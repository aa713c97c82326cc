#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "palm/alm/alm.hpp"
#include "palm/util/rng.hpp"

using namespace palm;
using Eigen::VectorXd;

namespace {
VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("assemble_loss") {
  CHECK(alm::assemble_loss(1.0, vec({0.0, 0.0}), vec({3.0, -2.0}), vec({5.0, 9.0})) == 1.0);
  CHECK(alm::assemble_loss(0.0, vec({0.5}), vec({2.0}), vec({4.0})) == doctest::Approx(1.5));
  CHECK(alm::assemble_loss(7.25, vec({0.3, -1.0}), vec({0.0, 0.0}), vec({0.0, 0.0})) == 7.25);
  CHECK_THROWS_AS(alm::assemble_loss(0.0, vec({1.0}), vec({1.0, 2.0}), vec({1.0})),
                  std::invalid_argument);
}

TEST_CASE("aggregate_expectation") {
  const double r1[] = {1.0, -1.0};
  CHECK(alm::aggregate_expectation(r1, alm::DistanceFn::Quadratic) == doctest::Approx(1.0));
  const double r2[] = {0.0, 0.0, 0.0};
  CHECK(alm::aggregate_expectation(r2, alm::DistanceFn::Quadratic) == 0.0);
  const double r3[] = {3.0};
  CHECK(alm::aggregate_expectation(r3, alm::DistanceFn::Abs) == doctest::Approx(3.0));
  CHECK_THROWS_AS(alm::aggregate_expectation({}, alm::DistanceFn::Quadratic),
                  std::invalid_argument);
}

TEST_CASE("aggregate_pointwise") {
  const double r[] = {0.1, 0.2};
  const VectorXd out = alm::aggregate_pointwise(r, alm::DistanceFn::Quadratic);
  CHECK(out[0] == doctest::Approx(0.01));
  CHECK(out[1] == doctest::Approx(0.04));
  const double z[] = {0.0, 0.0, 0.0, 0.0};
  CHECK(alm::aggregate_pointwise(z, alm::DistanceFn::Quadratic).isZero());
}

TEST_CASE("dual_update") {
  alm::DualState s = alm::DualState::init(2);
  s.lambda = vec({1.0, 2.0});
  s.mu = vec({1.0, 10.0});
  alm::dual_update(s, vec({0.5, -0.1}));
  CHECK(s.lambda[0] == doctest::Approx(1.5));
  CHECK(s.lambda[1] == doctest::Approx(1.0));

  alm::DualState t = alm::DualState::init(3);
  const VectorXd before = t.lambda;
  alm::dual_update(t, VectorXd::Zero(3));
  CHECK(t.lambda == before);

  alm::DualState u = alm::DualState::init(1);
  alm::dual_update(u, vec({0.1}));
  CHECK(u.lambda[0] == doctest::Approx(1.1));
}

TEST_CASE("monotonic penalty update") {
  alm::AlmConfig cfg;
  cfg.strategy = alm::PenaltyStrategy::Monotonic;

  alm::DualState s = alm::DualState::init(1);
  alm::monotonic_epoch(s, vec({0.5}), cfg);
  CHECK(s.lambda[0] == doctest::Approx(1.5));  // dual step before the growth

  // mu follows min(2^e, 1e4) exactly
  alm::DualState t = alm::DualState::init(1);
  for (int e = 1; e <= 20; ++e) {
    alm::monotonic_epoch(t, vec({0.0}), cfg);
    CHECK(t.mu[0] == std::min(std::pow(2.0, e), 1e4));
  }
  CHECK(t.mu[0] == 1e4);
  alm::monotonic_epoch(t, vec({0.0}), cfg);
  CHECK(t.mu[0] == 1e4);  // capped
}

TEST_CASE("conditional penalty update") {
  alm::AlmConfig cfg;
  cfg.strategy = alm::PenaltyStrategy::Conditional;

  // first epoch: the reference norm is infinite, so the dual branch runs
  alm::DualState s = alm::DualState::init(1);
  alm::conditional_epoch(s, vec({0.4}), cfg);
  CHECK(s.lambda[0] == doctest::Approx(1.4));
  CHECK(s.mu[0] == 1.0);

  // rising constraint norm: penalty doubles, multipliers frozen
  alm::conditional_epoch(s, vec({0.9}), cfg);
  CHECK(s.lambda[0] == doctest::Approx(1.4));
  CHECK(s.mu[0] == 2.0);

  // monotonically shrinking constraints never grow the penalty
  alm::DualState t = alm::DualState::init(1);
  double c = 1.0;
  for (int e = 0; e < 50; ++e) {
    alm::conditional_epoch(t, vec({c}), cfg);
    c *= 0.9;
    CHECK(t.mu[0] == 1.0);
  }
}

TEST_CASE("conditional update never touches lambda and mu on the same epoch") {
  alm::AlmConfig cfg;
  cfg.strategy = alm::PenaltyStrategy::Conditional;
  alm::DualState s = alm::DualState::init(2);
  Rng rng(3);
  for (int e = 0; e < 300; ++e) {
    const VectorXd lam = s.lambda, mu = s.mu;
    alm::conditional_epoch(s, vec({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}), cfg);
    const bool lam_changed = (s.lambda.array() != lam.array()).any();
    const bool mu_changed = (s.mu.array() != mu.array()).any();
    CHECK(!(lam_changed && mu_changed));
  }
}

TEST_CASE("adaptive penalty update (worked examples)") {
  alm::AlmConfig cfg;
  cfg.strategy = alm::PenaltyStrategy::Adaptive;
  cfg.eta = vec({0.01});

  SUBCASE("open gate with eta = 0.01 leaves mu at 1") {
    alm::DualState s = alm::DualState::init(1);
    s.prev_loss = 1.0;  // current loss 1.0 >= 0.999 -> gate open
    alm::adaptive_epoch(s, vec({0.1}), 1.0, cfg);
    CHECK(s.vbar[0] == doctest::Approx(1e-4));
    CHECK(s.lambda[0] == doctest::Approx(1.1));
    CHECK(s.mu[0] == doctest::Approx(1.0));
  }

  SUBCASE("open gate with eta = 1 raises mu to 100") {
    cfg.eta = vec({1.0});
    alm::DualState s = alm::DualState::init(1);
    s.prev_loss = 1.0;
    alm::adaptive_epoch(s, vec({0.1}), 1.0, cfg);
    CHECK(s.mu[0] == doctest::Approx(100.0).epsilon(1e-9));
  }

  SUBCASE("closed gate leaves lambda and mu bit-identical, vbar still moves") {
    alm::DualState s = alm::DualState::init(1);
    s.prev_loss = 1.0;
    const VectorXd lam = s.lambda, mu = s.mu;
    alm::adaptive_epoch(s, vec({0.1}), 0.5, cfg);  // 0.5 < 0.999
    CHECK(s.lambda == lam);
    CHECK(s.mu == mu);
    CHECK(s.vbar[0] == doctest::Approx(1e-4));
    CHECK(s.prev_loss == 0.5);
  }

  SUBCASE("first epoch gate is closed against the infinite placeholder") {
    alm::DualState s = alm::DualState::init(1);
    alm::adaptive_epoch(s, vec({0.3}), 42.0, cfg);
    CHECK(s.lambda[0] == 1.0);
    CHECK(s.mu[0] == 1.0);
    CHECK(s.prev_loss == 42.0);
  }
}

TEST_CASE("adaptive mu is non-decreasing along any trajectory") {
  alm::AlmConfig cfg;
  cfg.strategy = alm::PenaltyStrategy::Adaptive;
  cfg.eta = vec({0.7, 0.01, 1.3});
  alm::DualState s = alm::DualState::init(3);
  Rng rng(11);
  double loss = 10.0;
  for (int e = 0; e < 500; ++e) {
    const VectorXd mu = s.mu;
    loss *= rng.uniform(0.9, 1.1);
    alm::adaptive_epoch(s, vec({rng.normal(), rng.normal(), rng.normal()}), loss, cfg);
    for (int i = 0; i < 3; ++i) CHECK(s.mu[i] >= mu[i]);
  }
}

TEST_CASE("rmsprop penalty update") {
  alm::AlmConfig cfg;
  cfg.strategy = alm::PenaltyStrategy::RmsProp;
  cfg.eta = vec({0.01});

  SUBCASE("vbar = 1e-4 gives mu = 1") {
    alm::DualState s = alm::DualState::init(1);
    s.vbar = vec({1e-4 / cfg.zeta - (1.0 - cfg.zeta) * 0.0 / cfg.zeta});  // so post-update vbar...
    // simpler: drive vbar to 1e-4 directly with C chosen accordingly
    s.vbar = vec({0.0});
    s.prev_loss = 1.0;
    alm::rmsprop_epoch(s, vec({0.1}), 1.0, cfg);  // vbar = 1e-4
    CHECK(s.vbar[0] == doctest::Approx(1e-4));
    CHECK(s.mu[0] == doctest::Approx(1.0));
  }

  SUBCASE("growing violations shrink the penalty (the failure mode)") {
    alm::DualState s = alm::DualState::init(1);
    s.prev_loss = 1.0;
    double prev_mu = -1.0;
    bool decreased = false;
    double c = 0.1;
    for (int e = 0; e < 20; ++e) {
      alm::rmsprop_epoch(s, vec({c}), 1.0, cfg);  // gate always open
      if (prev_mu > 0.0 && s.mu[0] < prev_mu) decreased = true;
      prev_mu = s.mu[0];
      c *= 1.5;  // constraint keeps growing
    }
    CHECK(decreased);
  }

  SUBCASE("converged history: lambda increment per update approaches eta") {
    cfg.eta = vec({0.01});
    alm::DualState s = alm::DualState::init(1);
    const double c = 0.25;
    s.vbar = vec({c * c});
    s.prev_loss = 1.0;
    const double lam0 = s.lambda[0];
    alm::rmsprop_epoch(s, vec({c}), 1.0, cfg);
    CHECK(s.lambda[0] - lam0 == doctest::Approx(0.01).epsilon(1e-6));
  }
}

TEST_CASE("dL/dlambda_i equals C_i") {
  Rng rng(21);
  const VectorXd C = vec({0.37, -0.12, 2.5});
  const VectorXd mu = vec({1.0, 3.0, 0.5});
  VectorXd lam = vec({rng.normal(), rng.normal(), rng.normal()});
  const double J = 1.234;
  const double L0 = alm::assemble_loss(J, C, lam, mu);
  for (int i = 0; i < 3; ++i) {
    VectorXd lp = lam;
    lp[i] += 1.0;
    CHECK(alm::assemble_loss(J, C, lp, mu) - L0 == doctest::Approx(C[i]).epsilon(1e-12));
  }
}

TEST_CASE("expectation and point-wise assemblies agree on random data") {
  // mean of the point-wise augmented terms = expectation-form terms built
  // from E[phi(r)] and E[phi(r)^2]
  Rng rng(5);
  for (alm::DistanceFn phi : {alm::DistanceFn::Quadratic, alm::DistanceFn::Abs}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 40;
      std::vector<double> r(n);
      for (double& x : r) x = rng.normal();
      const double lam = rng.uniform(0.1, 3.0);
      const double mu = rng.uniform(0.1, 3.0);
      const double J = rng.normal();

      const VectorXd Cpw = alm::aggregate_pointwise(r, phi);
      const double Lpw = alm::assemble_loss(J, Cpw, VectorXd::Constant(n, lam),
                                            VectorXd::Constant(n, mu));

      std::vector<double> phi_vals(n);
      for (int i = 0; i < n; ++i) phi_vals[i] = alm::phi_value(phi, r[i]);
      const double e_phi = alm::aggregate_expectation(r, phi);
      const double e_phi2 = alm::aggregate_expectation(phi_vals, alm::DistanceFn::Quadratic);
      const double Lexp = J / n + lam * e_phi + 0.5 * mu * e_phi2;
      CHECK(Lpw / n == doctest::Approx(Lexp).epsilon(1e-12));
    }
  }
}

namespace {

// minimise theta^2 subject to theta = 1
alm::ConstrainedEval toy_eval(const VectorXd& th) {
  alm::ConstrainedEval ev;
  ev.J = th[0] * th[0];
  ev.C = VectorXd::Constant(1, th[0] - 1.0);
  ev.has_parts = true;
  ev.gradJ = VectorXd::Constant(1, 2.0 * th[0]);
  ev.gradC = {VectorXd::Constant(1, 1.0)};
  return ev;
}

}  // namespace

TEST_CASE("driver solves min theta^2 s.t. theta = 1") {
  for (auto strategy : {alm::PenaltyStrategy::Adaptive, alm::PenaltyStrategy::Monotonic}) {
    alm::DriverConfig cfg;
    cfg.alm.strategy = strategy;
    cfg.alm.eta = vec({1.0});
    cfg.primal = alm::PrimalKind::Lbfgs;
    alm::Driver driver(1, 1, cfg);
    VectorXd theta = VectorXd::Zero(1);
    auto obj = [](const VectorXd& th, const alm::EvalRequest&) { return toy_eval(th); };
    for (int e = 0; e < 200; ++e) driver.step_epoch(theta, obj);
    CHECK(std::fabs(theta[0] - 1.0) < 1e-4);
    if (strategy == alm::PenaltyStrategy::Adaptive)
      CHECK(driver.dual().lambda[0] == doctest::Approx(-2.0).epsilon(1e-2));
  }
}

TEST_CASE("driver: zero objective and zero constraints reach a fixed point") {
  alm::DriverConfig cfg;
  cfg.alm.eta = vec({1.0});
  alm::Driver driver(1, 1, cfg);
  VectorXd theta = VectorXd::Zero(1);
  auto obj = [](const VectorXd&, const alm::EvalRequest&) {
    alm::ConstrainedEval ev;
    ev.J = 0.0;
    ev.C = VectorXd::Zero(1);
    ev.has_parts = true;
    ev.gradJ = VectorXd::Zero(1);
    ev.gradC = {VectorXd::Zero(1)};
    return ev;
  };
  // after the first open-gate epoch the state must stop moving entirely
  driver.step_epoch(theta, obj);
  driver.step_epoch(theta, obj);
  const VectorXd lam = driver.dual().lambda, mu = driver.dual().mu;
  const double th = theta[0];
  driver.step_epoch(theta, obj);
  CHECK(theta[0] == th);
  CHECK(driver.dual().lambda == lam);
  CHECK(driver.dual().mu == mu);
}

TEST_CASE("all four strategies recover the least-norm solution of A theta = b") {
  // min 1/2 ||theta||^2 s.t. A theta = b has the closed form A^T (A A^T)^-1 b
  Rng rng(2024);
  Eigen::MatrixXd A(3, 5);
  VectorXd b(3);
  for (int i = 0; i < 3; ++i) {
    b[i] = rng.normal();
    for (int j = 0; j < 5; ++j) A(i, j) = rng.normal();
  }
  const VectorXd theta_star = A.transpose() * (A * A.transpose()).ldlt().solve(b);

  auto obj = [&](const VectorXd& th, const alm::EvalRequest&) {
    alm::ConstrainedEval ev;
    ev.J = 0.5 * th.squaredNorm();
    ev.C = A * th - b;
    ev.has_parts = true;
    ev.gradJ = th;
    ev.gradC.clear();
    for (int i = 0; i < 3; ++i) ev.gradC.push_back(A.row(i).transpose());
    return ev;
  };

  for (auto strategy : {alm::PenaltyStrategy::Monotonic, alm::PenaltyStrategy::Conditional,
                        alm::PenaltyStrategy::Adaptive, alm::PenaltyStrategy::RmsProp}) {
    alm::DriverConfig cfg;
    cfg.alm.strategy = strategy;
    cfg.alm.eta = VectorXd::Ones(3);
    cfg.primal = alm::PrimalKind::Lbfgs;
    alm::Driver driver(5, 3, cfg);
    VectorXd theta = VectorXd::Zero(5);
    double err = 1.0;
    for (int e = 0; e < 3000 && err > 1e-7; ++e) {
      driver.step_epoch(theta, obj);
      err = (theta - theta_star).lpNorm<Eigen::Infinity>();
    }
    CAPTURE(static_cast<int>(strategy));
    CHECK(err < 1e-6);
  }
}
