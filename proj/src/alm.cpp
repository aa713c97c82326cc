#include "palm/alm/alm.hpp"

#include <cmath>
#include <stdexcept>

namespace palm::alm {

double assemble_loss(double J, const Eigen::VectorXd& C, const Eigen::VectorXd& lambda,
                     const Eigen::VectorXd& mu) {
  if (C.size() != lambda.size() || C.size() != mu.size())
    throw std::invalid_argument("assemble_loss: size mismatch");
  return J + lambda.dot(C) + 0.5 * mu.dot(C.cwiseProduct(C));
}

double aggregate_expectation(std::span<const double> residuals, DistanceFn phi) {
  if (residuals.empty()) throw std::invalid_argument("aggregate_expectation: empty batch");
  double s = 0.0;
  for (double r : residuals) s += phi_value(phi, r);
  return s / static_cast<double>(residuals.size());
}

Eigen::VectorXd aggregate_pointwise(std::span<const double> residuals, DistanceFn phi) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(residuals.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = phi_value(phi, residuals[i]);
  return out;
}

void dual_update(DualState& s, const Eigen::VectorXd& C) {
  s.lambda += s.mu.cwiseProduct(C);
}

void monotonic_epoch(DualState& s, const Eigen::VectorXd& C, const AlmConfig& cfg) {
  dual_update(s, C);
  const double mu_new = std::min(cfg.beta * s.mu[0], cfg.mu_max);
  s.mu.setConstant(mu_new);
}

void conditional_epoch(DualState& s, const Eigen::VectorXd& C, const AlmConfig& cfg) {
  const double cnorm = C.norm();
  if (cnorm < s.prev_cnorm) {
    dual_update(s, C);
  } else {
    const double mu_new = std::min(cfg.beta * s.mu[0], cfg.mu_max);
    s.mu.setConstant(mu_new);
  }
  s.prev_cnorm = cnorm;
}

namespace {

// The dual update fires once the loss has stopped improving by a relative
// margin of (1 - omega). For a negative previous loss the factor flips so the
// margin stays proportional to |L| instead of inverting the test.
bool gate_open(double loss, double prev, double omega) {
  const double threshold = prev >= 0.0 ? omega * prev : (2.0 - omega) * prev;
  return loss >= threshold;
}

}  // namespace

void adaptive_epoch(DualState& s, const Eigen::VectorXd& C, double loss, const AlmConfig& cfg) {
  s.vbar = cfg.zeta * s.vbar + (1.0 - cfg.zeta) * C.cwiseProduct(C);
  if (gate_open(loss, s.prev_loss, cfg.omega)) {
    dual_update(s, C);
    s.mu = s.mu.cwiseMax(
        (cfg.eta.array() / (s.vbar.array() + cfg.epsilon).sqrt()).matrix());
  }
  s.prev_loss = loss;
}

void rmsprop_epoch(DualState& s, const Eigen::VectorXd& C, double loss, const AlmConfig& cfg) {
  s.vbar = cfg.zeta * s.vbar + (1.0 - cfg.zeta) * C.cwiseProduct(C);
  if (gate_open(loss, s.prev_loss, cfg.omega)) {
    s.mu = (cfg.eta.array() / (s.vbar.array() + cfg.epsilon).sqrt()).matrix();
    dual_update(s, C);
  }
  s.prev_loss = loss;
}

void strategy_epoch(DualState& s, const Eigen::VectorXd& C, double loss, const AlmConfig& cfg) {
  switch (cfg.strategy) {
    case PenaltyStrategy::Monotonic: monotonic_epoch(s, C, cfg); return;
    case PenaltyStrategy::Conditional: conditional_epoch(s, C, cfg); return;
    case PenaltyStrategy::Adaptive: adaptive_epoch(s, C, loss, cfg); return;
    case PenaltyStrategy::RmsProp: rmsprop_epoch(s, C, loss, cfg); return;
  }
}

Driver::Driver(Eigen::Index n_params, Eigen::Index n_constraints, DriverConfig cfg)
    : cfg_(std::move(cfg)), dual_(DualState::init(n_constraints)), n_params_(n_params) {
  if (cfg_.alm.eta.size() == 0) cfg_.alm.eta = Eigen::VectorXd::Ones(n_constraints);
  if (cfg_.alm.eta.size() != n_constraints)
    throw std::invalid_argument("alm: eta size does not match constraint count");
  set_primal(cfg_.primal);
}

void Driver::set_primal(PrimalKind kind) {
  cfg_.primal = kind;
  adam_.reset();
  lbfgs_.reset();
  if (kind == PrimalKind::Adam)
    adam_.emplace(static_cast<std::size_t>(n_params_), cfg_.adam);
  else
    lbfgs_.emplace(cfg_.lbfgs);
}

Eigen::VectorXd Driver::assembled_grad(const ConstrainedEval& ev) const {
  Eigen::VectorXd g = ev.gradJ;
  for (Eigen::Index i = 0; i < ev.C.size(); ++i)
    g += (dual_.lambda[i] + dual_.mu[i] * ev.C[i]) * ev.gradC[static_cast<std::size_t>(i)];
  return g;
}

ConstrainedEval Driver::evaluate(const Eigen::VectorXd& theta, const ConstrainedObjective& obj,
                                 bool want_grad) const {
  EvalRequest req;
  req.want_grad = want_grad;
  req.lambda = &dual_.lambda;
  req.mu = &dual_.mu;
  return obj(theta, req);
}

EpochOutcome Driver::step_epoch(Eigen::VectorXd& theta, const ConstrainedObjective& obj) {
  EpochOutcome out;

  // entry evaluation at the current iterate, gradient assembled for the
  // current multipliers
  if (!cache_ || (!cache_->has_parts && cache_grad_stale_)) {
    cache_ = evaluate(theta, obj, true);
    cache_grad_stale_ = false;
  }

  if (cfg_.primal == PrimalKind::Adam) {
    const Eigen::VectorXd g = cache_->has_parts ? assembled_grad(*cache_) : cache_->gradL;
    adam_->step(theta, g);
    out.evals = 1;
    cache_ = evaluate(theta, obj, true);
    cache_grad_stale_ = false;
  } else {
    opt::EvalPoint entry;
    entry.f = assemble_loss(cache_->J, cache_->C, dual_.lambda, dual_.mu);
    entry.g = cache_->has_parts ? assembled_grad(*cache_) : cache_->gradL;
    entry.id = 0;

    std::vector<ConstrainedEval> probes;
    long next_id = 1;
    auto probe = [&](const Eigen::VectorXd& th) {
      ConstrainedEval ev = evaluate(th, obj, true);
      opt::EvalPoint p;
      p.f = assemble_loss(ev.J, ev.C, dual_.lambda, dual_.mu);
      p.g = ev.has_parts ? assembled_grad(ev) : ev.gradL;
      p.id = next_id++;
      probes.push_back(std::move(ev));
      return p;
    };
    const opt::StepInfo info = lbfgs_->step(theta, entry, probe);
    out.evals = info.evals;
    out.alpha = info.alpha;
    if (info.accepted.id > 0) {
      cache_ = std::move(probes[static_cast<std::size_t>(info.accepted.id - 1)]);
      cache_grad_stale_ = false;
    }
    // id 0: no movement; the entry cache still describes theta
  }

  out.J = cache_->J;
  out.C = cache_->C;
  out.L = assemble_loss(cache_->J, cache_->C, dual_.lambda, dual_.mu);
  if (!std::isfinite(out.L)) {
    out.diverged = true;
    return out;
  }

  const Eigen::VectorXd lambda_before = dual_.lambda;
  strategy_epoch(dual_, out.C, out.L, cfg_.alm);
  out.dual_updated = (dual_.lambda.array() != lambda_before.array()).any();
  // multipliers moved: a combined gradient cached for the old ones is stale
  if (out.dual_updated) cache_grad_stale_ = true;
  return out;
}

}  // namespace palm::alm
