#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "palm/opt/adam.hpp"
#include "palm/opt/lbfgs.hpp"

namespace palm::alm {

// How the penalty parameters evolve across epochs.
//   Monotonic   - one shared penalty, multiplied by beta every epoch up to a cap.
//   Conditional - one shared penalty, grown only when the constraint norm
//                 failed to decrease; multipliers update otherwise.
//   Adaptive    - one penalty per constraint, raised to eta/sqrt(vbar+eps)
//                 under a max safeguard, gated on loss convergence.
//   RmsProp     - like Adaptive but without the max safeguard; the penalty
//                 follows the inverse RMS history directly.
enum class PenaltyStrategy { Monotonic, Conditional, Adaptive, RmsProp };

enum class DistanceFn { Quadratic, Abs };

inline double phi_value(DistanceFn phi, double r) { return phi == DistanceFn::Quadratic ? r * r : std::abs(r); }
inline double phi_deriv(DistanceFn phi, double r) {
  return phi == DistanceFn::Quadratic ? 2.0 * r : (r < 0.0 ? -1.0 : 1.0);
}

struct AlmConfig {
  PenaltyStrategy strategy = PenaltyStrategy::Adaptive;
  Eigen::VectorXd eta;      // per-constraint penalty scaling factors
  double zeta = 0.99;       // smoothing of the squared-constraint average
  double omega = 0.999;     // convergence fraction for the dual-update gate
  double epsilon = 1e-16;   // stability constant
  double beta = 2.0;        // growth factor (Monotonic/Conditional)
  double mu_max = 1e4;      // penalty cap (Monotonic/Conditional)
};

// Multiplier/penalty bookkeeping mutated once per epoch.
struct DualState {
  Eigen::VectorXd lambda;   // Lagrange multipliers
  Eigen::VectorXd mu;       // penalty parameters
  Eigen::VectorXd vbar;     // moving average of squared constraints
  double prev_loss = std::numeric_limits<double>::infinity();
  double prev_cnorm = std::numeric_limits<double>::infinity();

  static DualState init(Eigen::Index n) {
    DualState s;
    s.lambda = Eigen::VectorXd::Ones(n);
    s.mu = Eigen::VectorXd::Ones(n);
    s.vbar = Eigen::VectorXd::Zero(n);
    return s;
  }
};

// L = J + lambda . C + 1/2 sum_i mu_i C_i^2
double assemble_loss(double J, const Eigen::VectorXd& C, const Eigen::VectorXd& lambda,
                     const Eigen::VectorXd& mu);

// Mean of phi(r) over the batch; throws on an empty batch.
double aggregate_expectation(std::span<const double> residuals, DistanceFn phi);

// [phi(r_1), ..., phi(r_N)]
Eigen::VectorXd aggregate_pointwise(std::span<const double> residuals, DistanceFn phi);

// lambda <- lambda + mu . C
void dual_update(DualState& s, const Eigen::VectorXd& C);

// Per-epoch strategy updates, applied after the primal step with C (and the
// augmented loss, where gated) evaluated at the new iterate.
void monotonic_epoch(DualState& s, const Eigen::VectorXd& C, const AlmConfig& cfg);
void conditional_epoch(DualState& s, const Eigen::VectorXd& C, const AlmConfig& cfg);
void adaptive_epoch(DualState& s, const Eigen::VectorXd& C, double loss, const AlmConfig& cfg);
void rmsprop_epoch(DualState& s, const Eigen::VectorXd& C, double loss, const AlmConfig& cfg);

void strategy_epoch(DualState& s, const Eigen::VectorXd& C, double loss, const AlmConfig& cfg);

// ---------------------------------------------------------------------------
// Generic constrained training driver
// ---------------------------------------------------------------------------

// One evaluation of a constrained objective at theta. Providers either expose
// the decomposed gradients (gradJ and one gradient per constraint), letting
// the driver reassemble d L/d theta after multiplier updates for free, or a
// combined gradL valid for the multipliers passed in the request.
struct ConstrainedEval {
  double J = 0.0;
  Eigen::VectorXd C;
  bool has_parts = false;
  Eigen::VectorXd gradJ;
  std::vector<Eigen::VectorXd> gradC;
  Eigen::VectorXd gradL;
};

struct EvalRequest {
  bool want_grad = true;
  const Eigen::VectorXd* lambda = nullptr;  // set when gradL is requested
  const Eigen::VectorXd* mu = nullptr;
};

using ConstrainedObjective =
    std::function<ConstrainedEval(const Eigen::VectorXd& theta, const EvalRequest&)>;

enum class PrimalKind { Adam, Lbfgs };

struct DriverConfig {
  AlmConfig alm;
  PrimalKind primal = PrimalKind::Lbfgs;
  opt::AdamConfig adam;
  opt::LbfgsConfig lbfgs;
};

struct EpochOutcome {
  double J = 0.0;
  double L = 0.0;
  Eigen::VectorXd C;
  bool diverged = false;
  bool dual_updated = false;  // strategy branch that touches lambda ran
  int evals = 0;
  double alpha = 0.0;
};

// Runs the epoch loop of the augmented Lagrangian method on a generic
// constrained objective: primal step on L with frozen multipliers, fresh
// (J, C, L) at the new iterate, then the strategy's dual/penalty update.
class Driver {
 public:
  Driver(Eigen::Index n_params, Eigen::Index n_constraints, DriverConfig cfg);

  EpochOutcome step_epoch(Eigen::VectorXd& theta, const ConstrainedObjective& obj);

  const DualState& dual() const { return dual_; }
  DualState& dual() { return dual_; }
  const DriverConfig& config() const { return cfg_; }
  double lr() const { return adam_ ? adam_->lr() : 0.0; }
  void set_lr(double lr) { if (adam_) adam_->set_lr(lr); }
  // Switch the primal optimizer mid-run (fresh optimizer state).
  void set_primal(PrimalKind kind);
  long lbfgs_wolfe_failures() const { return lbfgs_ ? lbfgs_->wolfe_failures() : 0; }

  // Invalidates the cached evaluation (call when the objective itself
  // changes, e.g. after resampling).
  void invalidate_cache() {
    cache_.reset();
    cache_grad_stale_ = true;
  }

 private:
  Eigen::VectorXd assembled_grad(const ConstrainedEval& ev) const;
  ConstrainedEval evaluate(const Eigen::VectorXd& theta, const ConstrainedObjective& obj,
                           bool want_grad) const;

  DriverConfig cfg_;
  DualState dual_;
  std::optional<opt::Adam> adam_;
  std::optional<opt::Lbfgs> lbfgs_;
  Eigen::Index n_params_;

  // evaluation at the current iterate, if any
  mutable std::optional<ConstrainedEval> cache_;
  mutable bool cache_grad_stale_ = true;  // pointwise gradL assembled for old multipliers
};

}  // namespace palm::alm
