#pragma once

#include <Eigen/Core>
#include <deque>
#include <functional>

namespace palm::opt {

struct LbfgsConfig {
  int history = 50;
  double c1 = 1e-4;          // sufficient decrease
  double c2 = 0.9;           // strong curvature
  int max_line_evals = 25;
  double alpha_max = 1e10;
};

// One objective evaluation. The id lets callers pair a step's accepted point
// with state they cached when the callback ran.
struct EvalPoint {
  double f = 0.0;
  Eigen::VectorXd g;
  long id = -1;
};

using Objective = std::function<EvalPoint(const Eigen::VectorXd&)>;

struct StepInfo {
  EvalPoint accepted;       // evaluation at the new iterate
  double alpha = 0.0;
  int evals = 0;            // line-search evaluations this step
  bool converged = false;   // zero gradient at entry; theta untouched
  bool wolfe_failed = false;
};

// Limited-memory BFGS with a strong Wolfe line search (two-loop recursion,
// cubic-interpolation zoom). One step = one search direction plus its line
// search. Pairs with non-positive curvature are not stored.
class Lbfgs {
 public:
  explicit Lbfgs(LbfgsConfig cfg = {}) : cfg_(cfg) {}

  StepInfo step(Eigen::VectorXd& theta, const EvalPoint& entry, const Objective& obj);

  void reset_history() { pairs_.clear(); }
  std::size_t history_size() const { return pairs_.size(); }
  long wolfe_failures() const { return wolfe_failures_; }
  long skipped_pairs() const { return skipped_pairs_; }

 private:
  Eigen::VectorXd direction(const Eigen::VectorXd& g) const;

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };

  LbfgsConfig cfg_;
  std::deque<Pair> pairs_;
  long iter_ = 0;
  long wolfe_failures_ = 0;
  long skipped_pairs_ = 0;
};

}  // namespace palm::opt
