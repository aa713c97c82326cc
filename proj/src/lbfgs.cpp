#include "palm/opt/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace palm::opt {

namespace {

// Minimiser of the cubic matching (a, fa, ga) and (b, fb, gb); falls back to
// bisection when the interpolant is degenerate or lands outside the bracket.
double cubic_min(double a, double fa, double ga, double b, double fb, double gb) {
  const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - ga * gb;
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    double t = b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double pad = 0.1 * (hi - lo);
    if (std::isfinite(t) && t > lo + pad && t < hi - pad) return t;
  }
  return 0.5 * (a + b);
}

}  // namespace

Eigen::VectorXd Lbfgs::direction(const Eigen::VectorXd& g) const {
  Eigen::VectorXd q = g;
  if (pairs_.empty()) return -q;
  std::vector<double> alpha(pairs_.size());
  for (std::size_t i = pairs_.size(); i-- > 0;) {
    alpha[i] = pairs_[i].rho * pairs_[i].s.dot(q);
    q -= alpha[i] * pairs_[i].y;
  }
  const Pair& last = pairs_.back();
  q *= last.s.dot(last.y) / last.y.dot(last.y);
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const double beta = pairs_[i].rho * pairs_[i].y.dot(q);
    q += (alpha[i] - beta) * pairs_[i].s;
  }
  return -q;
}

StepInfo Lbfgs::step(Eigen::VectorXd& theta, const EvalPoint& entry, const Objective& obj) {
  StepInfo info;
  info.accepted = entry;
  if (entry.g.lpNorm<Eigen::Infinity>() <= 1e-14) {
    info.converged = true;
    return info;
  }

  Eigen::VectorXd d = direction(entry.g);
  double dphi0 = d.dot(entry.g);
  if (!(dphi0 < 0.0)) {
    // stale curvature information; fall back to steepest descent
    pairs_.clear();
    d = -entry.g;
    dphi0 = d.dot(entry.g);
  }
  const double phi0 = entry.f;
  const double alpha0 = (iter_ == 0) ? std::min(1.0, 1.0 / entry.g.lpNorm<1>()) : 1.0;
  ++iter_;

  const Eigen::VectorXd x0 = theta;
  double best_alpha = 0.0, best_f = phi0;
  EvalPoint best = entry;

  auto eval_at = [&](double a) {
    theta = x0 + a * d;
    EvalPoint p = obj(theta);
    ++info.evals;
    if (p.f < best_f) {
      best_f = p.f;
      best_alpha = a;
      best = p;
    }
    return p;
  };

  const double c1 = cfg_.c1, c2 = cfg_.c2;
  double alpha = alpha0;
  double alpha_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
  EvalPoint pt;
  bool accepted = false;
  double accepted_alpha = 0.0;

  // bracketing phase
  double lo = 0.0, hi = 0.0, f_lo = phi0, g_lo = dphi0, f_hi = 0.0, g_hi = 0.0;
  bool bracketed = false;
  while (info.evals < cfg_.max_line_evals) {
    pt = eval_at(alpha);
    const double dphi = d.dot(pt.g);
    if (pt.f > phi0 + c1 * alpha * dphi0 || (info.evals > 1 && pt.f >= phi_prev)) {
      lo = alpha_prev; f_lo = phi_prev; g_lo = dphi_prev;
      hi = alpha; f_hi = pt.f; g_hi = dphi;
      bracketed = true;
      break;
    }
    if (std::fabs(dphi) <= -c2 * dphi0) {
      accepted = true;
      accepted_alpha = alpha;
      break;
    }
    if (dphi >= 0.0) {
      lo = alpha; f_lo = pt.f; g_lo = dphi;
      hi = alpha_prev; f_hi = phi_prev; g_hi = dphi_prev;
      bracketed = true;
      break;
    }
    alpha_prev = alpha; phi_prev = pt.f; dphi_prev = dphi;
    alpha = std::min(2.0 * alpha, cfg_.alpha_max);
    if (alpha >= cfg_.alpha_max && alpha_prev >= cfg_.alpha_max) break;
  }

  // zoom phase
  while (!accepted && bracketed && info.evals < cfg_.max_line_evals) {
    alpha = cubic_min(lo, f_lo, g_lo, hi, f_hi, g_hi);
    pt = eval_at(alpha);
    const double dphi = d.dot(pt.g);
    if (pt.f > phi0 + c1 * alpha * dphi0 || pt.f >= f_lo) {
      hi = alpha; f_hi = pt.f; g_hi = dphi;
    } else {
      if (std::fabs(dphi) <= -c2 * dphi0) {
        accepted = true;
        accepted_alpha = alpha;
        break;
      }
      if (dphi * (hi - lo) >= 0.0) {
        hi = lo; f_hi = f_lo; g_hi = g_lo;
      }
      lo = alpha; f_lo = pt.f; g_lo = dphi;
    }
    if (std::fabs(hi - lo) < 1e-16 * std::max(1.0, std::fabs(lo))) break;
  }

  if (accepted) {
    info.alpha = accepted_alpha;
    info.accepted = pt;
    theta = x0 + accepted_alpha * d;
  } else {
    // budget exhausted: keep the best point seen
    ++wolfe_failures_;
    info.wolfe_failed = true;
    info.alpha = best_alpha;
    info.accepted = best;
    theta = x0 + best_alpha * d;
    if (best_alpha == 0.0) return info;  // no progress; nothing to store
  }

  Eigen::VectorXd s = theta - x0;
  Eigen::VectorXd y = info.accepted.g - entry.g;
  const double sy = s.dot(y);
  if (sy > 1e-10) {
    pairs_.push_back(Pair{std::move(s), std::move(y), 1.0 / sy});
    if (pairs_.size() > static_cast<std::size_t>(cfg_.history)) pairs_.pop_front();
  } else {
    ++skipped_pairs_;
  }
  return info;
}

}  // namespace palm::opt
