#pragma once

#include <Eigen/Core>

namespace palm::opt {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction.
class Adam {
 public:
  Adam(std::size_t n, AdamConfig cfg = {}) : cfg_(cfg), m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) {}

  double lr() const { return cfg_.lr; }
  void set_lr(double lr) { cfg_.lr = lr; }
  long step_count() const { return t_; }

  // Throws std::domain_error on a non-finite gradient (epoch aborted with a
  // diagnostic upstream).
  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad);

 private:
  AdamConfig cfg_;
  Eigen::VectorXd m_, v_;
  long t_ = 0;
};

}  // namespace palm::opt
