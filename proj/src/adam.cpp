#include "palm/opt/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace palm::opt {

void Adam::step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad) {
  if (!grad.allFinite()) throw std::domain_error("adam: non-finite gradient");
  ++t_;
  m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * grad;
  v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  theta.array() -= cfg_.lr * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + cfg_.eps);
}

}  // namespace palm::opt
