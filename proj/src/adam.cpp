#include "regpath/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace regpath {

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("AdamConfig: lr must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw std::invalid_argument("AdamConfig: beta1 must lie in (0,1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw std::invalid_argument("AdamConfig: beta2 must lie in (0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("AdamConfig: epsilon must be > 0");
}

Adam::Adam(Index n, AdamConfig cfg)
    : cfg_(cfg), m_(ParamVector::Zero(n)), v_(ParamVector::Zero(n)) {
  cfg_.validate();
}

void Adam::step(ParamVector& theta, const ParamVector& grad) {
  require_dim(grad, m_.size(), "Adam::step gradient");
  require_dim(theta, m_.size(), "Adam::step parameters");
  ++t_;
  m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * grad;
  v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  theta.array() -= cfg_.lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + cfg_.epsilon);
  require_finite(theta, "Adam update");
}

}  // namespace regpath
