#include "regpath/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace regpath {

void soft_threshold_inplace(ParamVector& v, double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw std::invalid_argument("soft_threshold: threshold must be finite and >= 0");
  if (c == 0.0) return;
  for (Index i = 0; i < v.size(); ++i) {
    const double x = v[i];
    v[i] = x > c ? x - c : (x < -c ? x + c : 0.0);
  }
}

ParamVector soft_threshold(const ParamVector& v, double c) {
  ParamVector out = v;
  soft_threshold_inplace(out, c);
  return out;
}

ParamVector prox_scaled_l1(const ParamVector& theta, const ProxSpec& spec) {
  if (!(spec.weight >= 0.0) || !(spec.step >= 0.0))
    throw std::invalid_argument("prox_scaled_l1: weight and step must be >= 0");
  return soft_threshold(theta, spec.weight * spec.step);
}

}  // namespace regpath
