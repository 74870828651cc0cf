#pragma once

#include "regpath/core.hpp"

namespace regpath {

// prox of step·weight·‖·‖₁.
struct ProxSpec {
  double weight = 1.0;
  double step = 0.0;
};

// Coordinatewise sign(v)·max(|v| - c, 0). Entries with |v_i| = c map to 0.
ParamVector soft_threshold(const ParamVector& v, double c);
void soft_threshold_inplace(ParamVector& v, double c);

ParamVector prox_scaled_l1(const ParamVector& theta, const ProxSpec& spec);

}  // namespace regpath
