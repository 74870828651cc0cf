#pragma once

#include "regpath/core.hpp"

namespace regpath {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// Adam with bias-corrected moments. State starts at zero on construction.
class Adam {
 public:
  Adam(Index n, AdamConfig cfg);

  // θ ← θ - lr·m̂/(√v̂ + ε)
  void step(ParamVector& theta, const ParamVector& grad);
  long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  ParamVector m_;
  ParamVector v_;
  long t_ = 0;
};

}  // namespace regpath
