#pragma once

// Small problems and brute-force oracles shared by the unit tests and the
// acceptance runner.

#include "regpath/baselines.hpp"
#include "regpath/core.hpp"
#include "regpath/metrics.hpp"
#include "regpath/mpg.hpp"
#include "regpath/problems.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

namespace regpath::testing {

// f1 = ½ Σ_i s_i (θ_i - c_i)². One "sample".
class QuadraticProblem final : public BiObjectiveProblem {
 public:
  QuadraticProblem(Eigen::VectorXd center, double l1_weight)
      : QuadraticProblem(center, Eigen::VectorXd::Ones(center.size()), l1_weight) {}
  QuadraticProblem(Eigen::VectorXd center, Eigen::VectorXd scales, double l1_weight)
      : BiObjectiveProblem(center.size(), l1_weight), c_(std::move(center)), s_(std::move(scales)) {}

  Index num_samples() const override { return 1; }
  double eval_f1(const ParamVector& theta, const BatchSpec&) const override {
    return 0.5 * (s_.array() * (theta - c_).array().square()).sum();
  }
  double f1_and_grad(const ParamVector& theta, const BatchSpec& b, ParamVector& grad) const override {
    grad = s_.array() * (theta - c_).array();
    return eval_f1(theta, b);
  }

 private:
  Eigen::VectorXd c_, s_;
};

// Objective of the direction subproblem.
inline double subproblem_objective(const Eigen::VectorXd& g, const Eigen::VectorXd& theta, double w,
                                   double h, const Eigen::VectorXd& d) {
  const double a = g.dot(d);
  const double b = w * ((theta + d).lpNorm<1>() - theta.lpNorm<1>());
  return std::max(a, b) + d.squaredNorm() / (2 * h);
}

// Coarse-to-fine grid search over 2-D directions. The objective is strongly
// convex, so each level only has to bracket the previous minimizer.
inline Eigen::Vector2d brute_force_direction_2d(const Eigen::Vector2d& g, const Eigen::Vector2d& theta,
                                                double w, double h) {
  // Any minimizer satisfies ‖d‖ <= h·max(‖g‖, w√2).
  double radius = h * std::max(g.norm(), w * std::sqrt(2.0)) * 1.05 + 1e-12;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  const int n = 200;
  for (int level = 0; level < 8; ++level) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector2d arg = center;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        Eigen::Vector2d d(center(0) - radius + 2 * radius * i / n,
                          center(1) - radius + 2 * radius * j / n);
        const double v = subproblem_objective(g, theta, w, h, d);
        if (v < best) {
          best = v;
          arg = d;
        }
      }
    }
    center = arg;
    radius *= 0.1;
  }
  return center;
}

// LASSO regularization path sampled at n equidistant penalties in
// [0, ‖Aᵀb‖∞], each solved to high accuracy with ISTA. The largest penalty
// gives θ = 0.
inline FrontArchive ista_front(const LassoProblem& problem, int n_penalties) {
  const double lambda_max = (problem.A().transpose() * problem.b()).lpNorm<Eigen::Infinity>();
  FrontArchive front;
  for (int k = 0; k < n_penalties; ++k) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(problem.dim());
    if (k + 1 < n_penalties) {
      const double penalty = lambda_max * k / (n_penalties - 1);
      theta = ista_oracle(problem.A(), problem.b(), penalty).theta;
    }
    front.append(evaluate(problem, theta), Direction::ws);
  }
  return front;
}

}  // namespace regpath::testing
