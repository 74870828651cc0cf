#pragma once

#include "regpath/adam.hpp"
#include "regpath/core.hpp"
#include "regpath/mpg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regpath {

// Runs `iters` Adam steps on λ·F1 + (1-λ)·F2 using ∇f1 and the ℓ¹
// subgradient w·sign(θ) (0 at 0). A fresh optimizer state per call.
ParamVector ws_solve(const BiObjectiveProblem& problem, double lambda1, const ParamVector& theta0,
                     int iters, const AdamConfig& adam, BatchSampler& sampler,
                     Budget* budget = nullptr);

struct WsConfig {
  int n_lambda = 44;
  int iters_per_lambda = 200;
  AdamConfig adam;
  std::uint64_t seed = 0;
  bool warm_start = false;
  // Uniform init scale for the per-λ fresh starts.
  double init_scale = 0.1;
  std::optional<Index> batch_size;

  void validate() const;
};

// Equidistant weights on [0,1], endpoints included; {0} when n = 1.
std::vector<double> ws_lambda_grid(int n_lambda);

struct WsResult {
  FrontArchive archive;
  Trace trace;
  std::vector<std::string> failures;
};

// One point per weight. Fresh starts use seed + k for the k-th weight.
WsResult ws_sweep(const BiObjectiveProblem& problem, const WsConfig& cfg);

struct IstaResult {
  Eigen::VectorXd theta;
  int iterations = 0;
};

// Minimizes ½‖Aθ - b‖² + penalty·‖θ‖₁ by θ ← S(θ - step·Aᵀ(Aθ - b), step·penalty)
// until ‖Δθ‖ <= tol. A non-positive step selects 1/‖AᵀA‖₂.
IstaResult ista_oracle(const RowMatrix& A, const Eigen::VectorXd& b, double penalty,
                       double step = 0.0, double tol = 1e-12, int max_iter = 1'000'000);

// Worst violation of the LASSO optimality conditions:
// |Aᵀ(Aθ-b)_i + penalty·sign(θ_i)| on the support, max(0, |Aᵀ(Aθ-b)_i| - penalty) off it.
double lasso_kkt_residual(const RowMatrix& A, const Eigen::VectorXd& b, double penalty,
                          const Eigen::VectorXd& theta);

}  // namespace regpath
