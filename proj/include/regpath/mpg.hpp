#pragma once

#include "regpath/core.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace regpath {

struct SolverConfig {
  double step_h = 0.1;
  int max_iter = 1000;
  // Stop once ‖d‖ <= tol. nullopt resolves to 1e-6·√n for deterministic
  // sampling; stochastic sampling always runs max_iter iterations.
  std::optional<double> direction_tol;
  double dual_tol = 1e-12;
  // Lipschitz constant of ∇f1; only used to warn when step_h > 2/L.
  std::optional<double> lipschitz_hint;

  void validate() const;
};

// Solution of min_d max{∇f1ᵀd, g2(θ+d) - g2(θ)} + ‖d‖²/(2h).
struct DirectionResult {
  ParamVector d;
  double lambda_star = 0.0;  // dual weight on f1
  double psi = 0.0;
  double model_decrease = 0.0;  // psi + ‖d‖²/(2h)
  int dual_iterations = 0;
  int prox_evals = 0;
};

DirectionResult direction_subproblem(const ParamVector& grad1, const ParamVector& theta,
                                     const BiObjectiveProblem& problem, const SolverConfig& cfg);

struct TraceRow {
  std::int64_t iter = 0;
  double f1 = 0.0;  // on the batch used for the step
  double f2 = 0.0;
  std::optional<double> norm_d;
  std::optional<double> lambda_star;
};

struct Trace {
  std::vector<TraceRow> rows;
  Budget budget;
};

void write_trace_csv(std::ostream& os, const Trace& trace);

struct MpgResult {
  ParamVector theta;
  int iterations = 0;
  bool converged = false;
  Trace trace;
};

// Iterates θ ← θ + d(θ) from theta0. Records (F1, F2, ‖d‖, λ*) at each
// iterate before the update. Throws DivergenceError if F1 grows beyond
// 1e6 times its starting value.
MpgResult mpg_solve(const BiObjectiveProblem& problem, const ParamVector& theta0,
                    const SolverConfig& cfg, BatchSampler& sampler);

// Distance from 0 to λ∇f1(θ) + (1-λ)∂g2(θ), minimized over λ ∈ [0,1].
double criticality_residual(const BiObjectiveProblem& problem, const ParamVector& theta);
double criticality_residual(const ParamVector& grad1, const ParamVector& theta, double l1_weight);

}  // namespace regpath
