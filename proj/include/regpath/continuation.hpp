#pragma once

#include "regpath/adam.hpp"
#include "regpath/core.hpp"
#include "regpath/mpg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regpath {

enum class LegDirection : std::uint8_t { toward_loss, toward_sparsity, both };
enum class GradientPredictor : std::uint8_t { adam, gd };

struct ContinuationConfig {
  int n_cont = 40;  // total points, including the initial one
  int predictor_iters = 7;
  int corrector_iters = 20;
  int init_iters = 500;
  double eta = 0.1;  // corrector step h and shrink step
  LegDirection direction = LegDirection::both;
  AdamConfig adam;
  std::optional<double> slope_stop;
  std::uint64_t seed = 0;

  // Minibatch size; nullopt means full-batch (deterministic) mode.
  std::optional<Index> batch_size;
  GradientPredictor gradient_predictor = GradientPredictor::adam;
  // Shrink predictor repetitions and ℓ¹ weight; default to predictor_iters
  // and the problem's l1 weight.
  std::optional<int> shrink_iters;
  std::optional<double> shrink_weight;
  // Share of the n_cont - 1 continuation points given to the sparsity leg
  // when direction is both.
  double sparsity_share = 0.5;
  // Corrector stopping tolerance on ‖d‖ (deterministic mode only).
  std::optional<double> corrector_tol;
  double dual_tol = 1e-12;

  void validate() const;
};

// Adam steps on f1 only; a fresh optimizer state per call.
ParamVector predictor_gradient(const ParamVector& theta, const BiObjectiveProblem& problem,
                               int iters, const AdamConfig& adam, BatchSampler& sampler,
                               Budget* budget = nullptr);

// Plain gradient steps θ ← θ - η∇f1.
ParamVector predictor_gradient_descent(const ParamVector& theta,
                                       const BiObjectiveProblem& problem, int iters, double eta,
                                       BatchSampler& sampler, Budget* budget = nullptr);

// iters applications of prox_{eta·weight·‖·‖₁}.
ParamVector predictor_shrink(const ParamVector& theta, double eta, int iters, double weight,
                             Budget* budget = nullptr);

struct ContinuationResult {
  FrontArchive archive;
  Trace trace;
  std::vector<std::string> notes;  // early stops and aborted legs
};

ContinuationResult continuation_run(const BiObjectiveProblem& problem,
                                    const ParamVector& theta_init, const ContinuationConfig& cfg);

// Mutually non-dominated subset by (f1_train, g2), original order kept.
FrontArchive front_filter_nondominated(const FrontArchive& archive);

// ΔF1/ΔF2 of consecutive points; +∞ marks ΔF2 = 0.
std::vector<double> front_slope(const FrontArchive& archive);
double segment_slope(const ParetoPoint& from, const ParetoPoint& to);

}  // namespace regpath
