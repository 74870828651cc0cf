#pragma once

#include "regpath/core.hpp"
#include "regpath/data.hpp"
#include "regpath/nn.hpp"

#include <cstdint>
#include <optional>

namespace regpath {

// f1(θ) = ½‖Aθ - b‖². A minibatch uses the selected rows rescaled by
// N/|batch| so that it is an unbiased estimate of the full objective.
class LassoProblem final : public BiObjectiveProblem {
 public:
  // l1_weight defaults to 1/n.
  LassoProblem(RowMatrix A, Eigen::VectorXd b, std::optional<double> l1_weight = std::nullopt);

  const RowMatrix& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

  Index num_samples() const override { return A_.rows(); }
  double eval_f1(const ParamVector& theta, const BatchSpec& batch) const override;
  double f1_and_grad(const ParamVector& theta, const BatchSpec& batch,
                     ParamVector& grad) const override;

  // Largest eigenvalue of AᵀA (power iteration).
  double lipschitz() const;

 private:
  RowMatrix A_;
  Eigen::VectorXd b_;
};

struct LassoInstanceSpec {
  Index rows = 20;
  Index cols = 10;
  double noise = 0.01;
  // Fraction of nonzero entries in the planted θ.
  double density = 0.3;
  std::uint64_t seed = 0;
};

struct LassoInstance {
  RowMatrix A;
  Eigen::VectorXd b;
  Eigen::VectorXd theta_true;
};

// A with i.i.d. standard normal entries; b = A·θ_sparse + noise·N(0, 1).
LassoInstance make_random_lasso(const LassoInstanceSpec& spec);

// Largest eigenvalue of AᵀA by power iteration.
double spectral_norm_sq(const RowMatrix& A, int iters = 500);

// Cross-entropy of an MLP on a training set, with optional held-out set.
class MlpProblem final : public BiObjectiveProblem {
 public:
  MlpProblem(MlpArchitecture arch, Dataset train, std::optional<Dataset> test = std::nullopt);

  const MlpArchitecture& arch() const { return arch_; }
  const Dataset& train() const { return train_; }
  const std::optional<Dataset>& test() const { return test_; }

  Index num_samples() const override { return train_.rows(); }
  double eval_f1(const ParamVector& theta, const BatchSpec& batch) const override;
  double f1_and_grad(const ParamVector& theta, const BatchSpec& batch,
                     ParamVector& grad) const override;
  HeldOutMetrics held_out_metrics(const ParamVector& theta) const override;

 private:
  MlpArchitecture arch_;
  Dataset train_;
  std::optional<Dataset> test_;
};

}  // namespace regpath
