#include "regpath/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace regpath {

LassoProblem::LassoProblem(RowMatrix A, Eigen::VectorXd b, std::optional<double> l1_weight)
    : BiObjectiveProblem(A.cols(), l1_weight.value_or(1.0 / static_cast<double>(A.cols()))),
      A_(std::move(A)),
      b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw DimensionError("LassoProblem: rows of A must match size of b");
}

double LassoProblem::eval_f1(const ParamVector& theta, const BatchSpec& batch) const {
  require_dim(theta, dim(), "LassoProblem::eval_f1");
  if (batch.is_full()) return 0.5 * (A_ * theta - b_).squaredNorm();
  double sq = 0.0;
  for (Index i : batch.rows()) {
    const double r = A_.row(i).dot(theta) - b_[i];
    sq += r * r;
  }
  const double scale = static_cast<double>(A_.rows()) / static_cast<double>(batch.rows().size());
  return 0.5 * scale * sq;
}

double LassoProblem::f1_and_grad(const ParamVector& theta, const BatchSpec& batch,
                                 ParamVector& grad) const {
  require_dim(theta, dim(), "LassoProblem::f1_and_grad");
  if (batch.is_full()) {
    const Eigen::VectorXd r = A_ * theta - b_;
    grad.noalias() = A_.transpose() * r;
    return 0.5 * r.squaredNorm();
  }
  grad.setZero(dim());
  double sq = 0.0;
  for (Index i : batch.rows()) {
    const double r = A_.row(i).dot(theta) - b_[i];
    sq += r * r;
    grad += r * A_.row(i).transpose();
  }
  const double scale = static_cast<double>(A_.rows()) / static_cast<double>(batch.rows().size());
  grad *= scale;
  return 0.5 * scale * sq;
}

double LassoProblem::lipschitz() const { return spectral_norm_sq(A_); }

double spectral_norm_sq(const RowMatrix& A, int iters) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(A.cols()).normalized();
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Eigen::VectorXd w = A.transpose() * (A * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    lambda = v.dot(w);
    v = w / norm;
  }
  // Rayleigh quotient of the final iterate.
  return std::max(lambda, v.dot(A.transpose() * (A * v)));
}

LassoInstance make_random_lasso(const LassoInstanceSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("make_random_lasso: bad shape");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LassoInstance inst;
  inst.A.resize(spec.rows, spec.cols);
  for (Index i = 0; i < spec.rows; ++i)
    for (Index j = 0; j < spec.cols; ++j) inst.A(i, j) = normal(rng);

  const auto k = std::clamp<Index>(
      static_cast<Index>(std::ceil(spec.density * static_cast<double>(spec.cols))), 1, spec.cols);
  std::vector<Index> cols(static_cast<std::size_t>(spec.cols));
  std::iota(cols.begin(), cols.end(), Index{0});
  std::shuffle(cols.begin(), cols.end(), rng);
  inst.theta_true = Eigen::VectorXd::Zero(spec.cols);
  for (Index j = 0; j < k; ++j) inst.theta_true[cols[static_cast<std::size_t>(j)]] = normal(rng);

  inst.b = inst.A * inst.theta_true;
  for (Index i = 0; i < spec.rows; ++i) inst.b[i] += spec.noise * normal(rng);
  return inst;
}

MlpProblem::MlpProblem(MlpArchitecture arch, Dataset train, std::optional<Dataset> test)
    : BiObjectiveProblem(mlp_param_count(arch), 1.0 / static_cast<double>(mlp_param_count(arch))),
      arch_(std::move(arch)),
      train_(std::move(train)),
      test_(std::move(test)) {
  if (train_.dim() != arch_.input_dim())
    throw DimensionError("MlpProblem: training features do not match the input layer");
  if (train_.rows() == 0) throw std::invalid_argument("MlpProblem: empty training set");
  if (test_ && test_->dim() != arch_.input_dim())
    throw DimensionError("MlpProblem: test features do not match the input layer");
}

double MlpProblem::eval_f1(const ParamVector& theta, const BatchSpec& batch) const {
  if (batch.is_full()) return mlp_loss(arch_, theta, train_.features, train_.labels);
  const Batch b = gather(train_, batch.rows());
  return mlp_loss(arch_, theta, b.inputs, b.labels);
}

double MlpProblem::f1_and_grad(const ParamVector& theta, const BatchSpec& batch,
                               ParamVector& grad) const {
  if (batch.is_full()) return loss_and_grad(arch_, theta, train_.features, train_.labels, grad);
  const Batch b = gather(train_, batch.rows());
  return loss_and_grad(arch_, theta, b.inputs, b.labels, grad);
}

HeldOutMetrics MlpProblem::held_out_metrics(const ParamVector& theta) const {
  HeldOutMetrics m;
  m.acc_train = accuracy(arch_, theta, train_.features, train_.labels);
  if (test_ && test_->rows() > 0) {
    m.f1_test = mlp_loss(arch_, theta, test_->features, test_->labels);
    m.acc_test = accuracy(arch_, theta, test_->features, test_->labels);
  }
  return m;
}

}  // namespace regpath
