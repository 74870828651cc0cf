#include "regpath/baselines.hpp"

#include "regpath/data.hpp"
#include "regpath/prox.hpp"
#include "regpath/problems.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace regpath {

ParamVector ws_solve(const BiObjectiveProblem& problem, double lambda1, const ParamVector& theta0,
                     int iters, const AdamConfig& adam, BatchSampler& sampler, Budget* budget) {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0))
    throw std::invalid_argument("ws_solve: lambda must lie in [0,1]");
  if (iters < 1) throw std::invalid_argument("ws_solve: iters must be >= 1");
  require_dim(theta0, problem.dim(), "ws_solve");
  require_finite(theta0, "ws_solve initial point");

  Adam opt(problem.dim(), adam);
  ParamVector theta = theta0;
  ParamVector grad;
  const double w = (1.0 - lambda1) * problem.l1_weight();
  double f1_start = 0.0;
  for (int k = 0; k < iters; ++k) {
    const BatchSpec batch = sampler.next();
    const double f1 = problem.f1_and_grad(theta, batch, grad);
    require_finite(f1, "ws_solve: objective f1");
    if (budget) {
      budget->gradient_evals += 1;
      budget->samples_touched += batch.size(problem.num_samples());
    }
    if (k == 0) f1_start = f1;
    if (f1 > 1e6 * std::max(std::abs(f1_start), 1e-6)) {
      std::ostringstream os;
      os << "ws_solve: diverged at iteration " << k << " (f1=" << f1 << ")";
      throw DivergenceError(os.str());
    }
    grad = lambda1 * grad + w * theta.cwiseSign();
    opt.step(theta, grad);
  }
  return theta;
}

void WsConfig::validate() const {
  if (n_lambda < 1) throw std::invalid_argument("WsConfig: n_lambda must be >= 1");
  if (iters_per_lambda < 1) throw std::invalid_argument("WsConfig: iters_per_lambda must be >= 1");
  if (!(init_scale >= 0.0)) throw std::invalid_argument("WsConfig: init_scale must be >= 0");
  if (batch_size && *batch_size < 1) throw std::invalid_argument("WsConfig: batch_size must be >= 1");
  adam.validate();
}

std::vector<double> ws_lambda_grid(int n_lambda) {
  if (n_lambda < 1) throw std::invalid_argument("ws_lambda_grid: n_lambda must be >= 1");
  if (n_lambda == 1) return {0.0};
  std::vector<double> out(static_cast<std::size_t>(n_lambda));
  for (int k = 0; k < n_lambda; ++k) out[k] = static_cast<double>(k) / (n_lambda - 1);
  return out;
}

WsResult ws_sweep(const BiObjectiveProblem& problem, const WsConfig& cfg) {
  cfg.validate();
  std::unique_ptr<BatchSampler> sampler;
  if (cfg.batch_size) {
    sampler = std::make_unique<MinibatchSampler>(problem.num_samples(), *cfg.batch_size, cfg.seed);
  } else {
    sampler = std::make_unique<FullBatchSampler>();
  }

  WsResult res;
  const auto grid = ws_lambda_grid(cfg.n_lambda);
  ParamVector prev;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lambda = grid[k];
    const ParamVector theta0 = (cfg.warm_start && prev.size() == problem.dim())
                                   ? prev
                                   : uniform_init(problem.dim(), cfg.init_scale, cfg.seed + k);
    try {
      ParamVector theta =
          ws_solve(problem, lambda, theta0, cfg.iters_per_lambda, cfg.adam, *sampler,
                   &res.trace.budget);
      ParetoPoint p = evaluate(problem, theta);
      p.grad_evals_cum = res.trace.budget.gradient_evals;
      res.trace.rows.push_back(
          {res.trace.budget.gradient_evals, p.f1_train, p.g2, std::nullopt, lambda});
      res.archive.append(std::move(p), Direction::ws);
      prev = std::move(theta);
    } catch (const std::runtime_error& e) {
      std::ostringstream os;
      os << "lambda=" << lambda << ": " << e.what();
      res.failures.push_back(os.str());
    }
  }
  return res;
}

IstaResult ista_oracle(const RowMatrix& A, const Eigen::VectorXd& b, double penalty, double step,
                       double tol, int max_iter) {
  if (A.rows() != b.size()) throw DimensionError("ista_oracle: rows of A must match size of b");
  if (!(penalty >= 0.0)) throw std::invalid_argument("ista_oracle: penalty must be >= 0");
  const double L = spectral_norm_sq(A);
  if (step <= 0.0) {
    step = L > 0.0 ? 1.0 / L : 1.0;
  } else if (L > 0.0 && step > (1.0 + 1e-9) / L) {
    throw std::invalid_argument("ista_oracle: step exceeds 1/||A^T A||");
  }

  IstaResult res;
  res.theta = Eigen::VectorXd::Zero(A.cols());
  Eigen::VectorXd next(A.cols());
  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::VectorXd atb = A.transpose() * b;
  for (int k = 1; k <= max_iter; ++k) {
    next = res.theta - step * (gram * res.theta - atb);
    soft_threshold_inplace(next, step * penalty);
    const double change = (next - res.theta).norm();
    res.theta.swap(next);
    if (change <= tol) {
      res.iterations = k;
      return res;
    }
  }
  throw std::runtime_error("ista_oracle: iteration cap reached before convergence");
}

double lasso_kkt_residual(const RowMatrix& A, const Eigen::VectorXd& b, double penalty,
                          const Eigen::VectorXd& theta) {
  const Eigen::VectorXd g = A.transpose() * (A * theta - b);
  double worst = 0.0;
  for (Index i = 0; i < theta.size(); ++i) {
    const double v = theta[i] != 0.0 ? std::abs(g[i] + penalty * (theta[i] > 0 ? 1.0 : -1.0))
                                     : std::max(0.0, std::abs(g[i]) - penalty);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace regpath
