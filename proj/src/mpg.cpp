#include "regpath/mpg.hpp"

#include "regpath/log.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace regpath {

void SolverConfig::validate() const {
  if (!(step_h > 0.0) || !std::isfinite(step_h))
    throw std::invalid_argument("SolverConfig: step_h must be > 0");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  if (direction_tol && !(*direction_tol > 0.0))
    throw std::invalid_argument("SolverConfig: direction_tol must be > 0");
  if (!(dual_tol > 0.0)) throw std::invalid_argument("SolverConfig: dual_tol must be > 0");
  if (lipschitz_hint && !(*lipschitz_hint >= 0.0))
    throw std::invalid_argument("SolverConfig: lipschitz_hint must be >= 0");
}

namespace {

constexpr int kMaxDualIterations = 200;

// d(λ) = prox_{h(1-λ)g2}(θ - hλ∇f1) - θ together with the terms of the dual
// derivative a(d) - b(d).
struct DualProbe {
  const ParamVector& grad;
  const ParamVector& theta;
  double h;
  double w;
  double g2_theta;
  ParamVector u;
  int evals = 0;

  double a = 0.0;
  double b = 0.0;

  void at(double lambda) {
    const double c = h * (1.0 - lambda) * w;
    // soft threshold written as x - clamp(x, -c, c)
    u.array() = theta.array() - (h * lambda) * grad.array();
    u.array() -= u.array().max(-c).min(c);
    ++evals;
    a = grad.dot(u - theta);
    b = w * u.lpNorm<1>() - g2_theta;
  }
  double slope() const { return a - b; }
};

}  // namespace

DirectionResult direction_subproblem(const ParamVector& grad1, const ParamVector& theta,
                                     const BiObjectiveProblem& problem, const SolverConfig& cfg) {
  require_dim(grad1, problem.dim(), "direction_subproblem gradient");
  require_dim(theta, problem.dim(), "direction_subproblem theta");
  require_finite(grad1, "direction_subproblem gradient");

  const double h = cfg.step_h;
  DualProbe probe{grad1, theta, h, problem.l1_weight(), problem.eval_g2(theta),
                  ParamVector(theta.size())};

  // φ(λ) is concave with φ'(λ) = a(d(λ)) - b(d(λ)).
  double lambda = 0.0;
  int iterations = 0;
  probe.at(0.0);
  if (probe.slope() > 0.0) {
    probe.at(1.0);
    if (probe.slope() >= 0.0) {
      lambda = 1.0;
    } else {
      double lo = 0.0, hi = 1.0;
      while (hi - lo > cfg.dual_tol) {
        if (++iterations > kMaxDualIterations)
          throw std::runtime_error("direction_subproblem: dual search did not converge");
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        probe.at(mid);
        const double s = probe.slope();
        if (s > 0.0) {
          lo = mid;
        } else if (s < 0.0) {
          hi = mid;
        } else {
          lo = hi = mid;
        }
      }
      lambda = 0.5 * (lo + hi);
      probe.at(lambda);
    }
  }

  DirectionResult out;
  out.d = probe.u - theta;
  out.lambda_star = lambda;
  out.psi = std::max(probe.a, probe.b);
  out.model_decrease = out.psi + out.d.squaredNorm() / (2.0 * h);
  out.dual_iterations = iterations;
  out.prox_evals = probe.evals;
  return out;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "iter,F1,F2,norm_d,lambda_star\n";
  auto opt = [&os](const std::optional<double>& v) {
    if (v) os << *v;
  };
  const auto prec = os.precision(17);
  for (const auto& r : trace.rows) {
    os << r.iter << ',' << r.f1 << ',' << r.f2 << ',';
    opt(r.norm_d);
    os << ',';
    opt(r.lambda_star);
    os << '\n';
  }
  os.precision(prec);
}

MpgResult mpg_solve(const BiObjectiveProblem& problem, const ParamVector& theta0,
                    const SolverConfig& cfg, BatchSampler& sampler) {
  cfg.validate();
  require_dim(theta0, problem.dim(), "mpg_solve");
  require_finite(theta0, "mpg_solve initial point");

  if (cfg.lipschitz_hint && *cfg.lipschitz_hint > 0.0 && cfg.step_h > 2.0 / *cfg.lipschitz_hint) {
    std::ostringstream os;
    os << "mpg_solve: step_h=" << cfg.step_h << " exceeds 2/L=" << 2.0 / *cfg.lipschitz_hint
       << "; convergence is not guaranteed";
    log_warning(os.str());
  }

  std::optional<double> tol;
  if (sampler.deterministic())
    tol = cfg.direction_tol.value_or(1e-6 * std::sqrt(static_cast<double>(problem.dim())));

  MpgResult res;
  res.theta = theta0;
  ParamVector grad;
  double f1_start = 0.0;

  for (int k = 0; k < cfg.max_iter; ++k) {
    const BatchSpec batch = sampler.next();
    const double f1 = problem.f1_and_grad(res.theta, batch, grad);
    res.trace.budget.gradient_evals += 1;
    res.trace.budget.samples_touched += batch.size(problem.num_samples());
    require_finite(f1, "mpg_solve: objective f1");
    if (k == 0) f1_start = f1;
    if (f1 > 1e6 * std::max(std::abs(f1_start), 1e-6)) {
      std::ostringstream os;
      os << "mpg_solve: diverged at iteration " << k << " (f1=" << f1 << ", initial " << f1_start
         << ")";
      throw DivergenceError(os.str());
    }

    DirectionResult dir = direction_subproblem(grad, res.theta, problem, cfg);
    res.trace.budget.prox_evals += dir.prox_evals;
    const double norm_d = dir.d.norm();
    res.trace.rows.push_back({k, f1, problem.eval_g2(res.theta), norm_d, dir.lambda_star});
    res.iterations = k + 1;

    if (tol && norm_d <= *tol) {
      res.converged = true;
      break;
    }
    res.theta += dir.d;
  }
  require_finite(res.theta, "mpg_solve result");
  return res;
}

double criticality_residual(const ParamVector& grad1, const ParamVector& theta, double w) {
  require_dim(grad1, theta.size(), "criticality_residual");
  auto dist = [&](double lambda) {
    double sq = 0.0;
    for (Index i = 0; i < theta.size(); ++i) {
      const double lg = lambda * grad1[i];
      double r;
      if (theta[i] != 0.0) {
        r = lg + (1.0 - lambda) * w * (theta[i] > 0.0 ? 1.0 : -1.0);
      } else {
        r = std::max(0.0, std::abs(lg) - (1.0 - lambda) * w);
      }
      sq += r * r;
    }
    return std::sqrt(sq);
  };

  constexpr int kGrid = 1001;
  int best = 0;
  double best_val = dist(0.0);
  for (int k = 1; k < kGrid; ++k) {
    const double v = dist(static_cast<double>(k) / (kGrid - 1));
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }

  // The distance is convex in λ; golden-section search on the bracketing cells.
  double lo = std::max(0.0, static_cast<double>(best - 1) / (kGrid - 1));
  double hi = std::min(1.0, static_cast<double>(best + 1) / (kGrid - 1));
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double v1 = dist(x1), v2 = dist(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (v1 <= v2) {
      hi = x2;
      x2 = x1;
      v2 = v1;
      x1 = hi - ratio * (hi - lo);
      v1 = dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      v1 = v2;
      x2 = lo + ratio * (hi - lo);
      v2 = dist(x2);
    }
  }
  return std::min({best_val, v1, v2, dist(lo), dist(hi)});
}

double criticality_residual(const BiObjectiveProblem& problem, const ParamVector& theta) {
  require_dim(theta, problem.dim(), "criticality_residual");
  return criticality_residual(problem.grad_f1(theta, BatchSpec::full()), theta,
                              problem.l1_weight());
}

}  // namespace regpath
