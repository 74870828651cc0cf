#include "regpath/continuation.hpp"

#include "regpath/data.hpp"
#include "regpath/prox.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace regpath {

void ContinuationConfig::validate() const {
  if (n_cont < 1) throw std::invalid_argument("ContinuationConfig: n_cont must be >= 1");
  if (predictor_iters < 1 || corrector_iters < 1 || init_iters < 1)
    throw std::invalid_argument("ContinuationConfig: iteration counts must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("ContinuationConfig: eta must be > 0");
  if (slope_stop && !(*slope_stop > 0.0))
    throw std::invalid_argument("ContinuationConfig: slope_stop must be > 0");
  if (batch_size && *batch_size < 1)
    throw std::invalid_argument("ContinuationConfig: batch_size must be >= 1");
  if (shrink_iters && *shrink_iters < 1)
    throw std::invalid_argument("ContinuationConfig: shrink_iters must be >= 1");
  if (shrink_weight && !(*shrink_weight >= 0.0))
    throw std::invalid_argument("ContinuationConfig: shrink_weight must be >= 0");
  if (!(sparsity_share >= 0.0 && sparsity_share <= 1.0))
    throw std::invalid_argument("ContinuationConfig: sparsity_share must lie in [0,1]");
  adam.validate();
}

ParamVector predictor_gradient(const ParamVector& theta, const BiObjectiveProblem& problem,
                               int iters, const AdamConfig& adam, BatchSampler& sampler,
                               Budget* budget) {
  if (iters < 1) throw std::invalid_argument("predictor_gradient: iters must be >= 1");
  require_dim(theta, problem.dim(), "predictor_gradient");
  Adam opt(problem.dim(), adam);
  ParamVector out = theta;
  ParamVector grad;
  for (int k = 0; k < iters; ++k) {
    const BatchSpec batch = sampler.next();
    problem.f1_and_grad(out, batch, grad);
    require_finite(grad, "predictor_gradient: gradient");
    if (budget) {
      budget->gradient_evals += 1;
      budget->samples_touched += batch.size(problem.num_samples());
    }
    opt.step(out, grad);
  }
  return out;
}

ParamVector predictor_gradient_descent(const ParamVector& theta,
                                       const BiObjectiveProblem& problem, int iters, double eta,
                                       BatchSampler& sampler, Budget* budget) {
  if (iters < 1) throw std::invalid_argument("predictor_gradient_descent: iters must be >= 1");
  require_dim(theta, problem.dim(), "predictor_gradient_descent");
  ParamVector out = theta;
  ParamVector grad;
  for (int k = 0; k < iters; ++k) {
    const BatchSpec batch = sampler.next();
    problem.f1_and_grad(out, batch, grad);
    if (budget) {
      budget->gradient_evals += 1;
      budget->samples_touched += batch.size(problem.num_samples());
    }
    out -= eta * grad;
    require_finite(out, "predictor_gradient_descent update");
  }
  return out;
}

ParamVector predictor_shrink(const ParamVector& theta, double eta, int iters, double weight,
                             Budget* budget) {
  if (iters < 1) throw std::invalid_argument("predictor_shrink: iters must be >= 1");
  ParamVector out = theta;
  const double c = eta * weight;
  for (int k = 0; k < iters; ++k) soft_threshold_inplace(out, c);
  if (budget) budget->prox_evals += iters;
  return out;
}

namespace {

class Runner {
 public:
  Runner(const BiObjectiveProblem& problem, const ContinuationConfig& cfg)
      : problem_(problem), cfg_(cfg) {
    if (cfg.batch_size) {
      sampler_ = std::make_unique<MinibatchSampler>(problem.num_samples(), *cfg.batch_size,
                                                    cfg.seed);
    } else {
      sampler_ = std::make_unique<FullBatchSampler>();
    }
    corrector_.step_h = cfg.eta;
    corrector_.max_iter = cfg.corrector_iters;
    corrector_.direction_tol = cfg.corrector_tol;
    corrector_.dual_tol = cfg.dual_tol;
  }

  ParamVector correct(const ParamVector& theta0, int max_iter) {
    SolverConfig sc = corrector_;
    sc.max_iter = max_iter;
    MpgResult r = mpg_solve(problem_, theta0, sc, *sampler_);
    const std::int64_t base = res_.trace.budget.gradient_evals;
    for (auto row : r.trace.rows) {
      row.iter += base;
      res_.trace.rows.push_back(row);
    }
    res_.trace.budget += r.trace.budget;
    return std::move(r.theta);
  }

  void add_point(const ParamVector& theta, Direction d) {
    ParetoPoint p = evaluate(problem_, theta);
    p.grad_evals_cum = res_.trace.budget.gradient_evals;
    res_.archive.append(std::move(p), d);
  }

  ParamVector predict(const ParamVector& theta, Direction d) {
    if (d == Direction::toward_sparsity) {
      return predictor_shrink(theta, cfg_.eta, cfg_.shrink_iters.value_or(cfg_.predictor_iters),
                              cfg_.shrink_weight.value_or(problem_.l1_weight()),
                              &res_.trace.budget);
    }
    if (cfg_.gradient_predictor == GradientPredictor::gd) {
      return predictor_gradient_descent(theta, problem_, cfg_.predictor_iters, cfg_.eta,
                                        *sampler_, &res_.trace.budget);
    }
    return predictor_gradient(theta, problem_, cfg_.predictor_iters, cfg_.adam, *sampler_,
                              &res_.trace.budget);
  }

  void run_leg(const ParamVector& start, const ParetoPoint& start_point, Direction d,
               int points) {
    ParamVector theta = start;
    double prev_f1 = start_point.f1_train, prev_g2 = start_point.g2;
    for (int i = 0; i < points; ++i) {
      try {
        const ParamVector predicted = predict(theta, d);
        theta = correct(predicted, cfg_.corrector_iters);
      } catch (const DivergenceError& e) {
        res_.notes.push_back(std::string(to_string(d)) + " leg aborted: " + e.what());
        return;
      } catch (const NonFiniteError& e) {
        res_.notes.push_back(std::string(to_string(d)) + " leg aborted: " + e.what());
        return;
      }
      add_point(theta, d);
      const ParetoPoint& last = res_.archive.points().back();
      if (cfg_.slope_stop) {
        ParetoPoint prev;
        prev.f1_train = prev_f1;
        prev.g2 = prev_g2;
        const double s = segment_slope(prev, last);
        if (std::abs(s) > *cfg_.slope_stop) {
          std::ostringstream os;
          os << to_string(d) << " leg stopped early after " << i + 1 << " points: |slope| " << s
             << " exceeds " << *cfg_.slope_stop;
          res_.notes.push_back(os.str());
          return;
        }
      }
      prev_f1 = last.f1_train;
      prev_g2 = last.g2;
    }
  }

  ContinuationResult run(const ParamVector& theta_init) {
    const ParamVector theta0 = correct(theta_init, cfg_.init_iters);
    add_point(theta0, Direction::initial);
    const ParetoPoint start = res_.archive.points().front();

    const int remaining = cfg_.n_cont - 1;
    switch (cfg_.direction) {
      case LegDirection::toward_loss:
        run_leg(theta0, start, Direction::toward_loss, remaining);
        break;
      case LegDirection::toward_sparsity:
        run_leg(theta0, start, Direction::toward_sparsity, remaining);
        break;
      case LegDirection::both: {
        const int sparse = static_cast<int>(std::lround(cfg_.sparsity_share * remaining));
        run_leg(theta0, start, Direction::toward_sparsity, sparse);
        run_leg(theta0, start, Direction::toward_loss, remaining - sparse);
        break;
      }
    }
    return std::move(res_);
  }

 private:
  const BiObjectiveProblem& problem_;
  const ContinuationConfig& cfg_;
  std::unique_ptr<BatchSampler> sampler_;
  SolverConfig corrector_;
  ContinuationResult res_;
};

}  // namespace

ContinuationResult continuation_run(const BiObjectiveProblem& problem,
                                    const ParamVector& theta_init, const ContinuationConfig& cfg) {
  cfg.validate();
  require_dim(theta_init, problem.dim(), "continuation_run");
  return Runner(problem, cfg).run(theta_init);
}

FrontArchive front_filter_nondominated(const FrontArchive& archive) {
  FrontArchive out;
  const auto& pts = archive.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
      dominated = j != i && dominates(pts[j], pts[i]);
    if (!dominated) out.append_raw(pts[i]);
  }
  return out;
}

double segment_slope(const ParetoPoint& from, const ParetoPoint& to) {
  const double dg = to.g2 - from.g2;
  if (dg == 0.0) return std::numeric_limits<double>::infinity();
  return (to.f1_train - from.f1_train) / dg;
}

std::vector<double> front_slope(const FrontArchive& archive) {
  if (archive.size() < 2) throw std::invalid_argument("front_slope: need at least 2 points");
  std::vector<double> out;
  out.reserve(archive.size() - 1);
  for (std::size_t i = 1; i < archive.size(); ++i)
    out.push_back(segment_slope(archive[i - 1], archive[i]));
  return out;
}

}  // namespace regpath
