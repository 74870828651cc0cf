#include "regpath/core.hpp"

#include "regpath/prox.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace regpath {

void require_dim(const ParamVector& v, Index n, std::string_view what) {
  if (v.size() != n) {
    std::ostringstream os;
    os << what << ": dimension " << v.size() << " does not match expected " << n;
    throw DimensionError(os.str());
  }
}

void require_finite(const ParamVector& v, std::string_view what) {
  if (!v.allFinite()) throw NonFiniteError(std::string(what) + ": non-finite entry");
}

void require_finite(double value, std::string_view what) {
  if (!std::isfinite(value)) throw NonFiniteError(std::string(what) + " is not finite");
}

double l1_norm(const ParamVector& v) { return v.lpNorm<1>(); }

ParamVector uniform_init(Index n, double scale, std::uint64_t seed) {
  if (!(scale >= 0.0)) throw std::invalid_argument("uniform_init: scale must be >= 0");
  ParamVector theta = ParamVector::Zero(n);
  if (scale == 0.0) return theta;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (Index i = 0; i < n; ++i) theta[i] = dist(rng);
  return theta;
}

BatchSpec::BatchSpec(std::vector<Index> rows) : rows_(std::move(rows)) {}

std::span<const Index> BatchSpec::rows() const {
  if (!rows_) return {};
  return {rows_->data(), rows_->size()};
}

Budget& Budget::operator+=(const Budget& other) {
  gradient_evals += other.gradient_evals;
  prox_evals += other.prox_evals;
  samples_touched += other.samples_touched;
  return *this;
}

BiObjectiveProblem::BiObjectiveProblem(Index n, double l1_weight) : n_(n), l1_weight_(l1_weight) {
  if (n <= 0) throw std::invalid_argument("BiObjectiveProblem: dimension must be positive");
  if (!(l1_weight >= 0.0) || !std::isfinite(l1_weight))
    throw std::invalid_argument("BiObjectiveProblem: l1 weight must be finite and >= 0");
}

ParamVector BiObjectiveProblem::grad_f1(const ParamVector& theta, const BatchSpec& batch) const {
  ParamVector g;
  f1_and_grad(theta, batch, g);
  return g;
}

ParamVector BiObjectiveProblem::prox_g2(const ParamVector& theta, double step) const {
  return prox_scaled_l1(theta, ProxSpec{l1_weight_, step});
}

HeldOutMetrics BiObjectiveProblem::held_out_metrics(const ParamVector&) const { return {}; }

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::initial: return "initial";
    case Direction::toward_loss: return "loss";
    case Direction::toward_sparsity: return "sparsity";
    case Direction::ws: return "ws";
  }
  return "?";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  for (auto d : {Direction::initial, Direction::toward_loss, Direction::toward_sparsity,
                 Direction::ws}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

void FrontArchive::append(ParetoPoint p, Direction d) {
  auto& count = counts_[static_cast<std::size_t>(d)];
  p.direction = d;
  p.index = count++;
  points_.push_back(std::move(p));
}

void FrontArchive::append_raw(ParetoPoint p) {
  auto& count = counts_[static_cast<std::size_t>(p.direction)];
  count = std::max(count, p.index + 1);
  points_.push_back(std::move(p));
}

std::vector<Direction> FrontArchive::direction_labels() const {
  std::vector<Direction> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.direction);
  return out;
}

ParetoPoint evaluate(const BiObjectiveProblem& problem, const ParamVector& theta) {
  require_dim(theta, problem.dim(), "evaluate");
  ParetoPoint p;
  p.theta = theta;
  p.f1_train = problem.eval_f1(theta, BatchSpec::full());
  require_finite(p.f1_train, "objective f1 (training loss)");
  p.l1_unscaled = l1_norm(theta);
  p.g2 = problem.l1_weight() * p.l1_unscaled;
  require_finite(p.g2, "objective g2 (scaled l1 norm)");
  auto held = problem.held_out_metrics(theta);
  p.f1_test = held.f1_test;
  p.acc_train = held.acc_train;
  p.acc_test = held.acc_test;
  return p;
}

bool dominates(const ParetoPoint& p, const ParetoPoint& q) {
  return p.f1_train <= q.f1_train && p.g2 <= q.g2 && (p.f1_train < q.f1_train || p.g2 < q.g2);
}

}  // namespace regpath
