#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regpath {

using Index = Eigen::Index;

// Flat parameter vector θ ∈ ℝⁿ. The owning problem fixes n.
using ParamVector = Eigen::VectorXd;

// Row-major so that one sample is one contiguous row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_dim(const ParamVector& v, Index n, std::string_view what);
void require_finite(const ParamVector& v, std::string_view what);
void require_finite(double value, std::string_view what);

double l1_norm(const ParamVector& v);

// Entries i.i.d. uniform(-scale, scale); deterministic per seed.
ParamVector uniform_init(Index n, double scale, std::uint64_t seed);

// Which training rows an objective evaluation touches. An empty row list
// means the full training set.
class BatchSpec {
 public:
  static BatchSpec full() { return BatchSpec(); }
  explicit BatchSpec(std::vector<Index> rows);

  bool is_full() const { return !rows_; }
  std::span<const Index> rows() const;
  // Number of samples touched; `total` is the training-set size.
  Index size(Index total) const { return rows_ ? static_cast<Index>(rows_->size()) : total; }

 private:
  BatchSpec() = default;
  std::optional<std::vector<Index>> rows_;
};

// Source of batches for iterative solvers.
class BatchSampler {
 public:
  virtual ~BatchSampler() = default;
  virtual BatchSpec next() = 0;
  // True when every batch is the full training set.
  virtual bool deterministic() const = 0;
};

class FullBatchSampler final : public BatchSampler {
 public:
  BatchSpec next() override { return BatchSpec::full(); }
  bool deterministic() const override { return true; }
};

// Work counters shared by all solvers.
struct Budget {
  std::int64_t gradient_evals = 0;
  std::int64_t prox_evals = 0;
  std::int64_t samples_touched = 0;

  Budget& operator+=(const Budget& other);
  friend bool operator==(const Budget&, const Budget&) = default;
};

struct HeldOutMetrics {
  std::optional<double> f1_test;
  std::optional<double> acc_train;
  std::optional<double> acc_test;
};

// Bi-objective problem min (F1, F2) with F1 = f1 smooth and
// F2 = g2 = w·‖θ‖₁. Subclasses provide f1; g2 and its prox are fixed.
class BiObjectiveProblem {
 public:
  BiObjectiveProblem(Index n, double l1_weight);
  virtual ~BiObjectiveProblem() = default;

  Index dim() const { return n_; }
  double l1_weight() const { return l1_weight_; }

  // Training-set size, used for minibatch sampling and budget accounting.
  virtual Index num_samples() const = 0;

  virtual double eval_f1(const ParamVector& theta, const BatchSpec& batch) const = 0;
  // Returns f1 and writes ∇f1 into `grad` (resized as needed).
  virtual double f1_and_grad(const ParamVector& theta, const BatchSpec& batch,
                             ParamVector& grad) const = 0;
  ParamVector grad_f1(const ParamVector& theta, const BatchSpec& batch) const;

  double eval_g2(const ParamVector& theta) const { return l1_weight_ * l1_norm(theta); }
  ParamVector prox_g2(const ParamVector& theta, double step) const;

  // Optional held-out loss and accuracies; default reports nothing.
  virtual HeldOutMetrics held_out_metrics(const ParamVector& theta) const;

 private:
  Index n_;
  double l1_weight_;
};

enum class Direction : std::uint8_t { initial, toward_loss, toward_sparsity, ws };

std::string_view to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

struct ParetoPoint {
  ParamVector theta;
  double f1_train = 0.0;
  double g2 = 0.0;           // scaled: w·‖θ‖₁
  double l1_unscaled = 0.0;  // ‖θ‖₁
  std::optional<double> f1_test;
  std::optional<double> acc_train;
  std::optional<double> acc_test;
  Index index = 0;
  Direction direction = Direction::initial;
  std::int64_t grad_evals_cum = 0;
};

// Ordered output of a front-producing run. Indices are assigned on append
// and are contiguous from 0 within each direction label.
class FrontArchive {
 public:
  void append(ParetoPoint p, Direction d);
  // Appends keeping p.direction and p.index as given (used when reading
  // exported fronts).
  void append_raw(ParetoPoint p);

  const std::vector<ParetoPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const ParetoPoint& operator[](std::size_t i) const { return points_[i]; }
  std::vector<Direction> direction_labels() const;

 private:
  std::vector<ParetoPoint> points_;
  std::array<Index, 4> counts_{};
};

// Evaluates both objectives on the full training set plus any held-out
// metrics the problem provides.
ParetoPoint evaluate(const BiObjectiveProblem& problem, const ParamVector& theta);

// p dominates q: no worse in (f1_train, g2) and strictly better in one.
bool dominates(const ParetoPoint& p, const ParetoPoint& q);

}  // namespace regpath
