#include "regpath/nn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace regpath {

namespace {

using ConstWeightMap = Eigen::Map<const RowMatrix>;
using WeightMap = Eigen::Map<RowMatrix>;

struct LayerOffsets {
  Index weights;
  Index biases;
  Index in;
  Index out;
};

std::vector<LayerOffsets> layer_offsets(const MlpArchitecture& arch) {
  std::vector<LayerOffsets> out;
  Index off = 0;
  for (Index l = 0; l < arch.num_layers(); ++l) {
    const Index in = arch.layer_sizes[l], o = arch.layer_sizes[l + 1];
    out.push_back({off, off + in * o, in, o});
    off += in * o + o;
  }
  return out;
}

void check_inputs(const MlpArchitecture& arch, const ParamVector& theta,
                  const ConstRowMatrixRef& inputs, std::span<const int> labels, bool need_labels) {
  arch.validate();
  require_dim(theta, mlp_param_count(arch), "mlp parameters");
  if (inputs.cols() != arch.input_dim()) {
    std::ostringstream os;
    os << "mlp: input has " << inputs.cols() << " columns, architecture expects "
       << arch.input_dim();
    throw DimensionError(os.str());
  }
  if (need_labels) {
    if (static_cast<Index>(labels.size()) != inputs.rows())
      throw DimensionError("mlp: label count does not match input rows");
    for (int y : labels) {
      if (y < 0 || y >= arch.num_classes())
        throw std::out_of_range("mlp: label out of range");
    }
  }
}

// Forward pass keeping pre-activations Z_l and activations A_l.
void forward(const std::vector<LayerOffsets>& offs,
             const ParamVector& theta, const ConstRowMatrixRef& inputs,
             std::vector<RowMatrix>& pre, std::vector<RowMatrix>* act) {
  pre.resize(offs.size());
  if (act) act->resize(offs.size());
  for (std::size_t l = 0; l < offs.size(); ++l) {
    const auto& o = offs[l];
    ConstWeightMap W(theta.data() + o.weights, o.out, o.in);
    Eigen::Map<const Eigen::RowVectorXd> b(theta.data() + o.biases, o.out);
    if (l == 0) {
      pre[l].noalias() = inputs * W.transpose();
    } else {
      const RowMatrix& prev = act ? (*act)[l - 1] : pre[l - 1];
      pre[l].noalias() = prev * W.transpose();
    }
    pre[l].rowwise() += b;
    const bool hidden = l + 1 < offs.size();
    if (act) {
      (*act)[l] = hidden ? RowMatrix(pre[l].cwiseMax(0.0)) : pre[l];
    } else if (hidden) {
      // Without an activation cache the ReLU is applied in place; callers
      // that need pre-activations pass `act`.
      pre[l] = pre[l].cwiseMax(0.0);
    }
  }
}

// Row-wise log-softmax; returns softmax probabilities and accumulates the
// summed negative log-likelihood.
double softmax_nll(const RowMatrix& logits, std::span<const int> labels, RowMatrix* probs) {
  double total = 0.0;
  if (probs) probs->resize(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    const double m = row.maxCoeff();
    const double sum = (row.array() - m).exp().sum();
    const double log_z = m + std::log(sum);
    total += log_z - row[labels[i]];
    if (probs) probs->row(i) = (row.array() - log_z).exp();
  }
  return total;
}

}  // namespace

void MlpArchitecture::validate() const {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("MlpArchitecture: need at least input and output layers");
  for (Index s : layer_sizes) {
    if (s <= 0) throw std::invalid_argument("MlpArchitecture: layer sizes must be positive");
  }
}

Index mlp_param_count(const MlpArchitecture& arch) {
  arch.validate();
  Index n = 0;
  for (std::size_t l = 0; l + 1 < arch.layer_sizes.size(); ++l)
    n += arch.layer_sizes[l] * arch.layer_sizes[l + 1] + arch.layer_sizes[l + 1];
  return n;
}

ParamVector mlp_init(const MlpArchitecture& arch, double scale, std::uint64_t seed) {
  return uniform_init(mlp_param_count(arch), scale, seed);
}

LossGrad loss_and_grad(const MlpArchitecture& arch, const ParamVector& theta, const Batch& batch) {
  LossGrad out;
  out.loss = loss_and_grad(arch, theta, batch.inputs, batch.labels, out.grad);
  return out;
}

double loss_and_grad(const MlpArchitecture& arch, const ParamVector& theta,
                     const ConstRowMatrixRef& inputs, std::span<const int> labels,
                     ParamVector& grad) {
  check_inputs(arch, theta, inputs, labels, true);
  const Index batch = inputs.rows();
  if (batch == 0) throw std::invalid_argument("loss_and_grad: empty batch");

  const auto offs = layer_offsets(arch);
  std::vector<RowMatrix> pre, act;
  forward(offs, theta, inputs, pre, &act);
  if (!act.back().allFinite()) throw NonFiniteError("loss_and_grad: non-finite activations");

  RowMatrix delta;
  const double loss = softmax_nll(act.back(), labels, &delta) / static_cast<double>(batch);
  for (Index i = 0; i < batch; ++i) delta(i, labels[i]) -= 1.0;
  delta /= static_cast<double>(batch);

  grad.resize(theta.size());
  for (std::size_t l = offs.size(); l-- > 0;) {
    const auto& o = offs[l];
    WeightMap dW(grad.data() + o.weights, o.out, o.in);
    Eigen::Map<Eigen::RowVectorXd> db(grad.data() + o.biases, o.out);
    if (l == 0) {
      dW.noalias() = delta.transpose() * inputs;
    } else {
      dW.noalias() = delta.transpose() * act[l - 1];
    }
    db = delta.colwise().sum();
    if (l > 0) {
      ConstWeightMap W(theta.data() + o.weights, o.out, o.in);
      RowMatrix back = delta * W;
      delta = (pre[l - 1].array() > 0.0).select(back, 0.0);
    }
  }
  if (!std::isfinite(loss)) throw NonFiniteError("loss_and_grad: non-finite loss");
  return loss;
}

double mlp_loss(const MlpArchitecture& arch, const ParamVector& theta,
                const ConstRowMatrixRef& inputs, std::span<const int> labels) {
  check_inputs(arch, theta, inputs, labels, true);
  if (inputs.rows() == 0) throw std::invalid_argument("mlp_loss: empty batch");
  const auto offs = layer_offsets(arch);
  std::vector<RowMatrix> pre;
  forward(offs, theta, inputs, pre, nullptr);
  if (!pre.back().allFinite()) throw NonFiniteError("mlp_loss: non-finite activations");
  return softmax_nll(pre.back(), labels, nullptr) / static_cast<double>(inputs.rows());
}

RowMatrix mlp_logits(const MlpArchitecture& arch, const ParamVector& theta,
                     const ConstRowMatrixRef& inputs) {
  check_inputs(arch, theta, inputs, {}, false);
  const auto offs = layer_offsets(arch);
  std::vector<RowMatrix> pre;
  forward(offs, theta, inputs, pre, nullptr);
  return pre.back();
}

std::vector<RowMatrix> mlp_preactivations(const MlpArchitecture& arch, const ParamVector& theta,
                                          const ConstRowMatrixRef& inputs) {
  check_inputs(arch, theta, inputs, {}, false);
  const auto offs = layer_offsets(arch);
  std::vector<RowMatrix> pre, act;
  forward(offs, theta, inputs, pre, &act);
  return pre;
}

double accuracy(const MlpArchitecture& arch, const ParamVector& theta,
                const ConstRowMatrixRef& inputs, std::span<const int> labels) {
  check_inputs(arch, theta, inputs, labels, true);
  if (inputs.rows() == 0) throw std::invalid_argument("accuracy: empty dataset");
  const RowMatrix logits = mlp_logits(arch, theta, inputs);
  Index correct = 0;
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < logits.cols(); ++k) {
      if (logits(i, k) > logits(i, best)) best = k;
    }
    if (best == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(inputs.rows());
}

}  // namespace regpath
