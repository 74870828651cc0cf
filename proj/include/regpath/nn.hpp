#pragma once

#include "regpath/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace regpath {

// Dense MLP: ReLU on hidden layers, identity on the output (logits).
//
// Parameter layout, layer by layer: the out×in weight matrix in row-major
// order followed by the out biases.
struct MlpArchitecture {
  std::vector<Index> layer_sizes;

  Index num_layers() const { return static_cast<Index>(layer_sizes.size()) - 1; }
  Index input_dim() const { return layer_sizes.front(); }
  Index num_classes() const { return layer_sizes.back(); }
  void validate() const;
};

Index mlp_param_count(const MlpArchitecture& arch);

ParamVector mlp_init(const MlpArchitecture& arch, double scale, std::uint64_t seed);

struct Batch {
  RowMatrix inputs;         // batch_size × input_dim
  std::vector<int> labels;  // class ids in [0, classes)
};

using ConstRowMatrixRef = Eigen::Ref<const RowMatrix>;

struct LossGrad {
  double loss = 0.0;
  ParamVector grad;
};

// Mean softmax cross-entropy (natural log) and its exact gradient.
// ReLU'(0) is taken as 0.
LossGrad loss_and_grad(const MlpArchitecture& arch, const ParamVector& theta, const Batch& batch);
double loss_and_grad(const MlpArchitecture& arch, const ParamVector& theta,
                     const ConstRowMatrixRef& inputs, std::span<const int> labels,
                     ParamVector& grad);

double mlp_loss(const MlpArchitecture& arch, const ParamVector& theta,
                const ConstRowMatrixRef& inputs, std::span<const int> labels);

RowMatrix mlp_logits(const MlpArchitecture& arch, const ParamVector& theta,
                     const ConstRowMatrixRef& inputs);

// Pre-activations of every layer (hidden and output), for kink checks.
std::vector<RowMatrix> mlp_preactivations(const MlpArchitecture& arch, const ParamVector& theta,
                                          const ConstRowMatrixRef& inputs);

// Fraction of rows whose argmax logit equals the label; ties go to the
// lowest class index.
double accuracy(const MlpArchitecture& arch, const ParamVector& theta,
                const ConstRowMatrixRef& inputs, std::span<const int> labels);

}  // namespace regpath
