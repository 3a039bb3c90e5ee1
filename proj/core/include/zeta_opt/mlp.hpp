#pragma once

#include <cstdint>

#include "zeta_opt/tensor.hpp"

namespace zeta_opt::nn {

/// Two linear layers with a ReLU in between.
struct MlpConfig {
  std::size_t input_dim = 1;
  std::size_t hidden_dim = 1;
  std::size_t num_classes = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Parameter names used by mlp_init, in ParamSet order.
inline constexpr const char* kFc1Weight = "fc1.weight";
inline constexpr const char* kFc1Bias = "fc1.bias";
inline constexpr const char* kFc2Weight = "fc2.weight";
inline constexpr const char* kFc2Bias = "fc2.bias";

/// fc1.weight [hidden x input], fc1.bias [hidden x 1], fc2.weight
/// [classes x hidden], fc2.bias [classes x 1]. Weights are uniform in
/// +-1/sqrt(fan_in), biases zero.
ParamSet mlp_init(const MlpConfig& cfg);

/// Intermediate values kept for the backward pass.
struct MlpActivations {
  Tensor2 hidden_pre;  // [batch x hidden], before ReLU
  Tensor2 hidden;      // [batch x hidden], after ReLU
  Tensor2 logits;      // [batch x classes]
};

MlpActivations mlp_forward_cached(const ParamSet& params, const Tensor2& x);

/// logits = relu(x W1^T + b1^T) W2^T + b2^T, one row per sample.
Tensor2 mlp_forward(const ParamSet& params, const Tensor2& x);

/// Writes dL/dtheta into params' gradients (overwrites, does not accumulate).
void mlp_backward(ParamSet& params, const Tensor2& x, const MlpActivations& acts,
                  const Tensor2& dloss_dlogits);

/// Same as above but recomputes the activations from x.
void mlp_backward(ParamSet& params, const Tensor2& x, const Tensor2& dloss_dlogits);

}  // namespace zeta_opt::nn
