#pragma once

#include <cstddef>
#include <span>

#include "zeta_opt/tensor.hpp"

namespace zeta_opt::nn {

struct LossConfig {
  /// Weight of the (subtracted) mean predictive entropy.
  double entropy_weight = 0.01;

  void validate() const;
};

/// Row-wise softmax with max subtraction.
Tensor2 softmax(const Tensor2& logits);

struct LossResult {
  double loss = 0.0;
  Tensor2 dloss_dlogits;
};

/// mean_b CE(b) - entropy_weight * mean_b H(p_b), with H the Shannon entropy
/// of the softmax output. The gradient includes the entropy term's path
/// through the softmax: dH/dz_j = -p_j (log p_j + H).
LossResult entropy_regularized_loss(const Tensor2& logits, std::span<const std::size_t> labels,
                                    const LossConfig& cfg);

/// Fraction of rows whose arg-max equals the label.
double accuracy(const Tensor2& logits, std::span<const std::size_t> labels);

}  // namespace zeta_opt::nn
