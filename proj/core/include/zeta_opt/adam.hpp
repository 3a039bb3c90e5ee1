#pragma once

#include <cstdint>
#include <vector>

#include "zeta_opt/tensor.hpp"

namespace zeta_opt::optim {

struct AdamHyperParams {
  double eta = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct AdamState {
  std::uint64_t t = 0;
  std::vector<nn::Tensor2> m;
  std::vector<nn::Tensor2> v;

  static AdamState for_params(const nn::ParamSet& params);
};

struct AdamDiagnostics {
  double grad_norm = 0.0;
  double update_norm = 0.0;
};

/// Textbook Adam with a fixed learning rate. Increments state.t itself.
AdamDiagnostics adam_step(nn::ParamSet& params, AdamState& state, const AdamHyperParams& hp);

}  // namespace zeta_opt::optim
