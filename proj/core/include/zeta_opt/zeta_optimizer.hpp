#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "zeta_opt/tensor.hpp"

namespace zeta_opt::optim {

enum class LrSchedule { cosine, constant };

/// Tunable constants of the ZetA update. eta = 0.0015 is the reference ZetA
/// learning rate; the other defaults are library choices.
struct ZetaHyperParams {
  double eta = 0.0015;
  double s_min = 1.1;
  double s_max = 2.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Elementwise gradient clamp into [-clip_bound, clip_bound]; may be +inf.
  double clip_bound = 1.0;
  double base_damp = 0.1;
  /// Weight of the Adam direction in the hybrid update (1 - adam_mix for zeta).
  double adam_mix = 0.5;
  std::uint64_t total_steps = 1000;
  double weight_decay = 0.01;
  double sam_rho = 0.05;
  bool centralize = true;
  LrSchedule lr_schedule = LrSchedule::cosine;

  void validate() const;
};

struct ZetaState {
  std::uint64_t t = 0;
  std::vector<nn::Tensor2> m;
  std::vector<nn::Tensor2> v;
  std::vector<double> prev_grad_flat;
  double gnorm_ema = 0.0;
  double loss_ema = 0.0;
  /// Set by phase 1 and cleared by phase 2.
  bool phase1_pending = false;

  /// Zero moments shaped like params; t = 0.
  static ZetaState for_params(const nn::ParamSet& params);
};

struct StepDiagnostics {
  double s_t = 0.0;
  double zeta_s = 0.0;
  double delta_t = 0.0;
  double rho_t = 0.0;
  double boost = 1.0;
  double eta_t = 0.0;
  /// Global L2 norm of the clipped, not yet centralized gradient.
  double grad_norm = 0.0;
  double update_norm = 0.0;
};

/// SAM offset applied by phase 1, one tensor per parameter.
struct Perturbation {
  std::uint64_t step = 0;
  std::vector<nn::Tensor2> deltas;
};

void clip_gradients(nn::ParamSet& params, double clip_bound);
void centralize_gradients(nn::ParamSet& params);

struct BoostResult {
  double rho_t = 0.0;
  double boost = 1.0;
};

/// rho_t = clamp(<g, g'> / (|g| |g'| + eps), 0, 1), b_t = 1 + 0.2 delta_t rho_t.
BoostResult cosine_boost(std::span<const double> g_flat, std::span<const double> prev_g_flat,
                         double delta_t, double eps);

/// Advances both EMAs and returns the adaptive damping delta_t for state.t.
double update_damping(ZetaState& state, double grad_norm, double loss, const ZetaHyperParams& hp);

/// First half of a step: increments state.t, computes the provisional hybrid
/// update from the current gradients and moves params to theta + perturbation.
/// Moment tensors are not modified.
Perturbation zeta_step_phase1(nn::ParamSet& params, ZetaState& state, const ZetaHyperParams& hp,
                              double loss, StepDiagnostics& diag);

/// Second half: restores theta, commits the moments from the gradient now in
/// params (the one evaluated at theta + perturbation) and applies
/// theta -= eta_t * u_t. Reuses s_t, zeta(s_t) and b_t from diag.
void zeta_step_phase2(nn::ParamSet& params, ZetaState& state, const ZetaHyperParams& hp,
                      const Perturbation& perturbation, StepDiagnostics& diag);

/// Owns hyperparameters and state for one ParamSet.
class ZetaOptimizer {
 public:
  ZetaOptimizer(const nn::ParamSet& params, ZetaHyperParams hp);

  Perturbation begin_step(nn::ParamSet& params, double loss);
  void finish_step(nn::ParamSet& params, const Perturbation& perturbation);

  const ZetaHyperParams& hyper_params() const { return hp_; }
  const ZetaState& state() const { return state_; }
  const StepDiagnostics& diagnostics() const { return diag_; }
  /// False when sam_rho == 0, in which case the gradient need not be recomputed
  /// between the two phases.
  bool needs_regrad() const { return hp_.sam_rho > 0.0; }

 private:
  ZetaHyperParams hp_;
  ZetaState state_;
  StepDiagnostics diag_;
};

}  // namespace zeta_opt::optim
