#include "zeta_opt/zeta_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeta_opt/error.hpp"
#include "zeta_opt/schedules.hpp"
#include "zeta_opt/zeta_function.hpp"

namespace zeta_opt::optim {
namespace {

using nn::ParamSet;
using nn::Tensor2;
using Grads = std::vector<Tensor2>;

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw DomainError("ZetaHyperParams: " + what);
  }
}

Grads copy_grads(const ParamSet& params) {
  Grads out;
  out.reserve(params.size());
  for (const auto& e : params) {
    out.push_back(e.grad);
  }
  return out;
}

void check_finite_grads(const ParamSet& params, const char* where) {
  for (const auto& e : params) {
    if (!e.grad.all_finite()) {
      throw NumericError(std::string(where) + ": non-finite gradient in parameter '" + e.name +
                         "'");
    }
  }
}

void clamp_tensor(Tensor2& g, double bound) {
  for (double& x : g.values()) {
    x = std::clamp(x, -bound, bound);
  }
}

void centralize_rows(Tensor2& g) {
  for (std::size_t r = 0; r < g.rows(); ++r) {
    auto row = g.row(r);
    double mean = 0.0;
    for (double x : row) {
      mean += x;
    }
    mean /= static_cast<double>(row.size());
    for (double& x : row) {
      x -= mean;
    }
  }
}

// Elementwise clamp; returns the global norm of the clamped gradient.
double clip_all(Grads& g, double bound) {
  double sum = 0.0;
  for (auto& t : g) {
    clamp_tensor(t, bound);
    for (double x : t.values()) {
      sum += x * x;
    }
  }
  return std::sqrt(sum);
}

void centralize_matrices(Grads& g, const ParamSet& params, const ZetaHyperParams& hp) {
  if (!hp.centralize) {
    return;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (params[i].is_matrix) {
      centralize_rows(g[i]);
    }
  }
}

std::vector<double> flatten(const Grads& g) {
  std::vector<double> out;
  for (const auto& t : g) {
    out.insert(out.end(), t.values().begin(), t.values().end());
  }
  return out;
}

void advance_moments(const Grads& g, Grads& m, Grads& v, const ZetaHyperParams& hp) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto gv = g[i].values();
    auto mv = m[i].values();
    auto vv = v[i].values();
    for (std::size_t j = 0; j < gv.size(); ++j) {
      mv[j] = hp.beta1 * mv[j] + (1.0 - hp.beta1) * gv[j];
      vv[j] = hp.beta2 * vv[j] + (1.0 - hp.beta2) * gv[j] * gv[j];
    }
  }
}

struct HybridUpdate {
  Grads u;
  double norm = 0.0;
};

// u = alpha * mhat / (sqrt(vhat) + eps)
//   + (1 - alpha) * eta * mhat * b / (|g|^(s-1) + eps) / zeta(s)
HybridUpdate hybrid_update(const Grads& m, const Grads& v, std::uint64_t t, double grad_norm,
                           const StepDiagnostics& diag, const ZetaHyperParams& hp) {
  const double td = static_cast<double>(t);
  const double m_corr = 1.0 - std::pow(hp.beta1, td);
  const double v_corr = 1.0 - std::pow(hp.beta2, td);
  const double damping = 1.0 / (std::pow(grad_norm, diag.s_t - 1.0) + hp.epsilon);
  const double alpha = hp.adam_mix;

  HybridUpdate out;
  out.u.reserve(m.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Tensor2 u(m[i].rows(), m[i].cols());
    const auto mv = m[i].values();
    const auto vv = v[i].values();
    auto uv = u.values();
    for (std::size_t j = 0; j < mv.size(); ++j) {
      const double m_hat = mv[j] / m_corr;
      const double v_hat = vv[j] / v_corr;
      const double u_adam = m_hat / (std::sqrt(v_hat) + hp.epsilon);
      const double u_zeta = hp.eta * m_hat * diag.boost * damping * (1.0 / diag.zeta_s);
      uv[j] = alpha * u_adam + (1.0 - alpha) * u_zeta;
      sum += uv[j] * uv[j];
    }
    out.u.push_back(std::move(u));
  }
  out.norm = std::sqrt(sum);
  return out;
}

void check_state_shapes(const ParamSet& params, const ZetaState& state) {
  bool ok = state.m.size() == params.size() && state.v.size() == params.size();
  for (std::size_t i = 0; ok && i < params.size(); ++i) {
    ok = state.m[i].same_shape(params[i].value) && state.v[i].same_shape(params[i].value);
  }
  if (!ok) {
    throw ShapeError("ZetaState: moment tensors do not match the parameter set");
  }
}

}  // namespace

void ZetaHyperParams::validate() const {
  require(s_min > 1.0 && s_min <= s_max && s_max <= 2.0, "need 1 < s_min <= s_max <= 2");
  require(total_steps >= 1, "total_steps must be >= 1");
  require(epsilon > 0.0, "epsilon must be > 0");
  require(clip_bound > 0.0, "clip_bound must be > 0");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  require(adam_mix >= 0.0 && adam_mix <= 1.0, "adam_mix must lie in [0, 1]");
  require(eta >= 0.0 && std::isfinite(eta), "eta must be finite and >= 0");
  require(base_damp >= 0.0 && std::isfinite(base_damp), "base_damp must be finite and >= 0");
  require(weight_decay >= 0.0 && std::isfinite(weight_decay), "weight_decay must be >= 0");
  require(sam_rho >= 0.0 && std::isfinite(sam_rho), "sam_rho must be >= 0");
}

ZetaState ZetaState::for_params(const nn::ParamSet& params) {
  ZetaState state;
  for (const auto& e : params) {
    state.m.emplace_back(e.value.rows(), e.value.cols());
    state.v.emplace_back(e.value.rows(), e.value.cols());
  }
  state.prev_grad_flat.assign(params.num_scalars(), 0.0);
  return state;
}

void clip_gradients(nn::ParamSet& params, double clip_bound) {
  if (!(clip_bound > 0.0)) {
    throw DomainError("clip_gradients: clip_bound must be > 0");
  }
  for (auto& e : params) {
    clamp_tensor(e.grad, clip_bound);
  }
}

void centralize_gradients(nn::ParamSet& params) {
  for (auto& e : params) {
    if (e.is_matrix) {
      centralize_rows(e.grad);
    }
  }
}

BoostResult cosine_boost(std::span<const double> g_flat, std::span<const double> prev_g_flat,
                         double delta_t, double eps) {
  if (g_flat.size() != prev_g_flat.size()) {
    throw ShapeError("cosine_boost: gradient vectors differ in length");
  }
  double dot = 0.0;
  double gg = 0.0;
  double pp = 0.0;
  for (std::size_t i = 0; i < g_flat.size(); ++i) {
    dot += g_flat[i] * prev_g_flat[i];
    gg += g_flat[i] * g_flat[i];
    pp += prev_g_flat[i] * prev_g_flat[i];
  }
  const double cosine = dot / (std::sqrt(gg) * std::sqrt(pp) + eps);
  const double rho = std::clamp(cosine, 0.0, 1.0);
  return {rho, 1.0 + delta_t * 0.2 * rho};
}

double update_damping(ZetaState& state, double grad_norm, double loss, const ZetaHyperParams& hp) {
  if (state.t == 0) {
    throw ProtocolError("update_damping: step counter must be incremented first");
  }
  state.gnorm_ema = 0.9 * state.gnorm_ema + 0.1 * grad_norm;
  state.loss_ema = 0.9 * state.loss_ema + 0.1 * loss;
  const double e = state.gnorm_ema;
  const double warmup = 1.0 - std::pow(0.9, static_cast<double>(state.t));
  return hp.base_damp * (1.0 + e / (1.0 + e)) * (1.0 / std::max(0.1, state.loss_ema)) *
         (1.0 / warmup);
}

Perturbation zeta_step_phase1(nn::ParamSet& params, ZetaState& state, const ZetaHyperParams& hp,
                              double loss, StepDiagnostics& diag) {
  hp.validate();
  if (state.phase1_pending) {
    throw ProtocolError("zeta_step_phase1: previous step's phase 2 has not run");
  }
  check_state_shapes(params, state);
  check_finite_grads(params, "zeta_step_phase1");
  if (!std::isfinite(loss)) {
    throw NumericError("zeta_step_phase1: non-finite loss");
  }
  if (state.prev_grad_flat.size() != params.num_scalars()) {
    state.prev_grad_flat.assign(params.num_scalars(), 0.0);
  }

  state.t += 1;
  const std::uint64_t t = state.t;

  Grads g = copy_grads(params);
  diag = StepDiagnostics{};
  diag.grad_norm = clip_all(g, hp.clip_bound);
  diag.s_t = s_schedule(t, hp);
  diag.zeta_s = special::zeta(diag.s_t);
  diag.delta_t = update_damping(state, diag.grad_norm, loss, hp);

  const std::vector<double> clipped_flat = flatten(g);
  const BoostResult boost =
      cosine_boost(clipped_flat, state.prev_grad_flat, diag.delta_t, hp.epsilon);
  diag.rho_t = boost.rho_t;
  diag.boost = boost.boost;

  centralize_matrices(g, params, hp);

  // Provisional moments; the committed update happens in phase 2.
  Grads m = state.m;
  Grads v = state.v;
  advance_moments(g, m, v, hp);
  const HybridUpdate update = hybrid_update(m, v, t, diag.grad_norm, diag, hp);
  diag.update_norm = update.norm;
  diag.eta_t = lr_schedule(t, hp);

  state.prev_grad_flat = flatten(g);

  Perturbation pert{t, {}};
  pert.deltas.reserve(params.size());
  const double scale = hp.sam_rho / (update.norm + hp.epsilon);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor2 delta(update.u[i].rows(), update.u[i].cols());
    const auto uv = update.u[i].values();
    auto dv = delta.values();
    auto theta = params[i].value.values();
    for (std::size_t j = 0; j < uv.size(); ++j) {
      dv[j] = hp.sam_rho == 0.0 ? 0.0 : scale * uv[j];
      theta[j] += dv[j];
    }
    pert.deltas.push_back(std::move(delta));
  }
  state.phase1_pending = true;
  return pert;
}

void zeta_step_phase2(nn::ParamSet& params, ZetaState& state, const ZetaHyperParams& hp,
                      const Perturbation& perturbation, StepDiagnostics& diag) {
  if (!state.phase1_pending || perturbation.step != state.t) {
    throw ProtocolError("zeta_step_phase2: no matching phase 1 for step " +
                        std::to_string(perturbation.step));
  }
  if (perturbation.deltas.size() != params.size()) {
    throw ShapeError("zeta_step_phase2: perturbation has the wrong number of tensors");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!perturbation.deltas[i].same_shape(params[i].value)) {
      throw ShapeError("zeta_step_phase2: perturbation shape mismatch for '" + params[i].name +
                       "'");
    }
  }
  check_state_shapes(params, state);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto theta = params[i].value.values();
    const auto dv = perturbation.deltas[i].values();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      theta[j] -= dv[j];
    }
  }
  check_finite_grads(params, "zeta_step_phase2");

  const std::uint64_t t = state.t;
  Grads g = copy_grads(params);
  const double sam_norm = clip_all(g, hp.clip_bound);
  centralize_matrices(g, params, hp);
  advance_moments(g, state.m, state.v, hp);
  const HybridUpdate update = hybrid_update(state.m, state.v, t, sam_norm, diag, hp);

  diag.eta_t = lr_schedule(t, hp);
  diag.update_norm = update.norm;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto theta = params[i].value.values();
    const auto uv = update.u[i].values();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      theta[j] -= diag.eta_t * uv[j];
    }
  }
  state.phase1_pending = false;
}

ZetaOptimizer::ZetaOptimizer(const nn::ParamSet& params, ZetaHyperParams hp)
    : hp_(hp), state_(ZetaState::for_params(params)) {
  hp_.validate();
}

Perturbation ZetaOptimizer::begin_step(nn::ParamSet& params, double loss) {
  return zeta_step_phase1(params, state_, hp_, loss, diag_);
}

void ZetaOptimizer::finish_step(nn::ParamSet& params, const Perturbation& perturbation) {
  zeta_step_phase2(params, state_, hp_, perturbation, diag_);
}

}  // namespace zeta_opt::optim
