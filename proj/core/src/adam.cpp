#include "zeta_opt/adam.hpp"

#include <cmath>
#include <string>

#include "zeta_opt/error.hpp"

namespace zeta_opt::optim {

void AdamHyperParams::validate() const {
  if (!(eta >= 0.0 && std::isfinite(eta)) || !(epsilon > 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) ||
      !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw DomainError("AdamHyperParams: need eta >= 0, epsilon > 0, beta1/beta2 in [0, 1)");
  }
}

AdamState AdamState::for_params(const nn::ParamSet& params) {
  AdamState state;
  for (const auto& e : params) {
    state.m.emplace_back(e.value.rows(), e.value.cols());
    state.v.emplace_back(e.value.rows(), e.value.cols());
  }
  return state;
}

AdamDiagnostics adam_step(nn::ParamSet& params, AdamState& state, const AdamHyperParams& hp) {
  hp.validate();
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw ShapeError("adam_step: state does not match the parameter set");
  }
  for (const auto& e : params) {
    if (!e.grad.all_finite()) {
      throw NumericError("adam_step: non-finite gradient in parameter '" + e.name + "'");
    }
  }

  state.t += 1;
  const double td = static_cast<double>(state.t);
  const double m_corr = 1.0 - std::pow(hp.beta1, td);
  const double v_corr = 1.0 - std::pow(hp.beta2, td);

  AdamDiagnostics diag;
  double gsum = 0.0;
  double usum = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto theta = params[i].value.values();
    const auto g = params[i].grad.values();
    auto m = state.m[i].values();
    auto v = state.v[i].values();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      m[j] = hp.beta1 * m[j] + (1.0 - hp.beta1) * g[j];
      v[j] = hp.beta2 * v[j] + (1.0 - hp.beta2) * g[j] * g[j];
      const double m_hat = m[j] / m_corr;
      const double v_hat = v[j] / v_corr;
      const double u = m_hat / (std::sqrt(v_hat) + hp.epsilon);
      theta[j] -= hp.eta * u;
      gsum += g[j] * g[j];
      usum += u * u;
    }
  }
  diag.grad_norm = std::sqrt(gsum);
  diag.update_norm = std::sqrt(usum);
  return diag;
}

}  // namespace zeta_opt::optim
