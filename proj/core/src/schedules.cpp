#include "zeta_opt/schedules.hpp"

#include <cmath>
#include <numbers>

#include "zeta_opt/zeta_optimizer.hpp"

namespace zeta_opt::optim {

double s_schedule(std::uint64_t t, const ZetaHyperParams& hp) {
  const double period = static_cast<double>(hp.total_steps);
  const double phase = static_cast<double>(t % hp.total_steps) / period;
  const double ramp = 1.0 - std::abs(1.0 - 2.0 * phase);
  return hp.s_min + (hp.s_max - hp.s_min) * ramp;
}

double lr_schedule(std::uint64_t t, const ZetaHyperParams& hp) {
  double eta_c = hp.eta;
  if (hp.lr_schedule == LrSchedule::cosine) {
    const double ratio = static_cast<double>(t) / static_cast<double>(hp.total_steps);
    eta_c = hp.eta * (0.5 * (1.0 + std::cos(std::numbers::pi * ratio)));
  }
  // The correction uses eta_c in place of eta_t (one fixed-point substitution).
  return eta_c * (1.0 - hp.weight_decay * eta_c);
}

}  // namespace zeta_opt::optim
