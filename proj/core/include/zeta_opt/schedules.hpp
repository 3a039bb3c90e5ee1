#pragma once

#include <cstdint>

namespace zeta_opt::optim {

struct ZetaHyperParams;

/// Triangle wave between s_min and s_max with period T: s_min at t = 0 (mod T),
/// s_max at t = T/2.
double s_schedule(std::uint64_t t, const ZetaHyperParams& hp);

/// Cosine-annealed learning rate with a single weight-decay correction:
///   eta_c = eta * 0.5 * (1 + cos(pi t / T)),  eta_t = eta_c * (1 - wd * eta_c).
/// With LrSchedule::constant, eta_c = eta.
double lr_schedule(std::uint64_t t, const ZetaHyperParams& hp);

}  // namespace zeta_opt::optim
