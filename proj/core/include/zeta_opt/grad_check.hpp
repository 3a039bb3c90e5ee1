#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "zeta_opt/tensor.hpp"

namespace zeta_opt::nn {

using LossFn = std::function<double(const ParamSet&)>;

struct GradCheckOptions {
  double step = 1e-6;
  /// Coordinates checked; every coordinate is checked when the set is smaller.
  std::size_t max_coords = 200;
  std::uint64_t seed = 0;
};

/// Compares the gradients stored in params against central differences of
/// loss_fn. Returns the worst relative error, using
/// max(|analytic|, |numeric|, 1e-8) as denominator. Parameter values are
/// restored before returning.
double finite_diff_check(ParamSet& params, const LossFn& loss_fn, const GradCheckOptions& opts);

inline double finite_diff_check(ParamSet& params, const LossFn& loss_fn, double step) {
  return finite_diff_check(params, loss_fn, GradCheckOptions{.step = step});
}

}  // namespace zeta_opt::nn
