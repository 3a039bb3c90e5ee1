#include "zeta_opt/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "zeta_opt/error.hpp"
#include "zeta_opt/random.hpp"

namespace zeta_opt::nn {

double finite_diff_check(ParamSet& params, const LossFn& loss_fn, const GradCheckOptions& opts) {
  if (!(opts.step > 0.0)) {
    throw DomainError("finite_diff_check: step must be > 0");
  }
  // (entry, offset) for every scalar, then a seeded subset if too many.
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t e = 0; e < params.size(); ++e) {
    for (std::size_t i = 0; i < params[e].value.size(); ++i) {
      coords.emplace_back(e, i);
    }
  }
  if (coords.size() > opts.max_coords) {
    Rng rng(opts.seed);
    rng.shuffle(std::span(coords));
    coords.resize(opts.max_coords);
    std::sort(coords.begin(), coords.end());
  }

  double worst = 0.0;
  for (const auto& [e, i] : coords) {
    double& x = params[e].value.values()[i];
    const double saved = x;
    x = saved + opts.step;
    const double up = loss_fn(params);
    x = saved - opts.step;
    const double down = loss_fn(params);
    x = saved;

    const double numeric = (up - down) / (2.0 * opts.step);
    const double analytic = params[e].grad.values()[i];
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

}  // namespace zeta_opt::nn
