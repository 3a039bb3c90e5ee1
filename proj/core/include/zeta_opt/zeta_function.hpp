#pragma once

#include <cstddef>

namespace zeta_opt::special {

struct ZetaEvalConfig {
  double target_rel_error = 1e-12;
  std::size_t max_terms = 10'000;

  /// Throws DomainError when target_rel_error <= 0 or max_terms < 10.
  void validate() const;
};

/// Riemann zeta function for real s > 1.
///
/// Euler-Maclaurin summation: an explicit partial sum of N terms, the
/// integral tail and Bernoulli corrections up to order 30. N starts at 10 and
/// doubles until the correction series reaches the tolerance before it starts
/// diverging. Deterministic and free of shared state.
///
/// Throws DomainError for s <= 1 (or NaN) and ConvergenceError when N would
/// exceed cfg.max_terms.
double zeta(double s, const ZetaEvalConfig& cfg = {});

}  // namespace zeta_opt::special
