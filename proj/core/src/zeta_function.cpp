#include "zeta_opt/zeta_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "zeta_opt/error.hpp"

namespace zeta_opt::special {
namespace {

// B_{2k} as numerator / denominator for k = 1..15.
constexpr std::array<std::array<double, 2>, 15> kBernoulli = {{
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
}};

// B_{2k} / (2k)!
const std::array<double, 15>& bernoulli_over_factorial() {
  static const std::array<double, 15> table = [] {
    std::array<double, 15> out{};
    double factorial = 1.0;
    for (std::size_t k = 1; k <= out.size(); ++k) {
      factorial *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
      out[k - 1] = kBernoulli[k - 1][0] / kBernoulli[k - 1][1] / factorial;
    }
    return out;
  }();
  return table;
}

struct Attempt {
  bool converged = false;
  double value = 0.0;
};

Attempt euler_maclaurin(double s, std::size_t n_terms, double tol) {
  const double n = static_cast<double>(n_terms);

  // Smallest terms first.
  double head = 0.0;
  for (std::size_t i = n_terms - 1; i >= 1; --i) {
    head += std::pow(static_cast<double>(i), -s);
  }

  const double n_pow = std::pow(n, 1.0 - s);  // N^{1-s}
  double total = head + n_pow / (s - 1.0) + 0.5 * n_pow / n;

  const auto& coeffs = bernoulli_over_factorial();
  const double inv_n2 = 1.0 / (n * n);
  double rising = s;          // s (s+1) ... (s+2k-2)
  double power = n_pow / (n * n);  // N^{1-s-2k} at k = 1
  double prev_mag = INFINITY;
  for (std::size_t k = 1; k <= coeffs.size(); ++k) {
    if (k > 1) {
      const double a = s + static_cast<double>(2 * k - 3);
      rising *= a * (a + 1.0);
      power *= inv_n2;
    }
    const double term = coeffs[k - 1] * rising * power;
    const double mag = std::abs(term);
    if (mag > prev_mag) {
      // Asymptotic series started diverging before reaching tol.
      return {};
    }
    total += term;
    if (mag <= tol * std::abs(total)) {
      return {true, total};
    }
    prev_mag = mag;
  }
  return {};
}

}  // namespace

void ZetaEvalConfig::validate() const {
  if (!(target_rel_error > 0.0)) {
    throw DomainError("zeta: target_rel_error must be > 0");
  }
  if (max_terms < 10) {
    throw DomainError("zeta: max_terms must be >= 10");
  }
}

double zeta(double s, const ZetaEvalConfig& cfg) {
  cfg.validate();
  if (!(s > 1.0)) {
    throw DomainError("zeta: s must be > 1, got " + std::to_string(s));
  }
  if (std::isinf(s)) {
    return 1.0;
  }
  const double tol = cfg.target_rel_error;
  for (std::size_t n = 10; n <= cfg.max_terms; n *= 2) {
    const Attempt attempt = euler_maclaurin(s, n, tol);
    if (attempt.converged) {
      return attempt.value;
    }
  }
  throw ConvergenceError("zeta: tolerance " + std::to_string(cfg.target_rel_error) +
                         " not reached within " + std::to_string(cfg.max_terms) + " terms at s=" +
                         std::to_string(s));
}

}  // namespace zeta_opt::special
