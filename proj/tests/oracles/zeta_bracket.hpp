#pragma once

// Brute-force bounds on the Riemann zeta function, independent of the
// library's evaluator: an explicit partial sum plus integral bounds on the
// tail sum_{n>N} n^{-s}.

#include <cmath>
#include <cstddef>

namespace zeta_opt::testing {

struct Bracket {
  double lo;
  double hi;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// Antiderivative tail: integral_a^inf x^{-s} dx.
inline double tail_integral(double a, double s) { return std::pow(a, 1.0 - s) / (s - 1.0); }

inline double partial_sum(double s, std::size_t n_terms) {
  double sum = 0.0;
  for (std::size_t n = n_terms; n >= 1; --n) {
    sum += std::pow(static_cast<double>(n), -s);
  }
  return sum;
}

// S_N + integral_{N+1}^inf  <=  zeta(s)  <=  S_N + integral_N^inf
inline Bracket integral_bracket(double s, std::size_t n_terms) {
  const double head = partial_sum(s, n_terms);
  const double n = static_cast<double>(n_terms);
  return {head + tail_integral(n + 1.0, s), head + tail_integral(n, s)};
}

// Smallest N whose integral bracket is narrower than `width`.
inline std::size_t terms_for_width(double s, double width) {
  std::size_t n = 1;
  while (tail_integral(static_cast<double>(n), s) - tail_integral(static_cast<double>(n + 1), s) >=
         width) {
    n *= 2;
  }
  std::size_t lo = n / 2;
  while (lo + 1 < n) {
    const std::size_t m = (lo + n) / 2;
    const double w = tail_integral(static_cast<double>(m), s) -
                     tail_integral(static_cast<double>(m + 1), s);
    (w < width ? n : lo) = m;
  }
  return n;
}

// Tighter bounds for the convex summand x^{-s}:
//   trapezoid:     sum_{n>N} f(n) >= integral_N^inf f - f(N)/2
//   midpoint rule: sum_{n>N} f(n) <= integral_{N+1/2}^inf f
// Width is about s N^{-s-1} / 8.
inline Bracket convex_bracket(double s, std::size_t n_terms) {
  const double head = partial_sum(s, n_terms);
  const double n = static_cast<double>(n_terms);
  return {head + tail_integral(n, s) - 0.5 * std::pow(n, -s), head + tail_integral(n + 0.5, s)};
}

// Convex bracket with relative width below rel_width.
inline Bracket zeta_oracle(double s, double rel_width = 2e-11) {
  // zeta(s) > 1, so an absolute width of rel_width suffices.
  const double n = std::pow(s / (8.0 * rel_width), 1.0 / (s + 1.0));
  return convex_bracket(s, static_cast<std::size_t>(std::ceil(n)) + 1);
}

}  // namespace zeta_opt::testing
