#include "zeta_opt/grad_check.hpp"

#include <gtest/gtest.h>

#include "zeta_opt/error.hpp"

namespace zeta_opt::nn {
namespace {

ParamSet quadratic_params() {
  ParamSet p;
  p.add("a", Tensor2::from_rows({{0.3, -1.2, 2.5}, {0.7, 0.0, -0.4}}), true);
  p.add("b", Tensor2::from_rows({{1.5}, {-2.0}}), false);
  for (auto& e : p) {
    e.grad = e.value;  // gradient of 0.5 |theta|^2
  }
  return p;
}

double half_square_norm(const ParamSet& p) {
  double sum = 0.0;
  for (const auto& e : p) {
    for (double x : e.value.values()) {
      sum += 0.5 * x * x;
    }
  }
  return sum;
}

TEST(FiniteDiffCheck, ExactForQuadratic) {
  auto p = quadratic_params();
  EXPECT_LE(finite_diff_check(p, half_square_norm, 1e-4), 1e-9);
}

TEST(FiniteDiffCheck, DetectsCorruptedGradient) {
  auto p = quadratic_params();
  p[0].grad(0, 1) += 0.1;
  EXPECT_GT(finite_diff_check(p, half_square_norm, 1e-4), 1e-2);
}

TEST(FiniteDiffCheck, RestoresParameters) {
  auto p = quadratic_params();
  const auto before = p.flatten_values();
  finite_diff_check(p, half_square_norm, 1e-3);
  EXPECT_EQ(p.flatten_values(), before);
}

TEST(FiniteDiffCheck, SamplesLargeParameterSets) {
  ParamSet p;
  p.add("big", Tensor2(40, 40, 0.5), true);
  p[0].grad = p[0].value;
  std::size_t calls = 0;
  const auto counting = [&](const ParamSet& q) {
    ++calls;
    return half_square_norm(q);
  };
  EXPECT_LE(finite_diff_check(p, counting, {.step = 1e-4, .max_coords = 250}), 1e-9);
  EXPECT_EQ(calls, 500u);
}

TEST(FiniteDiffCheck, RejectsNonPositiveStep) {
  auto p = quadratic_params();
  EXPECT_THROW(finite_diff_check(p, half_square_norm, 0.0), DomainError);
}

}  // namespace
}  // namespace zeta_opt::nn
