#include "zeta_opt/schedules.hpp"

#include <gtest/gtest.h>

#include "zeta_opt/zeta_optimizer.hpp"

namespace zeta_opt::optim {
namespace {

ZetaHyperParams with_horizon(std::uint64_t T) {
  ZetaHyperParams hp;
  hp.total_steps = T;
  return hp;
}

TEST(SSchedule, EndpointsAndMidpoint) {
  const auto hp = with_horizon(400);
  EXPECT_EQ(s_schedule(0, hp), hp.s_min);
  EXPECT_EQ(s_schedule(200, hp), hp.s_max);
  EXPECT_DOUBLE_EQ(s_schedule(100, hp), (hp.s_min + hp.s_max) / 2);
  EXPECT_DOUBLE_EQ(s_schedule(300, hp), (hp.s_min + hp.s_max) / 2);
  EXPECT_EQ(s_schedule(400, hp), hp.s_min);
}

TEST(SSchedule, BoundedAndPeriodic) {
  for (std::uint64_t T : {1u, 2u, 7u, 50u, 333u}) {
    const auto hp = with_horizon(T);
    for (std::uint64_t t = 0; t < 3 * T + 5; ++t) {
      const double s = s_schedule(t, hp);
      EXPECT_GE(s, hp.s_min);
      EXPECT_LE(s, hp.s_max);
      EXPECT_EQ(s, s_schedule(t + T, hp));
    }
  }
}

TEST(SSchedule, LinearRamp) {
  auto hp = with_horizon(8);
  hp.s_min = 1.25;
  hp.s_max = 1.75;
  // Steps of 2/8 of the range on the way up, then back down.
  const double expected[] = {1.25, 1.375, 1.5, 1.625, 1.75, 1.625, 1.5, 1.375};
  for (std::uint64_t t = 0; t < 8; ++t) {
    EXPECT_EQ(s_schedule(t, hp), expected[t]) << t;
  }
}

TEST(LrSchedule, Endpoints) {
  auto hp = with_horizon(1000);
  hp.weight_decay = 0.0;
  EXPECT_EQ(lr_schedule(0, hp), hp.eta);
  hp.weight_decay = 0.01;
  EXPECT_EQ(lr_schedule(0, hp), hp.eta * (1.0 - hp.weight_decay * hp.eta));
  EXPECT_EQ(lr_schedule(1000, hp), 0.0);
}

TEST(LrSchedule, HalfwayWithWeightDecayCorrection) {
  auto hp = with_horizon(1000);
  hp.eta = 0.0015;
  hp.weight_decay = 0.01;
  EXPECT_NEAR(lr_schedule(500, hp), 0.0007499943749999999, 1e-18);
}

TEST(LrSchedule, BoundedAndMonotone) {
  const auto hp = with_horizon(250);
  double prev = lr_schedule(0, hp);
  for (std::uint64_t t = 1; t <= 250; ++t) {
    const double lr = lr_schedule(t, hp);
    EXPECT_GE(lr, 0.0);
    EXPECT_LE(lr, hp.eta);
    EXPECT_LE(lr, prev);
    prev = lr;
  }
}

TEST(LrSchedule, ConstantMode) {
  auto hp = with_horizon(10);
  hp.lr_schedule = LrSchedule::constant;
  hp.weight_decay = 0.0;
  for (std::uint64_t t = 0; t <= 10; ++t) {
    EXPECT_EQ(lr_schedule(t, hp), hp.eta);
  }
}

}  // namespace
}  // namespace zeta_opt::optim
