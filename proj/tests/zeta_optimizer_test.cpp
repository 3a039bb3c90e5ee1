#include "zeta_opt/zeta_optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles/problems.hpp"
#include "support/scenarios.hpp"
#include "zeta_opt/error.hpp"
#include "zeta_opt/schedules.hpp"

namespace zeta_opt::optim {
namespace {

using nn::ParamSet;
using nn::Tensor2;

constexpr double kInf = std::numeric_limits<double>::infinity();

ParamSet single(Tensor2 value, Tensor2 grad, bool is_matrix) {
  ParamSet p;
  p.add("w", std::move(value), is_matrix).grad = std::move(grad);
  return p;
}

TEST(ClipGradients, ClampsElementwise) {
  auto p = single(Tensor2(1, 3), Tensor2::from_rows({{5.0, -0.3, -7.0}}), true);
  clip_gradients(p, 1.0);
  EXPECT_EQ(p[0].grad, Tensor2::from_rows({{1.0, -0.3, -1.0}}));
}

TEST(ClipGradients, InsideBoundIsBitIdentical) {
  const auto g = Tensor2::from_rows({{0.999, -1.0, 1e-300}, {0.1, 0.2, -0.7}});
  auto p = single(Tensor2(2, 3), g, true);
  clip_gradients(p, 1.0);
  EXPECT_EQ(p[0].grad, g);
}

TEST(CentralizeGradients, SubtractsRowMeans) {
  auto p = single(Tensor2(2, 3), Tensor2::from_rows({{1.0, 2.0, 3.0}, {-1.0, 0.0, 1.0}}), true);
  centralize_gradients(p);
  EXPECT_EQ(p[0].grad, Tensor2::from_rows({{-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}}));
}

TEST(CentralizeGradients, LeavesBiasesAlone) {
  auto p = single(Tensor2(1, 1), Tensor2::from_rows({{5.0}}), false);
  centralize_gradients(p);
  EXPECT_EQ(p[0].grad(0, 0), 5.0);
}

TEST(CosineBoost, ParallelVectors) {
  const std::vector<double> g{0.3, -0.4, 1.2};
  const auto r = cosine_boost(g, g, 1.0, 1e-8);
  EXPECT_NEAR(r.rho_t, 1.0, 1e-7);
  EXPECT_NEAR(r.boost, 1.2, 1e-7);
}

TEST(CosineBoost, OrthogonalAndOpposite) {
  const std::vector<double> g{1.0, 0.0};
  const std::vector<double> h{0.0, 2.0};
  const std::vector<double> neg{-1.0, 0.0};
  EXPECT_EQ(cosine_boost(g, h, 1.0, 1e-8).rho_t, 0.0);
  EXPECT_EQ(cosine_boost(g, h, 1.0, 1e-8).boost, 1.0);
  EXPECT_EQ(cosine_boost(g, neg, 1.0, 1e-8).rho_t, 0.0);
  EXPECT_EQ(cosine_boost(g, neg, 1.0, 1e-8).boost, 1.0);
}

TEST(CosineBoost, ZeroPreviousGradientGivesNoBoost) {
  const std::vector<double> g{1.0, 2.0};
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(cosine_boost(g, zero, 3.0, 1e-8).boost, 1.0);
}

TEST(CosineBoost, LengthMismatch) {
  const std::vector<double> g{1.0, 2.0};
  const std::vector<double> h{1.0};
  EXPECT_THROW(cosine_boost(g, h, 1.0, 1e-8), ShapeError);
}

TEST(UpdateDamping, FirstStepClosedForm) {
  ZetaHyperParams hp;
  hp.base_damp = 1.0;
  ZetaState state;
  state.t = 1;
  const double delta = update_damping(state, 1.0, 2.0, hp);
  EXPECT_NEAR(state.gnorm_ema, 0.1, 1e-16);
  EXPECT_NEAR(state.loss_ema, 0.2, 1e-16);
  EXPECT_NEAR(delta, 600.0 / 11.0, 1e-12);
}

TEST(UpdateDamping, ZeroScaleStaysZero) {
  ZetaHyperParams hp;
  hp.base_damp = 0.0;
  ZetaState state;
  for (std::uint64_t t = 1; t <= 20; ++t) {
    state.t = t;
    EXPECT_EQ(update_damping(state, 0.5 * t, 3.0, hp), 0.0);
  }
}

TEST(UpdateDamping, ShrinksWithLossEma) {
  ZetaHyperParams hp;
  double prev = kInf;
  for (double loss : {1.0, 2.0, 5.0, 50.0}) {
    ZetaState state;
    state.t = 1;
    const double delta = update_damping(state, 1.0, loss, hp);
    EXPECT_LT(delta, prev);
    prev = delta;
  }
}

TEST(UpdateDamping, RequiresIncrementedCounter) {
  ZetaState state;
  EXPECT_THROW(update_damping(state, 1.0, 1.0, ZetaHyperParams{}), ProtocolError);
}

TEST(Phase1, ZeroRadiusLeavesThetaUnchanged) {
  auto p = single(Tensor2::from_rows({{0.5, -0.5}}), Tensor2::from_rows({{0.2, 0.7}}), true);
  const auto before = p[0].value;
  ZetaHyperParams hp;
  hp.sam_rho = 0.0;
  auto state = ZetaState::for_params(p);
  StepDiagnostics diag;
  const auto pert = zeta_step_phase1(p, state, hp, 1.0, diag);
  EXPECT_EQ(p[0].value, before);
  for (double x : pert.deltas[0].values()) {
    EXPECT_EQ(x, 0.0);
  }
  EXPECT_EQ(state.t, 1u);
}

TEST(Phase1, PerturbationIsUnitDirectionTimesRadius) {
  // With only the zeta branch and no centralization, u is parallel to g.
  auto p = single(Tensor2(1, 2), Tensor2::from_rows({{3.0, 4.0}}), true);
  ZetaHyperParams hp;
  hp.adam_mix = 0.0;
  hp.centralize = false;
  hp.clip_bound = kInf;
  hp.sam_rho = 0.1;
  hp.eta = 1.0;
  hp.epsilon = 1e-16;
  auto state = ZetaState::for_params(p);
  StepDiagnostics diag;
  const auto pert = zeta_step_phase1(p, state, hp, 1.0, diag);
  EXPECT_NEAR(p[0].value(0, 0), 0.06, 1e-14);
  EXPECT_NEAR(p[0].value(0, 1), 0.08, 1e-14);
  EXPECT_EQ(pert.deltas[0], p[0].value);
}

TEST(Phase1, FullAdamMixGivesAdamDirection) {
  auto p = single(Tensor2(1, 3), Tensor2::from_rows({{0.1, -0.02, 0.5}}), false);
  ZetaHyperParams hp;
  hp.adam_mix = 1.0;
  hp.sam_rho = 0.0;
  hp.lr_schedule = LrSchedule::constant;
  hp.weight_decay = 0.0;
  auto state = ZetaState::for_params(p);
  StepDiagnostics diag;
  const auto pert = zeta_step_phase1(p, state, hp, 1.0, diag);
  zeta_step_phase2(p, state, hp, pert, diag);
  // t = 1: m_hat = g, v_hat = g^2, so u = g / (|g| + eps).
  const double g[] = {0.1, -0.02, 0.5};
  double norm = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double u = g[j] / (std::abs(g[j]) + hp.epsilon);
    norm += u * u;
    EXPECT_EQ(p[0].value(0, j), -hp.eta * u);
  }
  EXPECT_DOUBLE_EQ(diag.update_norm, std::sqrt(norm));
}

TEST(Phase1, RejectsNonFiniteGradientsByName) {
  ParamSet p;
  p.add("fc1.weight", Tensor2(2, 2), true);
  p.add("fc1.bias", Tensor2(2, 1), false).grad(1, 0) = std::nan("");
  auto state = ZetaState::for_params(p);
  StepDiagnostics diag;
  try {
    zeta_step_phase1(p, state, ZetaHyperParams{}, 1.0, diag);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("fc1.bias"), std::string::npos);
  }
}

TEST(StepProtocol, PhaseOrderViolations) {
  auto p = single(Tensor2(1, 2), Tensor2::from_rows({{0.1, 0.2}}), true);
  ZetaHyperParams hp;
  auto state = ZetaState::for_params(p);
  StepDiagnostics diag;
  EXPECT_THROW(zeta_step_phase2(p, state, hp, Perturbation{1, {Tensor2(1, 2)}}, diag),
               ProtocolError);
  const auto pert = zeta_step_phase1(p, state, hp, 1.0, diag);
  EXPECT_THROW(zeta_step_phase1(p, state, hp, 1.0, diag), ProtocolError);
  EXPECT_THROW(zeta_step_phase2(p, state, hp, Perturbation{2, pert.deltas}, diag), ProtocolError);
  EXPECT_THROW(zeta_step_phase2(p, state, hp, Perturbation{1, {Tensor2(2, 1)}}, diag),
               ShapeError);
  zeta_step_phase2(p, state, hp, pert, diag);
  EXPECT_THROW(zeta_step_phase2(p, state, hp, pert, diag), ProtocolError);
}

TEST(StepProtocol, DescendsOnQuadratic) {
  auto p = single(Tensor2::from_rows({{1.0}}), Tensor2::from_rows({{1.0}}), false);
  ZetaOptimizer opt(p, ZetaHyperParams{});
  const auto pert = opt.begin_step(p, 0.5);
  p[0].grad(0, 0) = p[0].value(0, 0);
  opt.finish_step(p, pert);
  EXPECT_LT(p[0].value(0, 0), 1.0);
  EXPECT_EQ(opt.state().t, 1u);
}

TEST(ZetaDamping, LargerGradientNormShrinksTheFactor) {
  ZetaHyperParams hp;
  hp.adam_mix = 0.0;
  hp.centralize = false;
  hp.clip_bound = kInf;
  hp.sam_rho = 0.0;
  const auto norm_for = [&](double scale, StepDiagnostics& diag) {
    auto p = single(Tensor2(1, 2), Tensor2::from_rows({{0.3 * scale, -0.4 * scale}}), false);
    auto state = ZetaState::for_params(p);
    zeta_step_phase1(p, state, hp, 1.0, diag);
    return diag.update_norm;
  };
  StepDiagnostics d1;
  StepDiagnostics d2;
  const double u1 = norm_for(1.0, d1);
  const double u2 = norm_for(2.0, d2);
  // m_hat doubles; the remaining factor must shrink.
  const double factor_ratio = (u2 / 2.0) / u1;
  EXPECT_LT(factor_ratio, 1.0);
  const double expected = (std::pow(0.5, d1.s_t - 1.0) + hp.epsilon) /
                          (std::pow(1.0, d1.s_t - 1.0) + hp.epsilon);
  EXPECT_NEAR(factor_ratio, expected, 1e-12);
}

TEST(Transcription, MatchesScriptedStepsForBothLayouts) {
  for (bool one_row : {true, false}) {
    for (double gamma : {0.0, 0.05}) {
      testing::ScriptedZetaConfig c;
      c.eta = 0.05;
      c.horizon = 40;
      c.gamma = gamma;
      c.one_matrix_row = one_row;
      EXPECT_LE(testing::transcription_gap(c, 50), 1e-12)
          << "one_row=" << one_row << " gamma=" << gamma;
    }
  }
}

TEST(Transcription, DefaultsOverFiftySteps) {
  EXPECT_LE(testing::transcription_gap(testing::ScriptedZetaConfig{}, 50), 1e-12);
}

TEST(Transcription, DetectsSmallDeviations) {
  const testing::ScriptedZetaConfig c;
  EXPECT_GT(testing::transcription_gap(c, 50, [](ZetaHyperParams& hp) { hp.sam_rho = 0.049; }),
            1e-10);
  EXPECT_GT(testing::transcription_gap(c, 50, [](ZetaHyperParams& hp) { hp.centralize = false; }),
            1e-10);
  EXPECT_GT(testing::transcription_gap(c, 50, [](ZetaHyperParams& hp) { hp.base_damp = 0.2; }),
            1e-12);
}

TEST(AdamEquivalence, FullMixMatchesAdam) {
  EXPECT_LE(testing::adam_equivalence_gap(20, 200, 11), 1e-12);
}

TEST(Invariants, HoldOverLogisticTraining) {
  const auto problem = testing::LogisticProblem::make(128, 6, 3);
  auto p = problem.initial_params();
  ZetaHyperParams hp;
  hp.eta = 0.05;
  hp.total_steps = 60;
  ZetaOptimizer opt(p, hp);
  for (std::uint64_t step = 1; step <= 150; ++step) {
    const double loss = problem.loss_and_grad(p);
    const auto pert = opt.begin_step(p, loss);
    problem.loss_and_grad(p);
    opt.finish_step(p, pert);

    const auto& st = opt.state();
    const auto& d = opt.diagnostics();
    ASSERT_EQ(st.t, step);
    EXPECT_GE(d.s_t, hp.s_min);
    EXPECT_LE(d.s_t, hp.s_max);
    EXPECT_GE(d.boost, 1.0);
    EXPECT_LE(d.boost, 1.0 + 0.2 * d.delta_t);
    // "w" is a 1 x 6 matrix stored first in prev_grad_flat.
    double row_sum = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      row_sum += st.prev_grad_flat[j];
    }
    EXPECT_LE(std::abs(row_sum), 1e-12);
    for (const auto& v : st.v) {
      for (double x : v.values()) {
        EXPECT_GE(x, 0.0);
      }
    }
  }
}

TEST(Convergence, QuadraticBowl) {
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const auto r = testing::quadratic_convergence(128, 2000, seed);
    EXPECT_LT(r.adam_distance, 1e-2) << seed;
    EXPECT_LT(r.zeta_distance, 1e-2) << seed;
  }
}

TEST(Convergence, TravelIsBoundedPerCoordinate) {
  // The Adam half of the mix moves each coordinate by at most about
  // 0.5 * eta_t per step, so a single coordinate cannot cover a unit offset.
  const auto r = testing::quadratic_convergence(1, 2000, 5);
  EXPECT_GT(r.zeta_distance, 0.2);
}

TEST(HyperParams, Validation) {
  ZetaHyperParams hp;
  EXPECT_NO_THROW(hp.validate());
  hp.s_min = 1.0;
  EXPECT_THROW(hp.validate(), DomainError);
  hp = {};
  hp.s_max = 2.5;
  EXPECT_THROW(hp.validate(), DomainError);
  hp = {};
  hp.total_steps = 0;
  EXPECT_THROW(hp.validate(), DomainError);
  hp = {};
  hp.adam_mix = 1.5;
  EXPECT_THROW(hp.validate(), DomainError);
}

}  // namespace
}  // namespace zeta_opt::optim
