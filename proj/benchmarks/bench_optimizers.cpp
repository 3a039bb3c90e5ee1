#include <benchmark/benchmark.h>

#include <vector>

#include "zeta_opt/adam.hpp"
#include "zeta_opt/loss.hpp"
#include "zeta_opt/mlp.hpp"
#include "zeta_opt/random.hpp"
#include "zeta_opt/zeta_optimizer.hpp"

namespace {

using namespace zeta_opt;

struct Problem {
  nn::ParamSet params;
  nn::Tensor2 x;
  std::vector<std::size_t> y;
};

// One batch of 64 samples through a 32-64-10 MLP.
Problem make_problem() {
  Problem p{nn::mlp_init({.input_dim = 32, .hidden_dim = 64, .num_classes = 10, .seed = 1}),
            nn::Tensor2(64, 32), std::vector<std::size_t>(64)};
  Rng rng(2);
  for (double& v : p.x.values()) {
    v = rng.normal();
  }
  for (std::size_t i = 0; i < p.y.size(); ++i) {
    p.y[i] = i % 10;
  }
  return p;
}

double forward_backward(Problem& p) {
  const auto acts = nn::mlp_forward_cached(p.params, p.x);
  const auto loss = nn::entropy_regularized_loss(acts.logits, p.y, {});
  nn::mlp_backward(p.params, p.x, acts, loss.dloss_dlogits);
  return loss.loss;
}

void BM_ForwardBackward(benchmark::State& state) {
  Problem p = make_problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_backward(p));
  }
}
BENCHMARK(BM_ForwardBackward);

void BM_AdamStep(benchmark::State& state) {
  Problem p = make_problem();
  auto adam = optim::AdamState::for_params(p.params);
  for (auto _ : state) {
    forward_backward(p);
    optim::adam_step(p.params, adam, {});
  }
}
BENCHMARK(BM_AdamStep);

// Full ZetA step including the second gradient evaluation at theta + perturbation.
void BM_ZetaStep(benchmark::State& state) {
  Problem p = make_problem();
  optim::ZetaHyperParams hp;
  hp.total_steps = 1'000'000;
  hp.sam_rho = static_cast<double>(state.range(0)) / 100.0;
  optim::ZetaOptimizer opt(p.params, hp);
  for (auto _ : state) {
    const double loss = forward_backward(p);
    const auto pert = opt.begin_step(p.params, loss);
    if (opt.needs_regrad()) {
      forward_backward(p);
    }
    opt.finish_step(p.params, pert);
  }
}
BENCHMARK(BM_ZetaStep)->Arg(0)->Arg(5);

}  // namespace
