#include "zeta_opt/selftest.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "zeta_opt/adam.hpp"
#include "zeta_opt/batching.hpp"
#include "zeta_opt/datasets.hpp"
#include "zeta_opt/error.hpp"
#include "zeta_opt/grad_check.hpp"
#include "zeta_opt/loss.hpp"
#include "zeta_opt/mlp.hpp"
#include "zeta_opt/random.hpp"
#include "zeta_opt/schedules.hpp"
#include "zeta_opt/zeta_function.hpp"
#include "zeta_opt/zeta_optimizer.hpp"

namespace zeta_opt::harness {
namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

bool zeta_values() {
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (std::abs(special::zeta(2.0) - pi2_6) > 1e-10) {
    return false;
  }
  if (std::abs(special::zeta(1.5) - 2.612) > 5e-4) {
    return false;
  }
  double prev = INFINITY;
  for (double s = 1.05; s <= 4.0; s += 0.05) {
    const double z = special::zeta(s);
    if (!(z > 1.0 && z < prev)) {
      return false;
    }
    prev = z;
  }
  return true;
}

bool schedule_bounds() {
  optim::ZetaHyperParams hp;
  hp.total_steps = 400;
  for (std::uint64_t t = 0; t <= 2 * hp.total_steps; ++t) {
    const double s = optim::s_schedule(t, hp);
    if (s < hp.s_min || s > hp.s_max || s != optim::s_schedule(t + hp.total_steps, hp)) {
      return false;
    }
    if (t <= hp.total_steps) {
      const double lr = optim::lr_schedule(t, hp);
      if (lr < 0.0 || lr > hp.eta) {
        return false;
      }
    }
  }
  return optim::s_schedule(0, hp) == hp.s_min && optim::s_schedule(200, hp) == hp.s_max &&
         optim::lr_schedule(hp.total_steps, hp) == 0.0;
}

bool softmax_rows() {
  Rng rng(11);
  nn::Tensor2 logits(20, 7);
  for (double& x : logits.values()) {
    x = rng.uniform(-50.0, 50.0);
  }
  const auto p = nn::softmax(logits);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    double sum = 0.0;
    for (double x : p.row(r)) {
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      return false;
    }
  }
  return true;
}

bool mlp_gradients() {
  auto params = nn::mlp_init({.input_dim = 5, .hidden_dim = 7, .num_classes = 4, .seed = 3});
  Rng rng(5);
  nn::Tensor2 x(6, 5);
  for (double& v : x.values()) {
    v = rng.normal();
  }
  const std::vector<std::size_t> y{0, 1, 2, 3, 1, 2};
  const nn::LossConfig cfg{.entropy_weight = 0.01};
  const auto loss_of = [&](const nn::ParamSet& p) {
    return nn::entropy_regularized_loss(nn::mlp_forward(p, x), y, cfg).loss;
  };
  const auto res = nn::entropy_regularized_loss(nn::mlp_forward(params, x), y, cfg);
  nn::mlp_backward(params, x, res.dloss_dlogits);
  return nn::finite_diff_check(params, loss_of, 1e-6) <= 1e-6;
}

bool adam_equivalence() {
  Rng rng(21);
  const std::size_t n = 64;
  const std::size_t d = 8;
  nn::Tensor2 x(n, d);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      x(i, j) = rng.normal();
    }
    y[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
  }
  nn::ParamSet init;
  init.add("w", nn::Tensor2(1, d), true);
  init.add("b", nn::Tensor2(1, 1), false);
  const auto set_grads = [&](nn::ParamSet& p) {
    auto& w = p.at("w");
    auto& b = p.at("b");
    w.grad.fill(0.0);
    b.grad.fill(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = b.value(0, 0);
      for (std::size_t j = 0; j < d; ++j) {
        z += w.value(0, j) * x(i, j);
      }
      const double r = (1.0 / (1.0 + std::exp(-z)) - y[i]) / static_cast<double>(n);
      for (std::size_t j = 0; j < d; ++j) {
        w.grad(0, j) += r * x(i, j);
      }
      b.grad(0, 0) += r;
    }
  };

  optim::ZetaHyperParams zhp;
  zhp.adam_mix = 1.0;
  zhp.sam_rho = 0.0;
  zhp.base_damp = 0.0;
  zhp.clip_bound = std::numeric_limits<double>::infinity();
  zhp.centralize = false;
  zhp.weight_decay = 0.0;
  zhp.lr_schedule = optim::LrSchedule::constant;
  zhp.eta = 0.01;
  const optim::AdamHyperParams ahp{.eta = 0.01};

  nn::ParamSet pz = init;
  nn::ParamSet pa = init;
  optim::ZetaOptimizer zeta(pz, zhp);
  auto adam = optim::AdamState::for_params(pa);
  for (int step = 0; step < 100; ++step) {
    set_grads(pz);
    const auto pert = zeta.begin_step(pz, 1.0);
    zeta.finish_step(pz, pert);
    set_grads(pa);
    optim::adam_step(pa, adam, ahp);
  }
  const auto a = pz.flatten_values();
  const auto b = pa.flatten_values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12) {
      return false;
    }
  }
  return true;
}

bool label_noise() {
  const auto ds = data::make_blobs(500, 3, 5, 1.0, 9);
  const auto noisy = data::inject_label_noise(ds, 1.0, 4);
  if (noisy.flipped.size() != ds.size()) {
    return false;
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (noisy.dataset.labels[i] == ds.labels[i]) {
      return false;
    }
  }
  return true;
}

bool batch_permutation() {
  const auto ds = data::make_blobs(130, 2, 3, 1.0, 1);
  const data::BatchPlan plan{.batch_size = 64, .shuffle_seed = 8, .drop_last = false};
  const auto batches = data::iterate_batches(ds, plan, 1);
  std::vector<std::size_t> counts(3, 0);
  std::size_t total = 0;
  for (const auto& b : batches) {
    for (std::size_t y : b.labels) {
      ++counts[y];
    }
    total += b.labels.size();
  }
  return batches.size() == 3 && total == ds.size() && counts == ds.class_counts();
}

}  // namespace

bool run_selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"zeta values and monotonicity", zeta_values},
      {"schedule bounds and endpoints", schedule_bounds},
      {"softmax rows sum to one", softmax_rows},
      {"mlp entropy-loss gradients vs finite differences", mlp_gradients},
      {"zeta optimizer reduces to adam at the mix boundary", adam_equivalence},
      {"label noise never maps a label to itself", label_noise},
      {"batches form a permutation of the dataset", batch_permutation},
  };
  bool all = true;
  for (const auto& check : checks) {
    bool ok = false;
    std::string note;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << check.name << note << '\n';
    all = all && ok;
  }
  return all;
}

}  // namespace zeta_opt::harness
