#include "zeta_opt/experiment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zeta_opt/metrics_csv.hpp"

namespace zeta_opt::harness {
namespace {

namespace fs = std::filesystem;

ExperimentConfig small_config(OptimizerKind opt) {
  ExperimentConfig cfg;
  cfg.run_name = "small";
  cfg.seed = 3;
  cfg.epochs = 2;
  cfg.data.n = 500;
  cfg.data.dim = 8;
  cfg.data.classes = 4;
  cfg.hidden_dim = 16;
  cfg.batch.batch_size = 32;
  cfg.optimizer = opt;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("zeta_opt_exp_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(RunExperiment, StepAccounting) {
  for (auto opt : {OptimizerKind::zeta, OptimizerKind::adam}) {
    const auto cfg = small_config(opt);
    const auto res = run_experiment(cfg);
    // 500 samples, 100 held out: 400 / 32 -> 13 batches per epoch.
    EXPECT_EQ(res.summary.n_train, 400u);
    EXPECT_EQ(res.summary.total_steps, 26u);
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::uint64_t last_step = 0;
    for (const auto& r : res.records) {
      if (r.split == SplitKind::train) {
        ++train_rows;
        EXPECT_EQ(r.step, last_step + 1);
        last_step = r.step;
      } else {
        ++test_rows;
      }
    }
    EXPECT_EQ(train_rows, 26u);
    EXPECT_EQ(test_rows, 2u);
  }
}

TEST(RunExperiment, ByteIdenticalRerun) {
  const auto dir = fresh_dir("rerun");
  const auto cfg = small_config(OptimizerKind::zeta);
  run_experiment(cfg, dir / "a.csv");
  run_experiment(cfg, dir / "b.csv");
  const auto a = slurp(dir / "a.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  fs::remove_all(dir);
}

TEST(RunExperiment, ZetaRowsRespectInvariants) {
  const auto cfg = small_config(OptimizerKind::zeta);
  const auto dir = fresh_dir("invariants");
  run_experiment(cfg, dir / "m.csv");
  const auto rows = read_metrics_csv(dir / "m.csv");
  for (const auto& r : rows) {
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    if (r.split != SplitKind::train) {
      continue;
    }
    ASSERT_TRUE(r.s_t && r.boost);
    EXPECT_GE(*r.s_t, cfg.zeta.s_min);
    EXPECT_LE(*r.s_t, cfg.zeta.s_max);
    EXPECT_GE(*r.boost, 1.0);
  }
  fs::remove_all(dir);
}

TEST(RunExperiment, SeparableBlobsAreLearned) {
  for (auto opt : {OptimizerKind::zeta, OptimizerKind::adam}) {
    auto cfg = small_config(opt);
    cfg.data.spread = 1e-3;
    cfg.epochs = 5;
    cfg.adam.eta = 0.01;
    cfg.zeta.eta = 0.015;
    const auto res = run_experiment(cfg);
    EXPECT_EQ(res.summary.final_test_accuracy, 1.0) << to_string(opt);
  }
}

TEST(RunExperiment, NoiseOnlyTouchesTraining) {
  auto cfg = small_config(OptimizerKind::adam);
  const auto clean = prepare_data(cfg);
  cfg.data.noise_rate = 0.3;
  const auto noisy = prepare_data(cfg);
  EXPECT_EQ(clean.test.labels, noisy.test.labels);
  EXPECT_EQ(clean.train.features, noisy.train.features);
  EXPECT_NE(clean.train.labels, noisy.train.labels);
}

TEST(RunComparison, SharedInitAndOutputs) {
  auto cfg = small_config(OptimizerKind::zeta);
  cfg.compare_noise_rates = {0.0, 0.1};
  cfg.epochs = 5;
  cfg.adam.eta = 0.01;
  cfg.zeta.eta = 0.015;
  const auto dir = fresh_dir("compare");
  const auto summary = run_comparison(cfg, dir);
  ASSERT_EQ(summary.conditions.size(), 2u);
  EXPECT_EQ(summary.conditions[0].condition, "clean");
  EXPECT_EQ(summary.conditions[1].condition, "noise10");
  for (const auto& c : summary.conditions) {
    EXPECT_EQ(c.adam.init_checksum, c.zeta.init_checksum);
    for (const auto* s : {&c.adam, &c.zeta}) {
      EXPECT_GE(s->final_test_accuracy, 0.0);
      EXPECT_LE(s->final_test_accuracy, 1.0);
      EXPECT_GT(s->final_test_accuracy, s->majority_baseline);
      EXPECT_EQ(s->epoch_test_accuracy.size(), cfg.epochs);
    }
    EXPECT_TRUE(fs::exists(dir / (c.condition + "_adam_metrics.csv")));
    EXPECT_TRUE(fs::exists(dir / (c.condition + "_zeta_metrics.csv")));
  }
  EXPECT_TRUE(fs::exists(dir / "comparison.csv"));
  EXPECT_TRUE(fs::exists(dir / "comparison.svg"));
  const auto table = format_comparison_table(summary);
  EXPECT_NE(table.find("noise10"), std::string::npos);
  fs::remove_all(dir);
}

TEST(RunComparison, ConditionNames) {
  EXPECT_EQ(condition_name(0.0), "clean");
  EXPECT_EQ(condition_name(0.1), "noise10");
  EXPECT_EQ(condition_name(0.25), "noise25");
}

}  // namespace
}  // namespace zeta_opt::harness
