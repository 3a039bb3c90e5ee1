#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zeta_opt/config.hpp"
#include "zeta_opt/datasets.hpp"

namespace zeta_opt::harness {

enum class SplitKind { train, test };

/// One row of training telemetry. Optional fields are left blank in CSV when
/// they do not apply (test rows, or zeta-only columns for Adam).
struct MetricsRecord {
  std::string run_id;
  std::string optimizer;
  std::uint64_t step = 0;
  std::size_t epoch = 0;
  SplitKind split = SplitKind::train;
  double loss = 0.0;
  double accuracy = 0.0;
  std::optional<double> lr;
  std::optional<double> s_t;
  std::optional<double> zeta_s;
  std::optional<double> delta_t;
  std::optional<double> rho_t;
  std::optional<double> boost;
  std::optional<double> grad_norm;
  std::optional<double> update_norm;
};

struct RunSummary {
  std::string run_id;
  std::string optimizer;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t num_classes = 0;
  std::uint64_t total_steps = 0;
  std::uint64_t init_checksum = 0;
  /// Largest class frequency among test labels.
  double majority_baseline = 0.0;
  double final_test_accuracy = 0.0;
  double final_test_loss = 0.0;
  std::vector<double> epoch_test_accuracy;
  std::vector<double> epoch_test_loss;
};

struct ExperimentResult {
  std::vector<MetricsRecord> records;
  RunSummary summary;
};

/// Train and test splits after label noise, as fed to a run.
struct PreparedData {
  data::Dataset train;
  data::Dataset test;
};
PreparedData prepare_data(const ExperimentConfig& cfg);

/// Trains cfg.optimizer on the configured data. Writes every record to
/// metrics_csv as it is produced when a path is given.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::optional<std::filesystem::path>& metrics_csv = {});

struct ConditionResult {
  std::string condition;
  double noise_rate = 0.0;
  RunSummary adam;
  RunSummary zeta;
};

struct ComparisonSummary {
  std::vector<ConditionResult> conditions;
};

/// "clean" for 0, otherwise "noise" followed by the percentage.
std::string condition_name(double noise_rate);

/// For every entry of tmpl.compare_noise_rates, trains Adam and ZetA from the
/// same data and initial parameters. Writes <cond>_<opt>_metrics.csv,
/// comparison.csv and comparison.svg into out_dir.
ComparisonSummary run_comparison(const ExperimentConfig& tmpl, const std::filesystem::path& out_dir);

/// Side-by-side plain text table of final test metrics.
std::string format_comparison_table(const ComparisonSummary& summary);

}  // namespace zeta_opt::harness
