#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zeta_opt/adam.hpp"
#include "zeta_opt/batching.hpp"
#include "zeta_opt/loss.hpp"
#include "zeta_opt/zeta_optimizer.hpp"

namespace zeta_opt::harness {

struct ConfigValue {
  std::string text;
  std::size_t line = 0;
};

/// Flat `section.key = value` lines; `#` starts a comment, blank lines are
/// ignored. Duplicate keys and lines without '=' are ConfigErrors.
std::map<std::string, ConfigValue> parse_key_values(std::string_view text);

enum class DataSource { blobs, spirals, csv };
enum class OptimizerKind { zeta, adam };

std::string_view to_string(OptimizerKind kind);

struct DatasetSpec {
  DataSource source = DataSource::blobs;
  std::size_t n = 4000;
  std::size_t dim = 32;
  std::size_t classes = 10;
  double spread = 1.0;
  double center_scale = 3.0;
  double spiral_noise = 0.1;
  /// Symmetric label noise applied to the training split only.
  double noise_rate = 0.0;
  double test_fraction = 0.2;
  std::filesystem::path csv_path;
  bool csv_skip_header = false;
  bool csv_minmax = false;
};

struct ExperimentConfig {
  std::string run_name = "run";
  std::uint64_t seed = 42;
  std::size_t epochs = 5;
  DatasetSpec data;
  std::size_t hidden_dim = 64;
  nn::LossConfig loss;
  OptimizerKind optimizer = OptimizerKind::zeta;
  optim::ZetaHyperParams zeta;
  optim::AdamHyperParams adam;
  data::BatchPlan batch;
  std::filesystem::path out_dir = "out";
  /// One comparison condition per entry.
  std::vector<double> compare_noise_rates{0.0, 0.1};

  void validate() const;
};

/// Builds a config from parsed keys on top of the defaults above. Unknown keys
/// and malformed values are ConfigErrors naming the key and line.
ExperimentConfig config_from_key_values(const std::map<std::string, ConfigValue>& kv);

/// Reads and parses a config file. An unreadable file is an IoError naming the
/// path.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Every key accepted by config_from_key_values, sorted.
std::vector<std::string> known_config_keys();

/// Seed streams derived from ExperimentConfig::seed.
enum class SeedStream : std::uint64_t { data = 1, split = 2, noise = 3, init = 4, shuffle = 5 };
std::uint64_t stream_seed(const ExperimentConfig& cfg, SeedStream stream);

}  // namespace zeta_opt::harness
