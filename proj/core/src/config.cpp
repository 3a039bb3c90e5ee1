#include "zeta_opt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "zeta_opt/error.hpp"
#include "zeta_opt/random.hpp"

namespace zeta_opt::harness {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const ConfigValue& v, std::string_view want) {
  throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key + "' expects " +
                    std::string(want) + ", got '" + v.text + "'");
}

double as_double(const std::string& key, const ConfigValue& v) {
  const std::string& s = v.text;
  if (s == "inf" || s == "+inf") {
    return INFINITY;
  }
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || std::isnan(out)) {
    bad_value(key, v, "a number");
  }
  return out;
}

std::uint64_t as_u64(const std::string& key, const ConfigValue& v) {
  const std::string& s = v.text;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    bad_value(key, v, "a non-negative integer");
  }
  return out;
}

std::size_t as_size(const std::string& key, const ConfigValue& v) {
  return static_cast<std::size_t>(as_u64(key, v));
}

bool as_bool(const std::string& key, const ConfigValue& v) {
  if (v.text == "true" || v.text == "1" || v.text == "yes") {
    return true;
  }
  if (v.text == "false" || v.text == "0" || v.text == "no") {
    return false;
  }
  bad_value(key, v, "true or false");
}

std::vector<double> as_double_list(const std::string& key, const ConfigValue& v) {
  std::vector<double> out;
  std::stringstream ss(v.text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(as_double(key, ConfigValue{trim(item), v.line}));
  }
  if (out.empty()) {
    bad_value(key, v, "a comma-separated list of numbers");
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const ConfigValue&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.name", [](auto& c, auto&, auto& v) { c.run_name = v.text; }},
      {"run.seed", [](auto& c, auto& k, auto& v) { c.seed = as_u64(k, v); }},
      {"run.epochs", [](auto& c, auto& k, auto& v) { c.epochs = as_size(k, v); }},
      {"run.out_dir", [](auto& c, auto&, auto& v) { c.out_dir = v.text; }},
      {"data.source",
       [](auto& c, auto& k, auto& v) {
         if (v.text == "blobs") {
           c.data.source = DataSource::blobs;
         } else if (v.text == "spirals") {
           c.data.source = DataSource::spirals;
         } else if (v.text == "csv") {
           c.data.source = DataSource::csv;
         } else {
           bad_value(k, v, "one of blobs, spirals, csv");
         }
       }},
      {"data.n", [](auto& c, auto& k, auto& v) { c.data.n = as_size(k, v); }},
      {"data.dim", [](auto& c, auto& k, auto& v) { c.data.dim = as_size(k, v); }},
      {"data.classes", [](auto& c, auto& k, auto& v) { c.data.classes = as_size(k, v); }},
      {"data.spread", [](auto& c, auto& k, auto& v) { c.data.spread = as_double(k, v); }},
      {"data.center_scale",
       [](auto& c, auto& k, auto& v) { c.data.center_scale = as_double(k, v); }},
      {"data.spiral_noise",
       [](auto& c, auto& k, auto& v) { c.data.spiral_noise = as_double(k, v); }},
      {"data.noise_rate", [](auto& c, auto& k, auto& v) { c.data.noise_rate = as_double(k, v); }},
      {"data.test_fraction",
       [](auto& c, auto& k, auto& v) { c.data.test_fraction = as_double(k, v); }},
      {"data.csv_path", [](auto& c, auto&, auto& v) { c.data.csv_path = v.text; }},
      {"data.csv_skip_header",
       [](auto& c, auto& k, auto& v) { c.data.csv_skip_header = as_bool(k, v); }},
      {"data.csv_minmax", [](auto& c, auto& k, auto& v) { c.data.csv_minmax = as_bool(k, v); }},
      {"model.hidden_dim", [](auto& c, auto& k, auto& v) { c.hidden_dim = as_size(k, v); }},
      {"loss.entropy_weight",
       [](auto& c, auto& k, auto& v) { c.loss.entropy_weight = as_double(k, v); }},
      {"optimizer.name",
       [](auto& c, auto& k, auto& v) {
         if (v.text == "zeta") {
           c.optimizer = OptimizerKind::zeta;
         } else if (v.text == "adam") {
           c.optimizer = OptimizerKind::adam;
         } else {
           bad_value(k, v, "zeta or adam");
         }
       }},
      {"batch.size", [](auto& c, auto& k, auto& v) { c.batch.batch_size = as_size(k, v); }},
      {"batch.drop_last", [](auto& c, auto& k, auto& v) { c.batch.drop_last = as_bool(k, v); }},
      {"zeta.eta", [](auto& c, auto& k, auto& v) { c.zeta.eta = as_double(k, v); }},
      {"zeta.s_min", [](auto& c, auto& k, auto& v) { c.zeta.s_min = as_double(k, v); }},
      {"zeta.s_max", [](auto& c, auto& k, auto& v) { c.zeta.s_max = as_double(k, v); }},
      {"zeta.beta1", [](auto& c, auto& k, auto& v) { c.zeta.beta1 = as_double(k, v); }},
      {"zeta.beta2", [](auto& c, auto& k, auto& v) { c.zeta.beta2 = as_double(k, v); }},
      {"zeta.epsilon", [](auto& c, auto& k, auto& v) { c.zeta.epsilon = as_double(k, v); }},
      {"zeta.clip_bound", [](auto& c, auto& k, auto& v) { c.zeta.clip_bound = as_double(k, v); }},
      {"zeta.base_damp", [](auto& c, auto& k, auto& v) { c.zeta.base_damp = as_double(k, v); }},
      {"zeta.adam_mix", [](auto& c, auto& k, auto& v) { c.zeta.adam_mix = as_double(k, v); }},
      {"zeta.weight_decay",
       [](auto& c, auto& k, auto& v) { c.zeta.weight_decay = as_double(k, v); }},
      {"zeta.sam_rho", [](auto& c, auto& k, auto& v) { c.zeta.sam_rho = as_double(k, v); }},
      {"zeta.centralize", [](auto& c, auto& k, auto& v) { c.zeta.centralize = as_bool(k, v); }},
      {"zeta.lr_schedule",
       [](auto& c, auto& k, auto& v) {
         if (v.text == "cosine") {
           c.zeta.lr_schedule = optim::LrSchedule::cosine;
         } else if (v.text == "constant") {
           c.zeta.lr_schedule = optim::LrSchedule::constant;
         } else {
           bad_value(k, v, "cosine or constant");
         }
       }},
      {"adam.eta", [](auto& c, auto& k, auto& v) { c.adam.eta = as_double(k, v); }},
      {"adam.beta1", [](auto& c, auto& k, auto& v) { c.adam.beta1 = as_double(k, v); }},
      {"adam.beta2", [](auto& c, auto& k, auto& v) { c.adam.beta2 = as_double(k, v); }},
      {"adam.epsilon", [](auto& c, auto& k, auto& v) { c.adam.epsilon = as_double(k, v); }},
      {"compare.noise_rates",
       [](auto& c, auto& k, auto& v) { c.compare_noise_rates = as_double_list(k, v); }},
  };
  return table;
}

}  // namespace

std::map<std::string, ConfigValue> parse_key_values(std::string_view text) {
  std::map<std::string, ConfigValue> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (out.contains(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "' (first set on line " + std::to_string(out.at(key).line) + ")");
    }
    out.emplace(std::move(key), ConfigValue{std::move(value), line_no});
  }
  return out;
}

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::zeta ? "zeta" : "adam";
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (epochs < 1) {
    fail("run.epochs must be >= 1");
  }
  if (hidden_dim < 1) {
    fail("model.hidden_dim must be >= 1");
  }
  if (data.source != DataSource::csv) {
    if (data.classes < 2 || data.n < data.classes) {
      fail("data.n must be >= data.classes >= 2");
    }
    if (data.source == DataSource::blobs && (data.dim < 1 || !(data.spread > 0.0))) {
      fail("blobs need data.dim >= 1 and data.spread > 0");
    }
  } else if (data.csv_path.empty()) {
    fail("data.csv_path is required when data.source = csv");
  }
  if (!(data.noise_rate >= 0.0 && data.noise_rate <= 1.0)) {
    fail("data.noise_rate must lie in [0, 1]");
  }
  if (!(data.test_fraction > 0.0 && data.test_fraction < 1.0)) {
    fail("data.test_fraction must lie in (0, 1)");
  }
  if (compare_noise_rates.empty()) {
    fail("compare.noise_rates must not be empty");
  }
  for (double r : compare_noise_rates) {
    if (!(r >= 0.0 && r <= 1.0)) {
      fail("compare.noise_rates entries must lie in [0, 1]");
    }
  }
  if (batch.batch_size < 1) {
    fail("batch.size must be >= 1");
  }
  try {
    loss.validate();
    zeta.validate();
    adam.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

ExperimentConfig config_from_key_values(const std::map<std::string, ConfigValue>& kv) {
  ExperimentConfig cfg;
  const auto& table = setters();
  for (const auto& [key, value] : kv) {
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("config line " + std::to_string(value.line) + ": unknown key '" + key +
                        "'");
    }
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config file: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig cfg = config_from_key_values(parse_key_values(buffer.str()));
  // Dataset files are resolved next to the config file.
  if (!cfg.data.csv_path.empty() && cfg.data.csv_path.is_relative()) {
    cfg.data.csv_path = path.parent_path() / cfg.data.csv_path;
  }
  return cfg;
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : setters()) {
    keys.push_back(key);
  }
  return keys;
}

std::uint64_t stream_seed(const ExperimentConfig& cfg, SeedStream stream) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(stream));
}

}  // namespace zeta_opt::harness
