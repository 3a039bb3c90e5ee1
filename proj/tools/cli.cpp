#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "zeta_opt/error.hpp"
#include "zeta_opt/experiment.hpp"
#include "zeta_opt/selftest.hpp"
#include "zeta_opt/zeta_function.hpp"

namespace zeta_opt::cli {
namespace {

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

std::uint64_t parse_env_seed(const char* text) {
  std::uint64_t value = 0;
  const std::string s(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("ZETA_OPT_SEED must be a non-negative integer, got '" + s + "'");
  }
  return value;
}

harness::ExperimentConfig load_config(const RunOptions& opts) {
  harness::ExperimentConfig cfg = harness::load_experiment_config(opts.config);
  if (const char* env = std::getenv("ZETA_OPT_SEED")) {
    cfg.seed = parse_env_seed(env);
  }
  if (opts.seed) {
    cfg.seed = *opts.seed;
  }
  if (!opts.out.empty()) {
    cfg.out_dir = opts.out;
  }
  return cfg;
}

int do_run(const RunOptions& opts, std::ostream& out) {
  const auto cfg = load_config(opts);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + cfg.out_dir.string());
  }
  const auto csv = cfg.out_dir / (cfg.run_name + "_metrics.csv");
  const auto result = harness::run_experiment(cfg, csv);
  const auto& s = result.summary;
  char line[200];
  std::snprintf(line, sizeof line,
                "%s (%s): %llu steps, final test accuracy %.4f, test loss %.4f\n",
                s.run_id.c_str(), s.optimizer.c_str(),
                static_cast<unsigned long long>(s.total_steps), s.final_test_accuracy,
                s.final_test_loss);
  out << line << "metrics: " << csv.string() << '\n';
  return kOk;
}

int do_compare(const RunOptions& opts, std::ostream& out) {
  const auto cfg = load_config(opts);
  const auto summary = harness::run_comparison(cfg, cfg.out_dir);
  out << harness::format_comparison_table(summary);
  out << "outputs: " << cfg.out_dir.string() << '\n';
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ZetA optimizer library: training runs, comparisons and diagnostics", "zeta_opt"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Train one configured run and write its metrics CSV");
  run->add_option("--config", run_opts.config, "Config file (section.key = value)")->required();
  run->add_option("--out", run_opts.out, "Output directory (overrides run.out_dir)");
  run->add_option("--seed", run_opts.seed, "Global seed (overrides ZETA_OPT_SEED and run.seed)");

  RunOptions cmp_opts;
  auto* compare = app.add_subcommand("compare", "Run Adam and ZetA side by side per condition");
  compare->add_option("--config", cmp_opts.config, "Config file")->required();
  compare->add_option("--out", cmp_opts.out, "Output directory (overrides run.out_dir)");

  double s = 0.0;
  auto* zeta_eval = app.add_subcommand("zeta-eval", "Print the Riemann zeta function at s > 1");
  zeta_eval->add_option("--s", s, "Argument s > 1")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*run) {
      return do_run(run_opts, out);
    }
    if (*compare) {
      return do_compare(cmp_opts, out);
    }
    if (*zeta_eval) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", special::zeta(s));
      out << buf << '\n';
      return kOk;
    }
    if (*selftest) {
      return harness::run_selftest(out) ? kOk : kFailure;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace zeta_opt::cli
