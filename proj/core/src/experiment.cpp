#include "zeta_opt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "zeta_opt/adam.hpp"
#include "zeta_opt/error.hpp"
#include "zeta_opt/loss.hpp"
#include "zeta_opt/metrics_csv.hpp"
#include "zeta_opt/mlp.hpp"
#include "zeta_opt/svg_report.hpp"
#include "zeta_opt/zeta_optimizer.hpp"

namespace zeta_opt::harness {
namespace {

data::Dataset build_dataset(const ExperimentConfig& cfg) {
  const auto seed = stream_seed(cfg, SeedStream::data);
  const DatasetSpec& spec = cfg.data;
  switch (spec.source) {
    case DataSource::blobs:
      return data::make_blobs(spec.n, spec.dim, spec.classes, spec.spread, seed, spec.center_scale);
    case DataSource::spirals:
      return data::make_spirals(spec.n, spec.classes, spec.spiral_noise, seed);
    case DataSource::csv:
      return data::load_csv_dataset(spec.csv_path, spec.classes,
                                    {.skip_header = spec.csv_skip_header,
                                     .minmax_scale = spec.csv_minmax});
  }
  throw ConfigError("unknown data source");
}

double majority_baseline(const data::Dataset& ds) {
  const auto counts = ds.class_counts();
  const auto top = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(top) / static_cast<double>(ds.size());
}

std::string format_double(double x, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

ExperimentResult train(const ExperimentConfig& cfg,
                       const std::optional<std::filesystem::path>& metrics_csv) {
  const PreparedData prepared = prepare_data(cfg);
  const data::Dataset& train_set = prepared.train;
  const data::Dataset& test_set = prepared.test;

  nn::ParamSet params = nn::mlp_init({.input_dim = train_set.dim(),
                                      .hidden_dim = cfg.hidden_dim,
                                      .num_classes = train_set.num_classes,
                                      .seed = stream_seed(cfg, SeedStream::init)});

  data::BatchPlan plan = cfg.batch;
  plan.shuffle_seed = stream_seed(cfg, SeedStream::shuffle);
  const std::size_t steps_per_epoch = data::batches_per_epoch(train_set.size(), plan);
  if (steps_per_epoch == 0) {
    throw ConfigError("training split of " + std::to_string(train_set.size()) +
                      " samples yields no batches with drop_last");
  }
  const std::uint64_t total_steps = cfg.epochs * steps_per_epoch;

  ExperimentResult result;
  RunSummary& summary = result.summary;
  summary.run_id = cfg.run_name;
  summary.optimizer = std::string(to_string(cfg.optimizer));
  summary.n_train = train_set.size();
  summary.n_test = test_set.size();
  summary.num_classes = train_set.num_classes;
  summary.total_steps = total_steps;
  summary.init_checksum = nn::checksum(params);
  summary.majority_baseline = majority_baseline(test_set);

  std::optional<MetricsCsvWriter> writer;
  if (metrics_csv) {
    writer.emplace(*metrics_csv);
  }
  const auto emit = [&](MetricsRecord rec) {
    if (writer) {
      writer->write(rec);
    }
    result.records.push_back(std::move(rec));
  };

  optim::ZetaHyperParams zeta_hp = cfg.zeta;
  zeta_hp.total_steps = total_steps;
  std::optional<optim::ZetaOptimizer> zeta;
  std::optional<optim::AdamState> adam;
  if (cfg.optimizer == OptimizerKind::zeta) {
    zeta.emplace(params, zeta_hp);
  } else {
    adam = optim::AdamState::for_params(params);
  }

  std::uint64_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    data::BatchIterator batches(train_set, plan, epoch);
    while (auto batch = batches.next()) {
      const auto acts = nn::mlp_forward_cached(params, batch->features);
      const auto loss = nn::entropy_regularized_loss(acts.logits, batch->labels, cfg.loss);
      nn::mlp_backward(params, batch->features, acts, loss.dloss_dlogits);

      MetricsRecord rec;
      rec.run_id = summary.run_id;
      rec.optimizer = summary.optimizer;
      rec.step = ++step;
      rec.epoch = epoch;
      rec.split = SplitKind::train;
      rec.loss = loss.loss;
      rec.accuracy = nn::accuracy(acts.logits, batch->labels);

      if (zeta) {
        const auto pert = zeta->begin_step(params, loss.loss);
        if (zeta->needs_regrad()) {
          const auto sam_acts = nn::mlp_forward_cached(params, batch->features);
          const auto sam_loss =
              nn::entropy_regularized_loss(sam_acts.logits, batch->labels, cfg.loss);
          nn::mlp_backward(params, batch->features, sam_acts, sam_loss.dloss_dlogits);
        }
        zeta->finish_step(params, pert);
        const auto& d = zeta->diagnostics();
        rec.lr = d.eta_t;
        rec.s_t = d.s_t;
        rec.zeta_s = d.zeta_s;
        rec.delta_t = d.delta_t;
        rec.rho_t = d.rho_t;
        rec.boost = d.boost;
        rec.grad_norm = d.grad_norm;
        rec.update_norm = d.update_norm;
      } else {
        const auto d = optim::adam_step(params, *adam, cfg.adam);
        rec.lr = cfg.adam.eta;
        rec.grad_norm = d.grad_norm;
        rec.update_norm = d.update_norm;
      }
      emit(std::move(rec));
    }

    // Evaluation loss is plain cross-entropy.
    const auto logits = nn::mlp_forward(params, test_set.features);
    const auto eval = nn::entropy_regularized_loss(logits, test_set.labels, {.entropy_weight = 0.0});
    MetricsRecord rec;
    rec.run_id = summary.run_id;
    rec.optimizer = summary.optimizer;
    rec.step = step;
    rec.epoch = epoch;
    rec.split = SplitKind::test;
    rec.loss = eval.loss;
    rec.accuracy = nn::accuracy(logits, test_set.labels);
    summary.epoch_test_loss.push_back(rec.loss);
    summary.epoch_test_accuracy.push_back(rec.accuracy);
    emit(std::move(rec));
  }
  summary.final_test_accuracy = summary.epoch_test_accuracy.back();
  summary.final_test_loss = summary.epoch_test_loss.back();
  if (writer) {
    writer->close();
  }
  return result;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& cfg) {
  data::Dataset full = build_dataset(cfg);
  full.validate();
  data::Split split =
      data::train_test_split(full, cfg.data.test_fraction, stream_seed(cfg, SeedStream::split));
  if (cfg.data.noise_rate > 0.0) {
    split.train = data::inject_label_noise(split.train, cfg.data.noise_rate,
                                           stream_seed(cfg, SeedStream::noise))
                      .dataset;
  }
  return {std::move(split.train), std::move(split.test)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::optional<std::filesystem::path>& metrics_csv) {
  cfg.validate();
  try {
    return train(cfg, metrics_csv);
  } catch (const ConfigError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error("run '" + cfg.run_name + "': " + e.what());
  }
}

std::string condition_name(double noise_rate) {
  if (noise_rate == 0.0) {
    return "clean";
  }
  const double pct = std::round(noise_rate * 100.0 * 1e6) / 1e6;
  return "noise" + format_double(pct, "%g");
}

ComparisonSummary run_comparison(const ExperimentConfig& tmpl, const std::filesystem::path& out_dir) {
  tmpl.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }

  ComparisonSummary summary;
  for (double rate : tmpl.compare_noise_rates) {
    const std::string cond = condition_name(rate);
    ExperimentConfig base = tmpl;
    base.data.noise_rate = rate;

    ExperimentConfig adam_cfg = base;
    adam_cfg.optimizer = OptimizerKind::adam;
    adam_cfg.run_name = cond + "-adam";
    ExperimentConfig zeta_cfg = base;
    zeta_cfg.optimizer = OptimizerKind::zeta;
    zeta_cfg.run_name = cond + "-zeta";

    // The two runs share no mutable state.
    auto adam_future =
        std::async(std::launch::async, [adam_cfg, path = out_dir / (cond + "_adam_metrics.csv")] {
          return run_experiment(adam_cfg, path);
        });
    const ExperimentResult zeta_result =
        run_experiment(zeta_cfg, out_dir / (cond + "_zeta_metrics.csv"));
    const ExperimentResult adam_result = adam_future.get();

    if (adam_result.summary.init_checksum != zeta_result.summary.init_checksum) {
      throw Error("compare '" + cond + "': runs started from different parameters");
    }
    summary.conditions.push_back({cond, rate, adam_result.summary, zeta_result.summary});
  }

  const auto table_path = out_dir / "comparison.csv";
  std::ofstream table(table_path, std::ios::binary);
  if (!table) {
    throw IoError("cannot write " + table_path.string());
  }
  table << "condition,optimizer,epoch,test_loss,test_accuracy\n";
  for (const auto& c : summary.conditions) {
    for (const RunSummary* run : {&c.adam, &c.zeta}) {
      for (std::size_t e = 0; e < run->epoch_test_accuracy.size(); ++e) {
        table << c.condition << ',' << run->optimizer << ',' << (e + 1) << ','
              << format_double(run->epoch_test_loss[e], "%.9g") << ','
              << format_double(run->epoch_test_accuracy[e], "%.9g") << '\n';
      }
    }
  }
  table.close();
  if (!table) {
    throw IoError("failed writing " + table_path.string());
  }

  render_summary_svg(summary, out_dir / "comparison.svg");
  return summary;
}

std::string format_comparison_table(const ComparisonSummary& summary) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-6s %10s %10s %10s\n", "condition", "opt", "test_acc",
                "test_loss", "baseline");
  out << line;
  for (const auto& c : summary.conditions) {
    for (const RunSummary* run : {&c.adam, &c.zeta}) {
      std::snprintf(line, sizeof line, "%-12s %-6s %10.4f %10.4f %10.4f\n", c.condition.c_str(),
                    run->optimizer.c_str(), run->final_test_accuracy, run->final_test_loss,
                    run->majority_baseline);
      out << line;
    }
    std::snprintf(line, sizeof line, "%-12s zeta - adam accuracy: %+.2f pp\n", c.condition.c_str(),
                  100.0 * (c.zeta.final_test_accuracy - c.adam.final_test_accuracy));
    out << line;
  }
  return out.str();
}

}  // namespace zeta_opt::harness
