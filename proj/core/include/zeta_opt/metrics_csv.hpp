#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zeta_opt/experiment.hpp"

namespace zeta_opt::harness {

inline constexpr std::string_view kMetricsHeader =
    "run_id,optimizer,step,epoch,split,loss,accuracy,lr,s_t,zeta_s,delta_t,rho_t,boost,grad_norm,"
    "update_norm";

/// Renders one record as a CSV line (no newline); floats use %.9g.
std::string format_metrics_row(const MetricsRecord& record);

/// Streams records to a file; the header is written on open.
class MetricsCsvWriter {
 public:
  explicit MetricsCsvWriter(const std::filesystem::path& path);
  void write(const MetricsRecord& record);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);

/// Parses a file produced by write_metrics_csv.
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

}  // namespace zeta_opt::harness
