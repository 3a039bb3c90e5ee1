#pragma once

#include <filesystem>
#include <string>

#include "zeta_opt/experiment.hpp"

namespace zeta_opt::harness {

/// Geometry of the grouped-bar chart. Accuracy 1.0 maps to plot_height pixels.
struct SvgLayout {
  static constexpr double width_per_group = 160.0;
  static constexpr double margin_left = 70.0;
  static constexpr double margin_right = 150.0;
  static constexpr double margin_top = 50.0;
  static constexpr double margin_bottom = 60.0;
  static constexpr double plot_height = 300.0;
  static constexpr double bar_width = 50.0;
};

/// Grouped bars of final test accuracy, one group per condition with a ZetA
/// and an Adam bar. Bars are the only <rect> elements.
std::string summary_svg(const ComparisonSummary& summary);

/// Throws DataError on an empty summary and IoError if the file cannot be
/// written.
void render_summary_svg(const ComparisonSummary& summary, const std::filesystem::path& path);

}  // namespace zeta_opt::harness
