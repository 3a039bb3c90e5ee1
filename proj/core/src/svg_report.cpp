#include "zeta_opt/svg_report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "zeta_opt/error.hpp"

namespace zeta_opt::harness {
namespace {

constexpr const char* kZetaColor = "#d95f02";
constexpr const char* kAdamColor = "#1b9e77";

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string summary_svg(const ComparisonSummary& summary) {
  using L = SvgLayout;
  const double groups = static_cast<double>(summary.conditions.size());
  const double plot_width = groups * L::width_per_group;
  const double width = L::margin_left + plot_width + L::margin_right;
  const double height = L::margin_top + L::plot_height + L::margin_bottom;
  const double x0 = L::margin_left;
  const double y0 = L::margin_top + L::plot_height;  // baseline (accuracy 0)

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width)
      << "\" height=\"" << fmt("%.0f", height) << "\" viewBox=\"0 0 " << fmt("%.0f", width) << ' '
      << fmt("%.0f", height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "  <text x=\"" << fmt("%.1f", width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"15\">Final test accuracy: ZetA vs Adam</text>\n";

  // Axes and gridlines every 0.2.
  svg << "  <line x1=\"" << x0 << "\" y1=\"" << L::margin_top << "\" x2=\"" << x0 << "\" y2=\""
      << y0 << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << fmt("%.1f", x0 + plot_width)
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double acc = 0.2 * i;
    const double y = y0 - acc * L::plot_height;
    svg << "  <line x1=\"" << fmt("%.1f", x0 - 5) << "\" y1=\"" << fmt("%.3f", y) << "\" x2=\""
        << fmt("%.1f", x0 + plot_width) << "\" y2=\"" << fmt("%.3f", y)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "  <text x=\"" << fmt("%.1f", x0 - 8) << "\" y=\"" << fmt("%.3f", y + 4)
        << "\" text-anchor=\"end\">" << fmt("%.1f", acc) << "</text>\n";
  }
  svg << "  <text x=\"18\" y=\"" << fmt("%.1f", L::margin_top + L::plot_height / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt("%.1f", L::margin_top + L::plot_height / 2) << ")\">Test accuracy</text>\n";
  svg << "  <text x=\"" << fmt("%.1f", x0 + plot_width / 2) << "\" y=\""
      << fmt("%.1f", height - 12) << "\" text-anchor=\"middle\">Condition</text>\n";

  for (std::size_t g = 0; g < summary.conditions.size(); ++g) {
    const auto& c = summary.conditions[g];
    const double gx = x0 + static_cast<double>(g) * L::width_per_group;
    const double center = gx + L::width_per_group / 2;
    const struct {
      const char* label;
      const char* color;
      double acc;
      double x;
    } bars[] = {{"ZetA", kZetaColor, c.zeta.final_test_accuracy, center - L::bar_width - 2},
                {"Adam", kAdamColor, c.adam.final_test_accuracy, center + 2}};
    for (const auto& b : bars) {
      const double h = b.acc * L::plot_height;
      svg << "  <rect class=\"bar\" data-optimizer=\"" << b.label << "\" data-condition=\""
          << escape_xml(c.condition) << "\" x=\"" << fmt("%.3f", b.x) << "\" y=\""
          << fmt("%.3f", y0 - h) << "\" width=\"" << fmt("%.3f", L::bar_width) << "\" height=\""
          << fmt("%.3f", h) << "\" fill=\"" << b.color << "\"/>\n";
      svg << "  <text x=\"" << fmt("%.3f", b.x + L::bar_width / 2) << "\" y=\""
          << fmt("%.3f", y0 - h - 4) << "\" text-anchor=\"middle\">" << fmt("%.3f", b.acc)
          << "</text>\n";
    }
    svg << "  <text x=\"" << fmt("%.3f", center) << "\" y=\"" << fmt("%.1f", y0 + 18)
        << "\" text-anchor=\"middle\">" << escape_xml(c.condition) << "</text>\n";
  }

  // Legend (circles, so bars stay the only rects).
  const double lx = x0 + plot_width + 20;
  const struct {
    const char* label;
    const char* color;
  } legend[] = {{"ZetA", kZetaColor}, {"Adam", kAdamColor}};
  for (int i = 0; i < 2; ++i) {
    const double ly = L::margin_top + 10 + 22.0 * i;
    svg << "  <circle cx=\"" << fmt("%.1f", lx) << "\" cy=\"" << fmt("%.1f", ly) << "\" r=\"6\" "
        << "fill=\"" << legend[i].color << "\"/>\n";
    svg << "  <text x=\"" << fmt("%.1f", lx + 12) << "\" y=\"" << fmt("%.1f", ly + 4) << "\">"
        << legend[i].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_summary_svg(const ComparisonSummary& summary, const std::filesystem::path& path) {
  if (summary.conditions.empty()) {
    throw DataError("render_summary_svg: empty comparison summary");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write SVG: " + path.string());
  }
  out << summary_svg(summary);
  out.close();
  if (!out) {
    throw IoError("failed writing SVG: " + path.string());
  }
}

}  // namespace zeta_opt::harness
