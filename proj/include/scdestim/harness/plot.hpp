#ifndef SCDESTIM_HARNESS_PLOT_HPP
#define SCDESTIM_HARNESS_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace scdestim::harness {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string x_label = "k";
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
};

/// Standalone SVG line chart, one polyline per series. Output bytes are
/// a pure function of the input. On log axes, nonpositive points are
/// skipped. Throws std::invalid_argument when there is nothing to draw.
std::string render_svg(const std::vector<Series>& series, const Axes& axes);

void emit_plot(const std::vector<Series>& series, const Axes& axes, const std::filesystem::path& path);

}  // namespace scdestim::harness

#endif  // SCDESTIM_HARNESS_PLOT_HPP
