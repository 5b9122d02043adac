#include "smartpack/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smartpack/errors.hpp"
#include "smartpack/trace_io.hpp"

namespace smartpack {

namespace {

constexpr double kWidth = 720.0;
constexpr double kChartHeight = 220.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 40.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::size_t column_index(const std::string& name) {
  const auto& cols = trace_columns();
  const auto it = std::find(cols.begin(), cols.end(), name);
  if (it == cols.end() || it == cols.begin()) throw InvalidInput("unknown plot column '" + name + "'");
  return static_cast<std::size_t>(it - cols.begin());
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> default_plot_groups() {
  return {{"tvbn_mg100g"},
          {"nh3_ppm"},
          {"v_harvest_v"},
          {"temp_mat_c"},
          {"ca_released_frac", "eg_released_frac"},
          {"ca_headspace_ppm", "eg_headspace_ppm", "butanone_ppm", "methylbutanol_ppm"}};
}

std::string render_svg(const SimulationTrace& trace,
                       const std::vector<std::vector<std::string>>& column_groups) {
  if (column_groups.empty()) throw InvalidInput("no columns selected for plotting");
  const double panel = kTop + kChartHeight + kBottom;
  const double height = panel * static_cast<double>(column_groups.size());
  const double plot_w = kWidth - kLeft - kRight;

  double t_max = 0.0;
  for (const auto& r : trace.rows) t_max = std::max(t_max, r.t_s / 3600.0);
  if (t_max <= 0.0) t_max = 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(kWidth)
      << "\" height=\"" << format_number(height) << "\" viewBox=\"0 0 " << format_number(kWidth)
      << ' ' << format_number(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << format_number(kLeft) << "\" y=\"14\" font-size=\"13\">"
      << escape(trace.name) << "</text>\n";

  for (std::size_t g = 0; g < column_groups.size(); ++g) {
    const auto& group = column_groups[g];
    if (group.empty()) throw InvalidInput("empty plot column group");
    std::vector<std::size_t> idx;
    for (const auto& name : group) idx.push_back(column_index(name));

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : trace.rows) {
      for (std::size_t c : idx) {
        lo = std::min(lo, trace_value(r, c));
        hi = std::max(hi, trace_value(r, c));
      }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double y0 = panel * static_cast<double>(g) + kTop;
    auto px = [&](double t_h) { return kLeft + plot_w * t_h / t_max; };
    auto py = [&](double v) { return y0 + kChartHeight * (1.0 - (v - lo) / (hi - lo)); };

    svg << "<g>\n";
    svg << "<rect x=\"" << format_number(kLeft) << "\" y=\"" << format_number(y0) << "\" width=\""
        << format_number(plot_w) << "\" height=\"" << format_number(kChartHeight)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double v = lo + (hi - lo) * k / 4.0;
      const double t = t_max * k / 4.0;
      svg << "<text x=\"" << format_number(kLeft - 4) << "\" y=\"" << format_number(py(v) + 4)
          << "\" text-anchor=\"end\">" << format_number(std::round(v * 1e4) / 1e4) << "</text>\n";
      svg << "<text x=\"" << format_number(px(t)) << "\" y=\""
          << format_number(y0 + kChartHeight + 14) << "\" text-anchor=\"middle\">"
          << format_number(std::round(t * 100) / 100) << "</text>\n";
    }
    svg << "<text x=\"" << format_number(kLeft + plot_w / 2) << "\" y=\""
        << format_number(y0 + kChartHeight + 30) << "\" text-anchor=\"middle\">t (h)</text>\n";

    for (std::size_t k = 0; k < idx.size(); ++k) {
      const char* color = kColors[k % std::size(kColors)];
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      // thin long traces to at most ~2000 vertices
      const std::size_t n = trace.rows.size();
      const std::size_t stride = std::max<std::size_t>(1, n / 2000);
      for (std::size_t i = 0; i < n; i += stride) {
        const auto& r = trace.rows[i];
        svg << format_number(px(r.t_s / 3600.0)) << ',' << format_number(py(trace_value(r, idx[k])))
            << ' ';
      }
      if (n > 0 && (n - 1) % stride != 0) {
        const auto& r = trace.rows.back();
        svg << format_number(px(r.t_s / 3600.0)) << ',' << format_number(py(trace_value(r, idx[k])));
      }
      svg << "\"/>\n";
      svg << "<text x=\"" << format_number(kLeft + plot_w + 8) << "\" y=\""
          << format_number(y0 + 14 + 16 * static_cast<double>(k)) << "\" fill=\"" << color << "\">"
          << escape(group[k]) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace smartpack
