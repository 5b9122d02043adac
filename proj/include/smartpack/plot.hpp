#pragma once

#include <string>
#include <vector>

#include "smartpack/engine.hpp"

namespace smartpack {

/// Self-contained SVG: one line chart per column group, stacked vertically,
/// time in hours on the x axis.
std::string render_svg(const SimulationTrace& trace,
                       const std::vector<std::vector<std::string>>& column_groups);

/// Default grouping used by `smartpack plot` without --columns.
std::vector<std::vector<std::string>> default_plot_groups();

}  // namespace smartpack
