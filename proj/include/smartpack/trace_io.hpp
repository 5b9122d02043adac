#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "smartpack/engine.hpp"

namespace smartpack {

/// "%.9g": nine significant digits, locale-independent.
std::string format_number(double value);

/// Trace CSV: '#' header lines (scenario name, config digest), then the
/// column header and one row per step. LF line endings.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_events_csv(std::ostream& out, const SimulationTrace& trace);
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
void write_shelf_life_report(std::ostream& out, const ComparisonReport& report);

/// Reads a trace CSV written by write_trace_csv (events are not restored).
SimulationTrace read_trace_csv(const std::filesystem::path& path);

/// Writes `contents` to `path`; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace smartpack
