#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smartpack/params.hpp"

namespace smartpack {

struct Environment {
  double ambient_c = 20.0;
  double humidity_rh = 90.0;
  std::string position = kValidationPosition;
  double strain_pct = 0.0;
  double bend_cycles = 0.0;
  double ch4_ppm = 0.0;  // background cross-gases seen by the sensor
  double co2_ppm = 0.0;
};

enum class TriggerMode {
  Physical,    // harvested voltage heats the mat; the LCST gate is the trigger
  Comparator,  // ablation: gate forced open while NH3 >= trigger threshold
};

struct ScenarioConfig {
  std::string name = "scenario";
  double duration_h = 24.0;
  double dt_s = 10.0;
  Environment environment;
  bool food_present = true;
  SpoilageParams food;
  DeviceParams device;
  double trigger_threshold_ppm = 40.0;
  double tvbn_limit = kTvbnLimit;
  bool smart_packaging_enabled = true;
  TriggerMode trigger_mode = TriggerMode::Physical;

  /// Scenario with builtin_params() as its food and device.
  static ScenarioConfig with_defaults();

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::size_t step_count() const;
  EnvCondition rf_environment() const;
};

/// One row per time step; column order matches the trace CSV.
struct TraceRow {
  double t_s = 0.0;
  double tvbn = 0.0;
  double nh3 = 0.0;
  double r_sensor = 0.0;
  double f_res = 0.0;
  double gain = 0.0;
  double v_harvest = 0.0;
  double temp_mat = 0.0;
  bool gate_open = false;
  double ca_released = 0.0;
  double eg_released = 0.0;
  double ca_headspace = 0.0;
  double eg_headspace = 0.0;
  double butanone = 0.0;
  double methylbutanol = 0.0;
};

enum class EventKind {
  NH3_CROSSED_THRESHOLD,
  GATE_OPENED,
  GATE_CLOSED,
  TVBN_LIMIT_EXCEEDED,
  EXTRAPOLATION_WARNING,
};

const char* event_kind_name(EventKind kind);

struct Event {
  EventKind kind;
  double t_h = 0.0;
  std::size_t step = 0;
  std::string detail;

  friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

struct SimulationTrace {
  std::string name;
  std::string config_digest;
  double dt_s = 0.0;
  std::vector<TraceRow> rows;
  EventLog events;

  double t_h(std::size_t step) const { return rows[step].t_s / 3600.0; }
  /// Time of the first event of `kind`, if any.
  std::optional<double> first_event(EventKind kind) const;
};

/// Runs the closed loop at a fixed step. Per step: spoilage (with the
/// previous step's inhibitor) -> sensor -> rf link -> thermal -> gate ->
/// release; the new headspace CA + EG becomes the next inhibitor.
SimulationTrace simulate(const ScenarioConfig& config);

/// Threshold crossings and gate transitions found in a finished trace.
/// Crossing times are linearly interpolated between steps.
EventLog detect_events(const SimulationTrace& trace, const ScenarioConfig& config);

struct ObservableDelta {
  std::string column;
  std::size_t trace_index = 0;  // compared against trace 0
  double max_abs_delta = 0.0;
  double final_delta = 0.0;
};

struct ComparisonReport {
  std::vector<std::string> names;
  std::vector<std::optional<double>> time_to_limit_h;  // first TVBN_LIMIT_EXCEEDED
  std::vector<double> duration_h;
  std::vector<ObservableDelta> deltas;

  /// Shelf-life gain of trace `i` over trace 0. When trace `i` never crossed,
  /// the run duration stands in, so the value is a lower bound.
  std::optional<double> shelf_life_extension_h(std::size_t i) const;
};

/// Traces must share a time grid; throws InvalidInput otherwise.
ComparisonReport compare(std::span<const SimulationTrace> traces);

/// Column names in trace CSV order, and the row accessor used by compare
/// and the CSV writer.
const std::vector<std::string>& trace_columns();
double trace_value(const TraceRow& row, std::size_t column);

}  // namespace smartpack
