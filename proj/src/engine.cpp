#include "smartpack/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <string>

#include "smartpack/config_io.hpp"
#include "smartpack/errors.hpp"

namespace smartpack {

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::NH3_CROSSED_THRESHOLD: return "NH3_CROSSED_THRESHOLD";
    case EventKind::GATE_OPENED: return "GATE_OPENED";
    case EventKind::GATE_CLOSED: return "GATE_CLOSED";
    case EventKind::TVBN_LIMIT_EXCEEDED: return "TVBN_LIMIT_EXCEEDED";
    case EventKind::EXTRAPOLATION_WARNING: return "EXTRAPOLATION_WARNING";
  }
  return "?";
}

ScenarioConfig ScenarioConfig::with_defaults() {
  ScenarioConfig config;
  const ModelParams params = builtin_params();
  config.food = params.food;
  config.device = params.device;
  return config;
}

namespace {

template <typename F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const InvalidInput& e) {
    throw ConfigError(path, e.what());
  }
}

void require_positive(const std::string& path, double v) {
  if (!std::isfinite(v) || !(v > 0.0)) throw ConfigError(path, "must be a finite value > 0");
}

void require_nonnegative(const std::string& path, double v) {
  if (!std::isfinite(v) || v < 0.0) throw ConfigError(path, "must be a finite value >= 0");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("name", "must not be empty");
  require_positive("duration_h", duration_h);
  require_positive("dt_s", dt_s);
  if (!std::isfinite(environment.ambient_c) || environment.ambient_c < -5.0 ||
      environment.ambient_c > 40.0) {
    throw ConfigError("environment.ambient_c", "must lie in [-5, 40] degC");
  }
  require_nonnegative("environment.humidity_rh", environment.humidity_rh);
  require_nonnegative("environment.strain_pct", environment.strain_pct);
  require_nonnegative("environment.bend_cycles", environment.bend_cycles);
  require_nonnegative("environment.ch4_ppm", environment.ch4_ppm);
  require_nonnegative("environment.co2_ppm", environment.co2_ppm);
  if (environment.position.empty()) throw ConfigError("environment.position", "must not be empty");
  require_positive("trigger_threshold_ppm", trigger_threshold_ppm);
  require_positive("tvbn_limit", tvbn_limit);
  if (food_present) checked("food", [&] { food.validate(); });
  checked("device.sensor", [&] { device.sensor.validate(); });
  checked("device.rf_link", [&] { device.rf.validate(); });
  checked("device.thermal", [&] { device.thermal.validate(); });
  checked("device.release", [&] { device.release.validate(); });
  if (device.rf.coupling_table.empty()) {
    throw ConfigError("device.rf_link.coupling_table", "must not be empty");
  }
  if (dt_s > device.thermal.time_constant_s) {
    throw ConfigError("dt_s", "must not exceed device.thermal.time_constant_s (explicit Euler stability)");
  }
  if (step_count() == 0) throw ConfigError("duration_h", "shorter than one time step");
}

std::size_t ScenarioConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(duration_h * 3600.0 / dt_s));
}

EnvCondition ScenarioConfig::rf_environment() const {
  EnvCondition env;
  env.strain_pct = environment.strain_pct;
  env.bend_cycles = environment.bend_cycles;
  env.temp_c = environment.ambient_c;
  env.humidity_rh = environment.humidity_rh;
  env.position = environment.position;
  return env;
}

std::optional<double> SimulationTrace::first_event(EventKind kind) const {
  for (const auto& e : events) {
    if (e.kind == kind) return e.t_h;
  }
  return std::nullopt;
}

SimulationTrace simulate(const ScenarioConfig& config) {
  config.validate();

  const DeviceParams& device = config.device;
  const bool smart = config.smart_packaging_enabled;
  const EnvCondition env = config.rf_environment();

  // Resolve the coupling once; the per-step model then matches exactly.
  RfLinkModel rf = device.rf;
  rf.coupling_table = {{env.position, resolve_coupling(device.rf, env.position).coupling}};

  ThermalParams thermal = device.thermal;
  thermal.series_electrode_resistance += electrode_resistance(rf, env.strain_pct) -
                                         electrode_resistance(rf, 0.0);

  const double dt_s = config.dt_s;
  const double dt_h = dt_s / 3600.0;
  const std::size_t steps = config.step_count();

  SpoilageState spoilage;
  if (config.food_present) spoilage = SpoilageState::fresh(config.food);
  ReleaseState release = ReleaseState::loaded(device.release);
  ThermalState mat{thermal.ambient_c};
  double inhibitor = 0.0;

  SimulationTrace trace;
  trace.name = config.name;
  trace.config_digest = config_digest(config);
  trace.dt_s = dt_s;
  trace.rows.reserve(steps + 1);

  auto record = [&](std::size_t step, double r_sensor, double f_res, double gain, double v) {
    TraceRow row;
    row.t_s = static_cast<double>(step) * dt_s;
    row.tvbn = spoilage.tvbn;
    row.nh3 = spoilage.nh3;
    row.r_sensor = r_sensor;
    row.f_res = f_res;
    row.gain = gain;
    row.v_harvest = v;
    row.temp_mat = mat.mat_temp_c;
    row.gate_open = release.gate_open;
    row.ca_released = release.ca.released_fraction(device.release.ca.total_load);
    row.eg_released = release.eg.released_fraction(device.release.eg.total_load);
    row.ca_headspace = release.ca.headspace_ppm;
    row.eg_headspace = release.eg.headspace_ppm;
    row.butanone = spoilage.butanone;
    row.methylbutanol = spoilage.methylbutanol;
    trace.rows.push_back(row);
  };

  auto sense = [&](double& r_sensor, double& f_res, double& gain, double& v) {
    r_sensor = sensor_resistance(spoilage.nh3, config.environment.ch4_ppm,
                                 config.environment.co2_ppm, device.sensor);
    f_res = resonance_frequency(rf, r_sensor, env);
    gain = gain_db(rf, r_sensor, env);
    v = smart ? harvested_voltage(rf, r_sensor, env) : 0.0;
  };

  double r_sensor = 0.0, f_res = 0.0, gain = 0.0, v = 0.0;
  sense(r_sensor, f_res, gain, v);
  record(0, r_sensor, f_res, gain, v);

  for (std::size_t step = 1; step <= steps; ++step) {
    if (config.food_present) {
      spoilage = step_spoilage(spoilage, config.environment.ambient_c, inhibitor, dt_h, config.food);
    }
    sense(r_sensor, f_res, gain, v);
    if (smart) {
      mat = step_thermal(mat, v, dt_s, thermal);
      const bool gate = config.trigger_mode == TriggerMode::Physical
                            ? gate_open(mat.mat_temp_c, device.release)
                            : spoilage.nh3 >= config.trigger_threshold_ppm;
      release = step_release(release, gate, dt_h, device.release);
    }
    const auto [ca_ppm, eg_ppm] = headspace_concentrations(release);
    inhibitor = ca_ppm + eg_ppm;
    record(step, r_sensor, f_res, gain, v);
  }

  trace.events = detect_events(trace, config);
  return trace;
}

namespace {

void upward_crossings(const SimulationTrace& trace, double threshold, EventKind kind,
                      double TraceRow::*field, const char* label, EventLog& out) {
  const auto& rows = trace.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double cur = rows[i].*field;
    if (!(cur >= threshold)) continue;
    if (i == 0) {
      out.push_back({kind, 0.0, 0, std::string(label) + " at or above threshold at start"});
      continue;
    }
    const double prev = rows[i - 1].*field;
    if (prev >= threshold) continue;
    const double w = (threshold - prev) / (cur - prev);
    const double t_s = rows[i - 1].t_s + w * (rows[i].t_s - rows[i - 1].t_s);
    out.push_back({kind, t_s / 3600.0, i,
                   std::string(label) + " crossed " + std::to_string(threshold)});
  }
}

}  // namespace

EventLog detect_events(const SimulationTrace& trace, const ScenarioConfig& config) {
  EventLog events;
  if (config.smart_packaging_enabled) {
    for (const auto& field : extrapolated_fields(config.device.rf, config.rf_environment())) {
      events.push_back({EventKind::EXTRAPOLATION_WARNING, 0.0, 0,
                        field + " outside characterized range"});
    }
  }
  upward_crossings(trace, config.trigger_threshold_ppm, EventKind::NH3_CROSSED_THRESHOLD,
                   &TraceRow::nh3, "nh3_ppm", events);
  upward_crossings(trace, config.tvbn_limit, EventKind::TVBN_LIMIT_EXCEEDED, &TraceRow::tvbn,
                   "tvbn_mg100g", events);
  const auto& rows = trace.rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].gate_open == rows[i - 1].gate_open) continue;
    const EventKind kind = rows[i].gate_open ? EventKind::GATE_OPENED : EventKind::GATE_CLOSED;
    char detail[64];
    std::snprintf(detail, sizeof detail, "mat %.3f degC", rows[i].temp_mat);
    events.push_back({kind, rows[i].t_s / 3600.0, i, detail});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t_h != b.t_h) return a.t_h < b.t_h;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return events;
}

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> columns = {
      "t_s",           "tvbn_mg100g",      "nh3_ppm",          "r_sensor_ohm",
      "f_res_mhz",     "gain_db",          "v_harvest_v",      "temp_mat_c",
      "gate_open",     "ca_released_frac", "eg_released_frac", "ca_headspace_ppm",
      "eg_headspace_ppm", "butanone_ppm",  "methylbutanol_ppm"};
  return columns;
}

double trace_value(const TraceRow& row, std::size_t column) {
  switch (column) {
    case 0: return row.t_s;
    case 1: return row.tvbn;
    case 2: return row.nh3;
    case 3: return row.r_sensor;
    case 4: return row.f_res;
    case 5: return row.gain;
    case 6: return row.v_harvest;
    case 7: return row.temp_mat;
    case 8: return row.gate_open ? 1.0 : 0.0;
    case 9: return row.ca_released;
    case 10: return row.eg_released;
    case 11: return row.ca_headspace;
    case 12: return row.eg_headspace;
    case 13: return row.butanone;
    case 14: return row.methylbutanol;
  }
  throw InvalidInput("trace column index out of range");
}

std::optional<double> ComparisonReport::shelf_life_extension_h(std::size_t i) const {
  if (i >= names.size() || !time_to_limit_h[0]) return std::nullopt;
  const double other = time_to_limit_h[i] ? *time_to_limit_h[i] : duration_h[i];
  return other - *time_to_limit_h[0];
}

ComparisonReport compare(std::span<const SimulationTrace> traces) {
  ComparisonReport report;
  if (traces.empty()) return report;
  const SimulationTrace& base = traces.front();
  for (const auto& t : traces) {
    if (t.rows.size() != base.rows.size() || t.dt_s != base.dt_s) {
      throw InvalidInput("traces '" + base.name + "' and '" + t.name + "' do not share a time grid");
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (t.rows[i].t_s != base.rows[i].t_s) {
        throw InvalidInput("traces '" + base.name + "' and '" + t.name +
                           "' differ at time step " + std::to_string(i));
      }
    }
    report.names.push_back(t.name);
    report.time_to_limit_h.push_back(t.first_event(EventKind::TVBN_LIMIT_EXCEEDED));
    report.duration_h.push_back(t.rows.empty() ? 0.0 : t.rows.back().t_s / 3600.0);
  }
  const std::size_t ncol = trace_columns().size();
  for (std::size_t k = 1; k < traces.size(); ++k) {
    for (std::size_t c = 1; c < ncol; ++c) {
      ObservableDelta d;
      d.column = trace_columns()[c];
      d.trace_index = k;
      for (std::size_t i = 0; i < base.rows.size(); ++i) {
        const double delta = trace_value(traces[k].rows[i], c) - trace_value(base.rows[i], c);
        d.max_abs_delta = std::max(d.max_abs_delta, std::abs(delta));
        d.final_delta = delta;
      }
      report.deltas.push_back(d);
    }
  }
  return report;
}

}  // namespace smartpack
