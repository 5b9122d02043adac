#include "smartpack/rf_link.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "smartpack/errors.hpp"

namespace smartpack {

using detail::require_finite;

EnvShiftTables EnvShiftTables::characterized() {
  EnvShiftTables t;
  t.strain_df = PiecewiseLinear({{0.0, 0.0}, {40.0, -2.0}});
  t.strain_trace_r = PiecewiseLinear({{0.0, 0.3}, {40.0, 2.2}});
  t.bend_df = PiecewiseLinear({{0.0, 0.0}, {5000.0, 1.5}});
  t.temp_df = PiecewiseLinear({{5.0, 0.0}, {25.0, 0.9}});
  t.humidity_df = PiecewiseLinear({{20.0, 0.0}, {80.0, 1.5}});
  t.electrode_r = PiecewiseLinear({{0.0, 3.0}, {40.0, 8.0}});
  return t;
}

void RfLinkModel::validate() const {
  const double fields[] = {inductance_h, capacitance_f, trace_resistance, carrier_mhz,
                           f_res_nominal_mhz, bandwidth_mhz, peak_match_mhz, r_load_ref,
                           pull_mhz, gain_fullscale_db, gain_slope_db_per_mhz, v_peak};
  for (double f : fields) require_finite(f, "rf_link parameter");
  if (!(inductance_h > 0.0) || !(capacitance_f > 0.0)) {
    throw InvalidInput("rf_link inductance and capacitance must be > 0");
  }
  if (std::abs(lc_resonance_mhz() - f_res_nominal_mhz) > 0.01 * f_res_nominal_mhz) {
    throw InvalidInput("rf_link f_res_nominal inconsistent with 1/(2 pi sqrt(LC)) beyond 1%");
  }
  if (!(bandwidth_mhz > 0.0) || !(r_load_ref > 0.0) || v_peak < 0.0) {
    throw InvalidInput("rf_link bandwidth and r_load_ref must be > 0, v_peak >= 0");
  }
  for (const auto& entry : coupling_table) {
    if (!(entry.coupling >= 0.0 && entry.coupling <= 1.0)) {
      throw InvalidInput("coupling factor for '" + entry.position + "' outside [0, 1]");
    }
  }
}

void RfLinkModel::back_solve_capacitance() {
  const double omega = 2.0 * std::numbers::pi * f_res_nominal_mhz * 1e6;
  capacitance_f = 1.0 / (omega * omega * inductance_h);
}

double RfLinkModel::lc_resonance_mhz() const {
  return 1.0 / (2.0 * std::numbers::pi * std::sqrt(inductance_h * capacitance_f)) / 1e6;
}

namespace {

struct Descriptor {
  std::string placement;
  double distance_cm = std::numeric_limits<double>::quiet_NaN();
};

Descriptor parse_descriptor(const std::string& text) {
  Descriptor d;
  const auto at = text.find('@');
  d.placement = text.substr(0, at);
  if (at != std::string::npos) {
    try {
      d.distance_cm = std::stod(text.substr(at + 1));
    } catch (const std::exception&) {
    }
  }
  return d;
}

double distance_between(const Descriptor& a, const Descriptor& b) {
  if (std::isnan(a.distance_cm) || std::isnan(b.distance_cm)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(a.distance_cm - b.distance_cm);
}

}  // namespace

CouplingLookup resolve_coupling(const RfLinkModel& model, const std::string& position) {
  if (model.coupling_table.empty()) throw InvalidInput("coupling table is empty");
  for (const auto& entry : model.coupling_table) {
    if (entry.position == position) return {entry.coupling, entry.position, true};
  }
  const Descriptor want = parse_descriptor(position);
  const CouplingEntry* best = nullptr;
  double best_score = std::numeric_limits<double>::infinity();
  bool best_same_placement = false;
  for (const auto& entry : model.coupling_table) {
    const Descriptor have = parse_descriptor(entry.position);
    const bool same = have.placement == want.placement;
    const double score = distance_between(want, have);
    const bool better = best == nullptr || (same && !best_same_placement) ||
                        (same == best_same_placement && score < best_score);
    if (better) {
      best = &entry;
      best_score = score;
      best_same_placement = same;
    }
  }
  return {best->coupling, best->position, false};
}

std::vector<std::string> extrapolated_fields(const RfLinkModel& model, const EnvCondition& env) {
  std::vector<std::string> out;
  const auto& t = model.env_tables;
  if (!t.strain_df.in_range(env.strain_pct) || !t.electrode_r.in_range(env.strain_pct)) {
    out.emplace_back("strain_pct");
  }
  if (!t.bend_df.in_range(env.bend_cycles)) out.emplace_back("bend_cycles");
  if (!model.encapsulated) {
    if (!t.temp_df.in_range(env.temp_c)) out.emplace_back("temp_c");
    if (!t.humidity_df.in_range(env.humidity_rh)) out.emplace_back("humidity_rh");
  }
  if (!model.coupling_table.empty() && !resolve_coupling(model, env.position).exact) {
    out.emplace_back("position");
  }
  return out;
}

double environmental_shift_mhz(const RfLinkModel& model, const EnvCondition& env) {
  require_finite(env.strain_pct, "strain");
  require_finite(env.bend_cycles, "bend_cycles");
  require_finite(env.temp_c, "temperature");
  require_finite(env.humidity_rh, "humidity");
  const auto& t = model.env_tables;
  double shift = t.strain_df(env.strain_pct) + t.bend_df(env.bend_cycles);
  if (!model.encapsulated) {
    shift += t.temp_df(env.temp_c) + t.humidity_df(env.humidity_rh);
  }
  return shift;
}

double resonance_frequency(const RfLinkModel& model, double r_load, const EnvCondition& env) {
  require_finite(r_load, "r_load");
  if (!(r_load > 0.0)) throw InvalidInput("r_load must be > 0");
  const double f_env = model.f_res_nominal_mhz + environmental_shift_mhz(model, env);
  return f_env - model.pull_mhz * (r_load - model.r_load_ref) / model.r_load_ref;
}

double match_factor(const RfLinkModel& model, double f_res_mhz) {
  const double half_width = 0.5 * model.bandwidth_mhz;
  const double x = (f_res_mhz - model.peak_match_mhz) / half_width;
  return 1.0 / (1.0 + x * x);
}

double gain_db(const RfLinkModel& model, double r_load, const EnvCondition& env) {
  const double f = resonance_frequency(model, r_load, env);
  return model.gain_fullscale_db + model.gain_slope_db_per_mhz * std::abs(f - model.carrier_mhz);
}

double harvested_voltage(const RfLinkModel& model, double r_load, const EnvCondition& env) {
  const double f = resonance_frequency(model, r_load, env);
  const double coupling = resolve_coupling(model, env.position).coupling;
  return model.v_peak * coupling * match_factor(model, f);
}

double antenna_trace_resistance(const RfLinkModel& model, const EnvCondition& env) {
  require_finite(env.strain_pct, "strain");
  return model.env_tables.strain_trace_r(env.strain_pct);
}

double electrode_resistance(const RfLinkModel& model, double strain_pct) {
  require_finite(strain_pct, "strain");
  return model.env_tables.electrode_r(strain_pct);
}

double electrode_resistance(double strain_pct) {
  static const EnvShiftTables tables = EnvShiftTables::characterized();
  require_finite(strain_pct, "strain");
  return tables.electrode_r(strain_pct);
}

}  // namespace smartpack
