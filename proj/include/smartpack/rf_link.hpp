#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smartpack/piecewise.hpp"

namespace smartpack {

/// Operating conditions of the antenna. Positions are descriptors of the
/// form "<placement>@<distance_cm>", e.g. "inner_edge@5".
struct EnvCondition {
  double strain_pct = 0.0;
  double bend_cycles = 0.0;
  double temp_c = 5.0;
  double humidity_rh = 20.0;
  std::string position = "inner_edge@5";
};

struct CouplingEntry {
  std::string position;
  double coupling = 0.0;

  friend bool operator==(const CouplingEntry&, const CouplingEntry&) = default;
};

/// Characterized environmental shifts. Frequency tables give an additive
/// shift in MHz relative to the first knot.
struct EnvShiftTables {
  PiecewiseLinear strain_df;       // % -> MHz
  PiecewiseLinear strain_trace_r;  // % -> Ohm (antenna traces)
  PiecewiseLinear bend_df;         // cycles -> MHz
  PiecewiseLinear temp_df;         // degC -> MHz
  PiecewiseLinear humidity_df;     // %RH -> MHz
  PiecewiseLinear electrode_r;     // % strain -> Ohm (heater feed electrodes)

  static EnvShiftTables characterized();

  friend bool operator==(const EnvShiftTables&, const EnvShiftTables&) = default;
};

struct RfLinkModel {
  double inductance_h = 1.5e-6;
  double capacitance_f = 0.0;  // back-solved from f_res_nominal_mhz
  double trace_resistance = 0.3;
  double carrier_mhz = 13.56;
  double f_res_nominal_mhz = 14.0;
  double bandwidth_mhz = 3.0;
  double peak_match_mhz = 13.6;
  double r_load_ref = 900.0;  // load at which f_res = f_res_nominal
  double pull_mhz = 0.4;      // frequency pulled per r_load_ref of added load
  double gain_fullscale_db = -6.2;
  double gain_slope_db_per_mhz = 15.0;
  double v_peak = 5.9;
  // Packaged (PDMS-encapsulated) antennas ignore the temperature and
  // humidity tables; the bare-antenna tables still apply when false.
  bool encapsulated = true;
  std::vector<CouplingEntry> coupling_table;
  EnvShiftTables env_tables = EnvShiftTables::characterized();

  void validate() const;
  /// Sets capacitance_f so that 1 / (2 pi sqrt(LC)) = f_res_nominal_mhz.
  void back_solve_capacitance();
  double lc_resonance_mhz() const;
};

struct CouplingLookup {
  double coupling = 0.0;
  std::string matched;
  bool exact = false;
};

/// Finds `position` in the coupling table. Unknown descriptors fall back to
/// the nearest entry: same placement with the closest distance first, then
/// the closest distance overall. Throws InvalidInput on an empty table.
CouplingLookup resolve_coupling(const RfLinkModel& model, const std::string& position);

/// Names of EnvCondition fields outside their characterized range.
std::vector<std::string> extrapolated_fields(const RfLinkModel& model, const EnvCondition& env);

double environmental_shift_mhz(const RfLinkModel& model, const EnvCondition& env);
double resonance_frequency(const RfLinkModel& model, double r_load, const EnvCondition& env);

/// Lorentzian match in [0, 1], 1 when f_res sits on peak_match_mhz. The
/// half-width is half the reported bandwidth.
double match_factor(const RfLinkModel& model, double f_res_mhz);

/// Reflection-style gain at the carrier: more negative means better matched.
double gain_db(const RfLinkModel& model, double r_load, const EnvCondition& env);

double harvested_voltage(const RfLinkModel& model, double r_load, const EnvCondition& env);

double antenna_trace_resistance(const RfLinkModel& model, const EnvCondition& env);

/// Heater feed electrode resistance under strain (characterized 0..40 %).
double electrode_resistance(double strain_pct);
double electrode_resistance(const RfLinkModel& model, double strain_pct);

}  // namespace smartpack
