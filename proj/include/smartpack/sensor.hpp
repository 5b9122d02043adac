#pragma once

#include <string_view>

namespace smartpack {

enum class Gas { NH3, CH4, CO2 };

/// Parses "NH3" / "CH4" / "CO2" (case-insensitive); throws InvalidInput otherwise.
Gas parse_gas(std::string_view name);
const char* gas_name(Gas gas);

/// SWCNT chemiresistor.
///
/// Two NH3 responses are kept apart. The cumulative, non-recovering curve
/// (r_baseline -> r_saturated over 0..nh3_linear_max) is what loads the
/// antenna in the closed loop. `nh3_transient_response` is the fractional
/// change of a single recovering exposure at nh3_linear_max and only feeds
/// `response_percent`. Cross-sensitivities are linear and unsaturated.
struct SensorModel {
  double r_baseline = 900.0;
  double r_saturated = 1800.0;
  double nh3_linear_max = 90.0;
  double nh3_transient_response = 0.13;
  double sens_ch4 = 1.0e-4;          // fractional response per ppm
  double sens_co2 = 0.035 / 7500.0;  // fractional response per ppm
  double passivation_factor = 1.0;
  double bend_cycles = 0.0;
  double bend_loss_at_5000 = 0.05;

  void validate() const;

  /// Combined passivation and bending scale applied to the NH3 terms.
  double nh3_scale() const;
  /// Cumulative fractional resistance change per ppm NH3, scaled.
  double nh3_slope() const;
};

double sensor_resistance(double nh3_ppm, double ch4_ppm, double co2_ppm, const SensorModel& model);

/// Transient single-gas response, in percent of the baseline resistance.
double response_percent(Gas gas, double conc_ppm, const SensorModel& model);

/// Adds `cycles` bending cycles to the model's history; NH3 sensitivity
/// falls linearly to (1 - bend_loss_at_5000) at 5000 cycles, then holds.
SensorModel degrade_by_bending(SensorModel model, double cycles);

}  // namespace smartpack
