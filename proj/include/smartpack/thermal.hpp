#pragma once

namespace smartpack {

/// Joule-heated mat. Steady state follows ambient + a * v^b; the feed
/// electrodes' extra series resistance derates the coefficient by
/// (R_h / (R_h + R_s))^b.
struct ThermalParams {
  double heater_resistance = 100.0;          // Ohm
  double series_electrode_resistance = 0.0;  // Ohm above the calibration condition
  double power_exponent = 1.3459371683701769;
  double power_coefficient = 1.5955955244433169;  // degC / V^b
  double time_constant_s = 60.0;
  double ambient_c = 20.0;

  void validate() const;
  double effective_coefficient() const;
};

struct ThermalState {
  double mat_temp_c = 20.0;
};

double steady_state_temp(double v, const ThermalParams& params);

/// First-order relaxation toward steady_state_temp(v) over `dt_s` seconds.
ThermalState step_thermal(ThermalState state, double v, double dt_s, const ThermalParams& params);

}  // namespace smartpack
