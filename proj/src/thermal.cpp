#include "smartpack/thermal.hpp"

#include <cmath>

#include "smartpack/errors.hpp"

namespace smartpack {

using detail::require_finite;

void ThermalParams::validate() const {
  const double fields[] = {heater_resistance, series_electrode_resistance, power_exponent,
                           power_coefficient, time_constant_s, ambient_c};
  for (double f : fields) require_finite(f, "thermal parameter");
  if (!(heater_resistance > 0.0)) throw InvalidInput("heater_resistance must be > 0");
  if (series_electrode_resistance < 0.0) {
    throw InvalidInput("series_electrode_resistance must be >= 0");
  }
  if (!(time_constant_s > 0.0)) throw InvalidInput("time_constant must be > 0");
  if (!(power_coefficient > 0.0)) throw InvalidInput("power_coefficient must be > 0");
  if (!(power_exponent > 0.0)) throw InvalidInput("power_exponent must be > 0");
}

double ThermalParams::effective_coefficient() const {
  const double divider = heater_resistance / (heater_resistance + series_electrode_resistance);
  return power_coefficient * std::pow(divider, power_exponent);
}

double steady_state_temp(double v, const ThermalParams& params) {
  require_finite(v, "voltage");
  if (v < 0.0) throw InvalidInput("voltage must be >= 0");
  return params.ambient_c + params.effective_coefficient() * std::pow(v, params.power_exponent);
}

ThermalState step_thermal(ThermalState state, double v, double dt_s, const ThermalParams& params) {
  require_finite(dt_s, "dt");
  require_finite(state.mat_temp_c, "mat temperature");
  if (dt_s <= 0.0) throw InvalidInput("dt must be > 0");
  const double target = steady_state_temp(v, params);
  state.mat_temp_c += dt_s / params.time_constant_s * (target - state.mat_temp_c);
  return state;
}

}  // namespace smartpack
