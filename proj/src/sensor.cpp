#include "smartpack/sensor.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "smartpack/errors.hpp"

namespace smartpack {

using detail::require_finite;

Gas parse_gas(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "NH3") return Gas::NH3;
  if (upper == "CH4") return Gas::CH4;
  if (upper == "CO2") return Gas::CO2;
  throw InvalidInput("unknown gas '" + std::string(name) + "' (expected NH3, CH4 or CO2)");
}

const char* gas_name(Gas gas) {
  switch (gas) {
    case Gas::NH3: return "NH3";
    case Gas::CH4: return "CH4";
    case Gas::CO2: return "CO2";
  }
  return "?";
}

void SensorModel::validate() const {
  const double fields[] = {r_baseline,       r_saturated,         nh3_linear_max,
                           nh3_transient_response, sens_ch4,      sens_co2,
                           passivation_factor, bend_cycles,       bend_loss_at_5000};
  for (double f : fields) require_finite(f, "sensor parameter");
  if (!(r_baseline > 0.0) || !(r_saturated > r_baseline)) {
    throw InvalidInput("sensor requires r_saturated > r_baseline > 0");
  }
  if (!(nh3_linear_max > 0.0)) throw InvalidInput("nh3_linear_max must be > 0");
  if (!(passivation_factor > 0.0 && passivation_factor <= 1.0)) {
    throw InvalidInput("passivation_factor must lie in (0, 1]");
  }
  if (!(bend_loss_at_5000 >= 0.0 && bend_loss_at_5000 < 1.0)) {
    throw InvalidInput("bend_loss_at_5000 must lie in [0, 1)");
  }
  if (bend_cycles < 0.0 || sens_ch4 < 0.0 || sens_co2 < 0.0 || nh3_transient_response < 0.0) {
    throw InvalidInput("sensor sensitivities and bend_cycles must be >= 0");
  }
}

double SensorModel::nh3_scale() const {
  const double bend = 1.0 - bend_loss_at_5000 * std::min(bend_cycles / 5000.0, 1.0);
  return passivation_factor * bend;
}

double SensorModel::nh3_slope() const {
  return (r_saturated / r_baseline - 1.0) / nh3_linear_max * nh3_scale();
}

double sensor_resistance(double nh3_ppm, double ch4_ppm, double co2_ppm, const SensorModel& model) {
  require_finite(nh3_ppm, "nh3");
  require_finite(ch4_ppm, "ch4");
  require_finite(co2_ppm, "co2");
  if (nh3_ppm < 0.0 || ch4_ppm < 0.0 || co2_ppm < 0.0) {
    throw InvalidInput("gas concentrations must be >= 0");
  }
  const double nh3 = std::min(nh3_ppm, model.nh3_linear_max);
  return model.r_baseline *
         (1.0 + model.nh3_slope() * nh3 + model.sens_ch4 * ch4_ppm + model.sens_co2 * co2_ppm);
}

double response_percent(Gas gas, double conc_ppm, const SensorModel& model) {
  require_finite(conc_ppm, "concentration");
  if (conc_ppm < 0.0) throw InvalidInput("concentration must be >= 0");
  switch (gas) {
    case Gas::NH3: {
      const double nh3 = std::min(conc_ppm, model.nh3_linear_max);
      return 100.0 * model.nh3_transient_response * model.nh3_scale() * nh3 / model.nh3_linear_max;
    }
    case Gas::CH4: return 100.0 * model.sens_ch4 * conc_ppm;
    case Gas::CO2: return 100.0 * model.sens_co2 * conc_ppm;
  }
  throw InvalidInput("unknown gas");
}

SensorModel degrade_by_bending(SensorModel model, double cycles) {
  require_finite(cycles, "cycles");
  if (cycles < 0.0) throw InvalidInput("cycles must be >= 0");
  model.bend_cycles += cycles;
  return model;
}

}  // namespace smartpack
