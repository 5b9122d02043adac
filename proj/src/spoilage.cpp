#include "smartpack/spoilage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smartpack/errors.hpp"

namespace smartpack {

using detail::require_finite;

void SpoilageParams::validate() const {
  const double fields[] = {tvbn_initial,        growth_rate_rt,        q10,
                           tvbn_cap,            nh3_per_tvbn,          inhibition_halfdose,
                           marker_yield_butanone, marker_yield_methylbutanol, marker_decay};
  for (double f : fields) require_finite(f, "spoilage parameter");
  if (tvbn_initial < 0.0 || growth_rate_rt < 0.0 || nh3_per_tvbn < 0.0 ||
      marker_yield_butanone < 0.0 || marker_yield_methylbutanol < 0.0 || marker_decay < 0.0) {
    throw InvalidInput("spoilage rates and yields must be >= 0");
  }
  if (inhibition_halfdose <= 0.0) throw InvalidInput("inhibition_halfdose must be > 0");
  if (q10 < 1.0) throw InvalidInput("q10 must be >= 1");
  if (!(tvbn_cap > tvbn_initial)) throw InvalidInput("tvbn_cap must exceed tvbn_initial");
}

SpoilageState SpoilageState::fresh(const SpoilageParams& params) {
  SpoilageState s;
  s.tvbn = params.tvbn_initial;
  return s;
}

double temperature_factor(double temp_c, const SpoilageParams& params) {
  return std::pow(params.q10, (temp_c - kReferenceTempC) / 10.0);
}

double spoilage_rate(const SpoilageState& state, double temp_c, double inhibitor_ppm,
                     const SpoilageParams& params) {
  require_finite(state.tvbn, "tvbn");
  require_finite(temp_c, "temp_c");
  require_finite(inhibitor_ppm, "inhibitor_ppm");
  if (temp_c < -5.0 || temp_c > 40.0) throw InvalidInput("temp_c outside [-5, 40] degC");
  if (inhibitor_ppm < 0.0) throw InvalidInput("inhibitor_ppm must be >= 0");

  const double headroom = std::max(0.0, 1.0 - state.tvbn / params.tvbn_cap);
  const double logistic = params.growth_rate_rt * std::max(0.0, state.tvbn) * headroom;
  return logistic * temperature_factor(temp_c, params) /
         (1.0 + inhibitor_ppm / params.inhibition_halfdose);
}

double nh3_from_tvbn(double tvbn, const SpoilageParams& params) {
  require_finite(tvbn, "tvbn");
  return std::max(0.0, params.nh3_per_tvbn * (tvbn - params.tvbn_initial));
}

double tvbn_for_nh3(double nh3_ppm, const SpoilageParams& params) {
  require_finite(nh3_ppm, "nh3_ppm");
  return params.tvbn_initial + nh3_ppm / params.nh3_per_tvbn;
}

SpoilageState step_spoilage(const SpoilageState& state, double temp_c, double inhibitor_ppm,
                            double dt_h, const SpoilageParams& params) {
  require_finite(dt_h, "dt");
  if (dt_h <= 0.0) throw InvalidInput("dt must be > 0");

  const double rate = spoilage_rate(state, temp_c, inhibitor_ppm, params);
  SpoilageState next = state;
  next.tvbn = std::min(params.tvbn_cap, state.tvbn + dt_h * rate);
  next.nh3 = nh3_from_tvbn(next.tvbn, params);
  // Markers: production tracks TVB-N production, loss is first order.
  next.butanone = std::max(
      0.0, state.butanone + dt_h * (params.marker_yield_butanone * rate -
                                    params.marker_decay * state.butanone));
  next.methylbutanol = std::max(
      0.0, state.methylbutanol + dt_h * (params.marker_yield_methylbutanol * rate -
                                         params.marker_decay * state.methylbutanol));
  next.cumulative_inhibitor_dose = state.cumulative_inhibitor_dose + dt_h * inhibitor_ppm;
  return next;
}

double tvbn_closed_form(double t_h, double temp_c, const SpoilageParams& params) {
  require_finite(t_h, "t_h");
  const double r = params.growth_rate_rt * temperature_factor(temp_c, params);
  const double k = params.tvbn_cap;
  const double n0 = params.tvbn_initial;
  if (n0 <= 0.0) return 0.0;
  return k / (1.0 + (k / n0 - 1.0) * std::exp(-r * t_h));
}

double tvbn_crossing_time(double level, double temp_c, const SpoilageParams& params) {
  const double k = params.tvbn_cap;
  const double n0 = params.tvbn_initial;
  if (level <= n0) return 0.0;
  const double r = params.growth_rate_rt * temperature_factor(temp_c, params);
  if (level >= k || r <= 0.0 || n0 <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log((k / n0 - 1.0) / (k / level - 1.0)) / r;
}

}  // namespace smartpack
