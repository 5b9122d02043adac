#pragma once

// Spoilage plant: TVB-N growth, headspace NH3, and marker VOCs.

namespace smartpack {

inline constexpr double kReferenceTempC = 20.0;
inline constexpr double kTvbnLimit = 25.0;  // mg per 100 g

struct SpoilageParams {
  double tvbn_initial = 0.0;         // mg / 100 g
  double growth_rate_rt = 0.0;       // 1/h at kReferenceTempC
  double q10 = 0.0;                  // rate factor per +10 degC
  double tvbn_cap = 0.0;             // logistic ceiling, mg / 100 g
  double nh3_per_tvbn = 0.0;         // ppm per (mg / 100 g) above tvbn_initial
  double inhibition_halfdose = 0.0;  // ppm of CA + EG that halves the rate
  double marker_yield_butanone = 0.0;       // ppm per (mg / 100 g) of TVB-N produced
  double marker_yield_methylbutanol = 0.0;  // ppm per (mg / 100 g) of TVB-N produced
  double marker_decay = 0.0;                // 1/h, shared headspace loss of both markers

  /// Throws InvalidInput when a field breaks its invariant.
  void validate() const;
};

struct SpoilageState {
  double tvbn = 0.0;
  double nh3 = 0.0;
  double butanone = 0.0;
  double methylbutanol = 0.0;
  double cumulative_inhibitor_dose = 0.0;  // ppm h

  static SpoilageState fresh(const SpoilageParams& params);
};

/// q10^((T - 20) / 10).
double temperature_factor(double temp_c, const SpoilageParams& params);

/// Logistic TVB-N growth rate in mg / 100 g / h, slowed by temperature and
/// divided by (1 + inhibitor / halfdose).
double spoilage_rate(const SpoilageState& state, double temp_c, double inhibitor_ppm,
                     const SpoilageParams& params);

/// Linear headspace NH3 map, clamped at zero below the initial TVB-N.
double nh3_from_tvbn(double tvbn, const SpoilageParams& params);

/// Inverse of nh3_from_tvbn on the rising branch.
double tvbn_for_nh3(double nh3_ppm, const SpoilageParams& params);

/// One explicit Euler step of `dt_h` hours.
SpoilageState step_spoilage(const SpoilageState& state, double temp_c, double inhibitor_ppm,
                            double dt_h, const SpoilageParams& params);

/// Exact logistic solution at constant temperature without inhibitor.
double tvbn_closed_form(double t_h, double temp_c, const SpoilageParams& params);

/// Time at which the uninhibited closed-form TVB-N first reaches `level`;
/// +infinity when the ceiling is at or below it.
double tvbn_crossing_time(double level, double temp_c, const SpoilageParams& params);

}  // namespace smartpack
