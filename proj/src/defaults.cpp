#include "smartpack/params.hpp"

namespace smartpack {

// Output of `smartpack calibrate --anchors anchors/paper_anchors.csv`;
// tests/test_calibrate.cpp checks these against a fresh calibration.
ModelParams builtin_params() {
  ModelParams p;

  SpoilageParams& food = p.food;
  food.tvbn_initial = 1.2999999904999078;
  food.growth_rate_rt = 0.481287987390183;
  food.q10 = 2.606521916389465;
  food.tvbn_cap = 25.208070077203022;
  food.nh3_per_tvbn = 2.5316455727815628;
  food.inhibition_halfdose = 0.00010000000000000009;
  food.marker_yield_butanone = 186.10937471220103;
  food.marker_yield_methylbutanol = 1243.9055881038332;
  food.marker_decay = 0.32246815814374136;

  SensorModel& sensor = p.device.sensor;
  sensor.r_baseline = 899.9999948202644;
  sensor.r_saturated = 1799.9999743436101;
  sensor.nh3_linear_max = 90.0;
  sensor.nh3_transient_response = 0.1299999985427428;
  sensor.sens_ch4 = 0.00010000000008507781;
  sensor.sens_co2 = 4.666666543559948e-06;
  sensor.passivation_factor = 1.0;
  sensor.bend_loss_at_5000 = 0.0499999976158142;

  RfLinkModel& rf = p.device.rf;
  rf.f_res_nominal_mhz = 13.999999999526338;
  rf.pull_mhz = 0.3999999938929268;
  rf.gain_fullscale_db = -6.200000042733468;
  rf.gain_slope_db_per_mhz = 15.000000126199682;
  rf.v_peak = 5.927297732234002;
  rf.back_solve_capacitance();
  rf.coupling_table = {{kOptimalPosition, 1.0}, {kValidationPosition, 0.771989}};

  ThermalParams& thermal = p.device.thermal;
  thermal.power_coefficient = 1.5955955289321404;
  thermal.power_exponent = 1.3459371670233107;

  ReleaseParams& release = p.device.release;
  release.lcst_c = 32.0;
  release.ca = {1.0, 0.046191311595683945, 2903.7660972368326, 0.32246815814374136};
  release.eg = {1.0, 0.25000000000000006, 130.52694167912648, 0.07217748500915445};
  return p;
}

}  // namespace smartpack
