#include <doctest.h>

#include <cmath>

#include "smartpack/errors.hpp"
#include "smartpack/params.hpp"

using namespace smartpack;

namespace {

const RfLinkModel& rf() {
  static const RfLinkModel m = builtin_params().device.rf;
  return m;
}

double r_at(double nh3) { return sensor_resistance(nh3, 0, 0, builtin_params().device.sensor); }

}  // namespace

TEST_CASE("resonance examples") {
  const EnvCondition neutral;
  CHECK(resonance_frequency(rf(), 900, neutral) == doctest::Approx(14.0).epsilon(1e-6));
  CHECK(resonance_frequency(rf(), 1800, neutral) == doctest::Approx(13.6).epsilon(1e-6));
  EnvCondition e = neutral;
  e.strain_pct = 40;
  CHECK(resonance_frequency(rf(), 900, e) == doctest::Approx(12.0).epsilon(1e-6));
  e = neutral;
  e.bend_cycles = 5000;
  CHECK(resonance_frequency(rf(), 900, e) == doctest::Approx(15.5).epsilon(1e-6));
  RfLinkModel bare = rf();
  bare.encapsulated = false;
  e = neutral;
  e.temp_c = 25;
  CHECK(resonance_frequency(bare, 900, e) == doctest::Approx(14.9).epsilon(1e-6));
  e = neutral;
  e.humidity_rh = 80;
  CHECK(resonance_frequency(bare, 900, e) == doctest::Approx(15.5).epsilon(1e-6));
  CHECK(resonance_frequency(rf(), 900, e) == doctest::Approx(14.0).epsilon(1e-6));
  CHECK_THROWS_AS(resonance_frequency(rf(), 0, neutral), InvalidInput);
  CHECK_THROWS_AS(resonance_frequency(rf(), -5, neutral), InvalidInput);
}

TEST_CASE("gain endpoints and monotone sweep") {
  const EnvCondition neutral;
  CHECK(gain_db(rf(), r_at(0), neutral) == doctest::Approx(0.4).epsilon(1e-5));
  CHECK(gain_db(rf(), r_at(90), neutral) == doctest::Approx(-5.6).epsilon(1e-5));
  const double mid = gain_db(rf(), r_at(45), neutral);
  CHECK(mid < 0.4);
  CHECK(mid > -5.6);
  double prev = INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double g = gain_db(rf(), r_at(0.09 * i), neutral);
    CHECK(g <= prev);
    prev = g;
  }
}

TEST_CASE("harvested voltage") {
  EnvCondition env;
  env.position = kOptimalPosition;
  CHECK(harvested_voltage(rf(), r_at(40), env) == doctest::Approx(5.8).epsilon(1e-6));
  RfLinkModel off = rf();
  off.coupling_table = {{kOptimalPosition, 0.0}};
  CHECK(harvested_voltage(off, r_at(40), env) == 0.0);
  double best = 0.0;
  std::string best_pos;
  for (const auto& e : rf().coupling_table) {
    if (e.coupling > best) best = e.coupling, best_pos = e.position;
  }
  CHECK(best_pos == kOptimalPosition);
}

TEST_CASE("voltage peaks where resonance sits on 13.6 MHz") {
  EnvCondition env;
  env.position = kOptimalPosition;
  RfLinkModel wide = rf();
  wide.pull_mhz = 1.2;  // sweep carries f_res through the peak
  double best_v = -1, best_f = 0;
  for (int i = 0; i <= 100000; ++i) {
    const double r = 900 + 0.009 * i;
    const double v = harvested_voltage(wide, r, env);
    if (v > best_v) best_v = v, best_f = resonance_frequency(wide, r, env);
  }
  CHECK(best_f == doctest::Approx(13.6).epsilon(1e-5));
  CHECK(best_v == doctest::Approx(wide.v_peak).epsilon(1e-9));
}

TEST_CASE("lower gain goes with higher voltage") {
  EnvCondition env;
  env.position = kOptimalPosition;
  double g_prev = INFINITY, v_prev = -1;
  for (int i = 0; i <= 1000; ++i) {
    const double r = r_at(0.09 * i);
    const double g = gain_db(rf(), r, env), v = harvested_voltage(rf(), r, env);
    CHECK(g <= g_prev);
    CHECK(v >= v_prev);
    g_prev = g, v_prev = v;
  }
}

TEST_CASE("electrode and trace resistance tables") {
  CHECK(electrode_resistance(0) == doctest::Approx(3.0));
  CHECK(electrode_resistance(40) == doctest::Approx(8.0));
  CHECK(electrode_resistance(20) == doctest::Approx(5.5));
  CHECK(electrode_resistance(60) == doctest::Approx(8.0));
  EnvCondition e;
  CHECK(antenna_trace_resistance(rf(), e) == doctest::Approx(0.3));
  e.strain_pct = 40;
  CHECK(antenna_trace_resistance(rf(), e) == doctest::Approx(2.2));
}

TEST_CASE("coupling lookup falls back to the nearest entry") {
  RfLinkModel m = rf();
  m.coupling_table = {{"inner_edge@5", 1.0}, {"inner_edge@10", 0.5}, {"center@5", 0.3}};
  CHECK(resolve_coupling(m, "inner_edge@5").exact);
  const auto near = resolve_coupling(m, "inner_edge@9");
  CHECK_FALSE(near.exact);
  CHECK(near.matched == "inner_edge@10");
  CHECK(resolve_coupling(m, "corner@6").matched == "inner_edge@5");
  EnvCondition e;
  e.position = "inner_edge@9";
  CHECK(extrapolated_fields(m, e) == std::vector<std::string>{"position"});
  m.coupling_table.clear();
  CHECK_THROWS(resolve_coupling(m, "inner_edge@5"));
}

TEST_CASE("LC values agree with the nominal resonance") {
  CHECK(rf().lc_resonance_mhz() == doctest::Approx(rf().f_res_nominal_mhz).epsilon(1e-9));
  RfLinkModel bad = rf();
  bad.capacitance_f *= 1.1;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("extrapolation is flagged") {
  EnvCondition e;
  e.strain_pct = 50;
  e.bend_cycles = 6000;
  const auto f = extrapolated_fields(rf(), e);
  CHECK(f == std::vector<std::string>{"strain_pct", "bend_cycles"});
  RfLinkModel bare = rf();
  bare.encapsulated = false;
  e = EnvCondition{};
  e.humidity_rh = 90;
  CHECK(extrapolated_fields(bare, e) == std::vector<std::string>{"humidity_rh"});
  CHECK(extrapolated_fields(rf(), e).empty());
}
