#include <doctest.h>

#include <cmath>

#include "smartpack/errors.hpp"
#include "smartpack/params.hpp"

using namespace smartpack;

TEST_CASE("steady state anchors") {
  const ThermalParams p = builtin_params().device.thermal;
  CHECK(steady_state_temp(0, p) == 20.0);
  CHECK(steady_state_temp(3, p) == doctest::Approx(27.0).epsilon(1e-6));
  CHECK(steady_state_temp(5.8, p) == doctest::Approx(37.0).epsilon(1e-6));
  const double b = std::log(17.0 / 7.0) / std::log(5.8 / 3.0);
  CHECK(p.power_exponent == doctest::Approx(b).epsilon(1e-6));
  CHECK(p.power_coefficient == doctest::Approx(7.0 / std::pow(3.0, b)).epsilon(1e-6));
  CHECK_THROWS_AS(steady_state_temp(-0.1, p), InvalidInput);
}

TEST_CASE("relaxation") {
  const ThermalParams p = builtin_params().device.thermal;
  ThermalState fixed{steady_state_temp(4.0, p)};
  CHECK(step_thermal(fixed, 4.0, 7.0, p).mat_temp_c == doctest::Approx(fixed.mat_temp_c).epsilon(1e-15));

  ThermalState s{37.0};
  for (int i = 0; i < 10000; ++i) s = step_thermal(s, 0.0, 10.0, p);
  CHECK(s.mat_temp_c == doctest::Approx(20.0).epsilon(1e-9));

  s = ThermalState{20.0};
  const double dt = 1.0;
  for (int i = 0; i < 5 * 60; ++i) s = step_thermal(s, 5.8, dt, p);
  const double analytic = 37.0 - 17.0 * std::exp(-5.0);
  CHECK(s.mat_temp_c == doctest::Approx(analytic).epsilon(0.002));
  CHECK(std::abs(s.mat_temp_c - 37.0) / 37.0 < 0.01);

  CHECK_THROWS_AS(step_thermal(s, 1.0, 0.0, p), InvalidInput);
}

TEST_CASE("no overshoot for dt up to tau") {
  const ThermalParams p = builtin_params().device.thermal;
  for (double dt : {1.0, 10.0, 30.0, 60.0}) {
    ThermalState s{20.0};
    const double target = steady_state_temp(5.8, p);
    for (int i = 0; i < 500; ++i) {
      s = step_thermal(s, 5.8, dt, p);
      CHECK(s.mat_temp_c <= target + 1e-12);
    }
  }
}

TEST_CASE("monotone and power law scaling") {
  const ThermalParams p = builtin_params().device.thermal;
  double prev = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const double t = steady_state_temp(0.01 * i, p);
    CHECK(t > prev);
    prev = t;
  }
  for (double v : {0.5, 1.0, 2.9}) {
    const double ratio = (steady_state_temp(2 * v, p) - 20.0) / (steady_state_temp(v, p) - 20.0);
    CHECK(ratio == doctest::Approx(std::pow(2.0, p.power_exponent)).epsilon(1e-12));
  }
}

TEST_CASE("series resistance derates the heater") {
  ThermalParams p = builtin_params().device.thermal;
  const double full = steady_state_temp(5.8, p);
  p.series_electrode_resistance = 5.0;
  const double derate = std::pow(100.0 / 105.0, p.power_exponent);
  CHECK(steady_state_temp(5.8, p) - 20.0 == doctest::Approx((full - 20.0) * derate));
  p.heater_resistance = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
}
