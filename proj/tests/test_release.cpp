#include <doctest.h>

#include <cmath>
#include <random>

#include "smartpack/errors.hpp"
#include "smartpack/params.hpp"

using namespace smartpack;

namespace {

ReleaseState open_for(double hours, double dt_h, const ReleaseParams& p) {
  ReleaseState s = ReleaseState::loaded(p);
  const long n = std::lround(hours / dt_h);
  for (long i = 0; i < n; ++i) s = step_release(s, true, dt_h, p);
  return s;
}

constexpr double kDt = 10.0 / 3600.0;

}  // namespace

TEST_CASE("gate threshold") {
  const ReleaseParams p = builtin_params().device.release;
  CHECK_FALSE(gate_open(20, p));
  CHECK(gate_open(32, p));
  CHECK(gate_open(37, p));
  CHECK_FALSE(gate_open(std::nextafter(32.0, 0.0), p));
}

TEST_CASE("cumulative release after 24 h open") {
  const ReleaseParams p = builtin_params().device.release;
  const ReleaseState s = open_for(24, kDt, p);
  CHECK(std::abs(s.ca.released_fraction(1) - 0.67) <= 0.01);
  CHECK(s.eg.released_fraction(1) >= 0.995);
  CHECK(p.ca.rate_constant == doctest::Approx(-std::log(0.33) / 24).epsilon(0.0005 / 0.0462));
}

TEST_CASE("closed gate for 24 h releases nothing") {
  const ReleaseParams p = builtin_params().device.release;
  ReleaseState s = ReleaseState::loaded(p);
  for (int i = 0; i < 8640; ++i) s = step_release(s, false, kDt, p);
  CHECK(s.ca.released == 0.0);
  CHECK(s.eg.released == 0.0);
  CHECK(s.ca.remaining == 1.0);
  CHECK(headspace_concentrations(ReleaseState::loaded(p)) == std::pair{0.0, 0.0});
}

TEST_CASE("headspace anchors") {
  const ReleaseParams p = builtin_params().device.release;
  const auto [ca4, eg4] = headspace_concentrations(open_for(4, kDt, p));
  const auto [ca24, eg24] = headspace_concentrations(open_for(24, kDt, p));
  CHECK(std::abs(ca4 - 270) <= 15);
  CHECK(std::abs(eg4 - 70) <= 5);
  CHECK(std::abs(ca24 - 160) <= 10);
  CHECK(std::abs(eg24 - 32) <= 3);
}

TEST_CASE("analytic first order curve") {
  const ReleaseParams p = builtin_params().device.release;
  ReleaseState s = ReleaseState::loaded(p);
  for (int i = 1; i <= 8640; ++i) {
    s = step_release(s, true, kDt, p);
    if (i % 360 == 0) {
      const double t = i * kDt;
      const double exact = 1.0 - std::exp(-p.ca.rate_constant * t);
      CHECK(std::abs(s.ca.released_fraction(1) - exact) <= 1e-3 * exact);
    }
  }
}

TEST_CASE("mass balance and monotone release under random gating") {
  const ReleaseParams p = builtin_params().device.release;
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  ReleaseState s = ReleaseState::loaded(p);
  for (int i = 0; i < 20000; ++i) {
    const ReleaseState n = step_release(s, coin(rng), 0.01, p);
    CHECK(n.ca.released >= s.ca.released);
    CHECK(n.eg.released <= 1.0);
    CHECK(std::abs(n.ca.released + n.ca.remaining - 1.0) <= 4 * (i + 1) * 1.2e-16);
    CHECK(n.ca.headspace_ppm >= 0);
    s = n;
  }
}

TEST_CASE("headspace decays with the gate shut") {
  const ReleaseParams p = builtin_params().device.release;
  ReleaseState s = open_for(4, kDt, p);
  for (int i = 0; i < 1000; ++i) {
    const ReleaseState n = step_release(s, false, 0.05, p);
    CHECK(n.ca.headspace_ppm <= s.ca.headspace_ppm);
    CHECK(n.eg.headspace_ppm <= s.eg.headspace_ppm);
    s = n;
  }
}

TEST_CASE("invalid inputs") {
  ReleaseParams p = builtin_params().device.release;
  CHECK_THROWS_AS(step_release(ReleaseState::loaded(p), true, 0, p), InvalidInput);
  p.ca.rate_constant = 0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = builtin_params().device.release;
  p.eg.total_load = -1;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
}
