#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smartpack/calibrate.hpp"
#include "smartpack/config_io.hpp"
#include "smartpack/errors.hpp"
#include "support.hpp"

using namespace smartpack;
using nlohmann::json;

namespace {

const AnchorSet& bundled() {
  static const AnchorSet a = read_anchors_csv(testsupport::source_dir() / "anchors" / "paper_anchors.csv");
  return a;
}

Anchor point(const char* id, json input, double observed, double tol) {
  return Anchor{id, std::move(input), observed, tol, "test"};
}

// y = p0 + p1 * x + p2 * x^2 + p3 * x^3
const AnchorModel kPoly = [](std::span<const double> p, const Anchor& a) {
  const double x = a.input["x"].get<double>();
  double y = 0, xi = 1;
  for (double c : p) y += c * xi, xi *= x;
  return y;
};

}  // namespace

TEST_CASE("thermal objective near the closed-form solve") {
  const AnchorSet anchors = select_anchors(bundled(), "thermal");
  const CalibrationProblem pb = make_problem("thermal", builtin_params());
  const double x[] = {1.594, 1.346};
  CHECK(objective(x, anchors, pb.model, pb.box) < 1e-4);
}

TEST_CASE("perturbing the optimum raises the objective") {
  const ModelParams m = builtin_params();
  const AnchorSet anchors = select_anchors(bundled(), "thermal");
  const CalibrationProblem pb = make_problem("thermal", m);
  const double best[] = {m.device.thermal.power_coefficient, m.device.thermal.power_exponent};
  const double f0 = objective(best, anchors, pb.model, pb.box);
  for (int k = 0; k < 2; ++k) {
    for (double s : {-1e-3, 1e-3}) {
      double x[] = {best[0], best[1]};
      x[k] *= 1 + s;
      CHECK(objective(x, anchors, pb.model, pb.box) > f0);
    }
  }
}

TEST_CASE("exact parameters give zero and the objective ignores anchor order") {
  const ParamBox box = {{"a", -5, 5}, {"b", -5, 5}};
  AnchorSet anchors;
  for (double x : {0.0, 1.0, 2.0, 3.0}) anchors.push_back(point("poly", {{"x", x}}, 1.5 - 0.5 * x, 0.1));
  const double p[] = {1.5, -0.5};
  CHECK(objective(p, anchors, kPoly, box) == 0.0);
  const double q[] = {1.0, 0.2};
  const double f = objective(q, anchors, kPoly, box);
  std::reverse(anchors.begin(), anchors.end());
  CHECK(objective(q, anchors, kPoly, box) == doctest::Approx(f).epsilon(1e-15));
}

TEST_CASE("out of bounds gives a finite penalty") {
  const ParamBox box = {{"a", 0, 1}};
  const AnchorSet anchors = {point("poly", {{"x", 0.0}}, 0.5, 0.1)};
  const double x[] = {2.0};
  const double f = objective(x, anchors, kPoly, box);
  CHECK(std::isfinite(f));
  CHECK(f >= 1e12);
}

TEST_CASE("synthetic round trip recovers planted parameters") {
  const std::vector<double> planted = {0.7, -1.3, 0.45, 0.12};
  const ParamBox box = {{"c0", -3, 3}, {"c1", -3, 3}, {"c2", -3, 3}, {"c3", -3, 3}};
  AnchorSet anchors;
  for (int i = 0; i < 9; ++i) {
    const double x = -2 + 0.5 * i;
    anchors.push_back(point("poly", {{"x", x}}, kPoly(planted, point("", {{"x", x}}, 0, 1)), 0.05));
  }
  std::vector<double> init = planted;
  for (auto& v : init) v *= 1.1;
  const FitResult r = fit(kPoly, anchors, init, box);
  CHECK(r.converged);
  for (std::size_t i = 0; i < planted.size(); ++i) {
    CHECK(std::abs(r.params[i] - planted[i]) <= 1e-6 * std::abs(planted[i]));
  }
  double sum = 0;
  for (double e : r.anchor_residuals) sum += e * e;
  CHECK(sum == doctest::Approx(r.residual));
  const FitResult again = fit(kPoly, anchors, init, box);
  CHECK(again.params == r.params);
}

TEST_CASE("release rate fit against the closed form") {
  const AnchorSet anchors = select_anchors(bundled(), "release_rate_ca");
  const CalibrationProblem pb = make_problem("release_rate_ca", builtin_params());
  const FitResult r = fit(pb.model, anchors, pb.init, pb.box);
  const double k = -std::log(0.33) / 24.0;
  CHECK(std::abs(r.params[0] - k) <= 0.0005);

  ParamBox narrow = {{"rate_constant", 0.03, 0.06}};
  const FitResult g = grid_oracle(pb.model, anchors, narrow, 1024);
  CHECK(std::abs(g.params[0] - k) <= (0.06 - 0.03) / 1023.0);
}

TEST_CASE("convex two parameter problem on the grid") {
  const AnchorModel bowl = [](std::span<const double> p, const Anchor& a) {
    return a.input["axis"] == 0 ? p[0] : p[1];
  };
  const AnchorSet anchors = {point("bowl", {{"axis", 0}}, 0.3, 1), point("bowl", {{"axis", 1}}, -0.7, 1)};
  const ParamBox box = {{"x", -1, 1}, {"y", -1, 1}};
  const FitResult g = grid_oracle(bowl, anchors, box, 33);
  const double cell = 2.0 / 32.0;
  CHECK(std::abs(g.params[0] - 0.3) <= cell);
  CHECK(std::abs(g.params[1] + 0.7) <= cell);
  CHECK(g.iterations == 33 * 33);
}

TEST_CASE("grid oracle limits") {
  const ParamBox five(5, ParamSpec{"p", 0, 1});
  const AnchorSet anchors = {point("poly", {{"x", 1.0}}, 0, 1)};
  CHECK_THROWS_AS(grid_oracle(kPoly, anchors, five, 16), Unsupported);
  const ParamBox one = {{"p", 0, 1}};
  CHECK_THROWS_AS(grid_oracle(kPoly, anchors, one, 8), InvalidInput);
}

TEST_CASE("fit reports non-convergence instead of throwing") {
  const AnchorSet anchors = {point("poly", {{"x", 1.0}}, 0.5, 1), point("poly", {{"x", 2.0}}, 0.1, 1)};
  const ParamBox box = {{"a", -5, 5}, {"b", -5, 5}};
  const FitResult r = fit(kPoly, anchors, {3.0, 3.0}, box, FitOptions{1e-8, 3});
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
}

TEST_CASE("every bundled problem beats its grid oracle") {
  const CalibrationReport report = calibrate_all(bundled(), builtin_params());
  ModelParams upstream = builtin_params();
  apply_table_anchors(bundled(), upstream.device.rf);
  for (const auto& st : report.stages) {
    CAPTURE(st.model_id);
    const CalibrationProblem pb = make_problem(st.model_id, upstream);
    REQUIRE(pb.box.size() <= 4);
    const FitResult g = grid_oracle(pb.model, st.anchors, pb.box, 16);
    CHECK(st.result.converged);
    CHECK(st.result.residual <= g.residual + 1e-6);
    CHECK(st.result.at_bound.empty());
    pb.apply(upstream, st.result.params);
  }
}

TEST_CASE("spoilage room temperature fit is close to the grid residual") {
  ModelParams upstream = builtin_params();
  const AnchorSet anchors = select_anchors(bundled(), "spoilage_rt");
  const CalibrationProblem pb = make_problem("spoilage_rt", upstream);
  const FitResult r = fit(pb.model, anchors, pb.init, pb.box);
  const FitResult g = grid_oracle(pb.model, anchors, pb.box, 24);
  CHECK(r.residual <= 1.05 * g.residual + 1e-9);
}

TEST_CASE("builtin parameters equal a fresh calibration") {
  const CalibrationReport report = calibrate_all(bundled(), builtin_params());
  CHECK(params_to_json(report.params) == params_to_json(builtin_params()));
}

TEST_CASE("anchor csv parsing") {
  std::istringstream good(
      "model_id,input_json,observed,tolerance,provenance\r\n"
      "thermal,\"{\"\"v\"\": 3}\",27,1.35,\"note, with comma\"\r\n");
  const AnchorSet a = parse_anchors_csv(good);
  REQUIRE(a.size() == 1);
  CHECK(a[0].input["v"] == 3);
  CHECK(a[0].provenance == "note, with comma");

  auto bad = [](const std::string& row) {
    std::istringstream in("model_id,input_json,observed,tolerance,provenance\n" + row + "\n");
    return parse_anchors_csv(in);
  };
  CHECK_THROWS_AS(bad("thermal,{},27,0,x"), ConfigError);
  CHECK_THROWS_AS(bad("thermal,{},27,1,"), ConfigError);
  CHECK_THROWS_AS(bad("thermal,nope,27,1,x"), ConfigError);
  CHECK_THROWS_AS(bad("thermal,{},abc,1,x"), ConfigError);
  CHECK_THROWS_AS(bad("thermal,\"{\"\"bound\"\": \"\"side\"\"}\",1,1,x"), ConfigError);
  CHECK_THROWS_AS(read_anchors_csv("/nonexistent.csv"), IoError);
  for (const auto& anchor : bundled()) {
    CHECK(anchor.tolerance > 0);
    CHECK_FALSE(anchor.provenance.empty());
  }
}

TEST_CASE("table anchors become table knots") {
  RfLinkModel rf;
  rf.env_tables = EnvShiftTables{};
  rf.coupling_table.clear();
  apply_table_anchors(bundled(), rf);
  CHECK(rf.env_tables == EnvShiftTables::characterized());
  REQUIRE(rf.coupling_table.size() == 1);
  CHECK(rf.coupling_table[0] == CouplingEntry{kOptimalPosition, 1.0});
}
