#include "smartpack/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "csv.hpp"
#include "smartpack/engine.hpp"
#include "smartpack/errors.hpp"
#include "smartpack/trace_io.hpp"

namespace smartpack {

using nlohmann::json;

// ---------------------------------------------------------------- anchors

AnchorSet parse_anchors_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<std::string>> records;
  try {
    records = detail::read_csv_records(in);
  } catch (const InvalidInput& e) {
    throw ConfigError(source, e.what());
  }
  const std::vector<std::string> header = {"model_id", "input_json", "observed", "tolerance",
                                           "provenance"};
  if (records.empty() || records[0] != header) {
    throw ConfigError(source, "header must be model_id,input_json,observed,tolerance,provenance");
  }
  AnchorSet anchors;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = source + ":" + std::to_string(r + 1);
    if (rec.size() == 1 && !rec[0].empty() && rec[0][0] == '#') continue;
    if (rec.size() != header.size()) throw ConfigError(where, "expected 5 fields");
    Anchor a;
    a.model_id = rec[0];
    if (a.model_id.empty()) throw ConfigError(where + ".model_id", "must not be empty");
    try {
      a.input = json::parse(rec[1]);
    } catch (const json::parse_error&) {
      throw ConfigError(where + ".input_json", "malformed JSON");
    }
    if (!a.input.is_object()) throw ConfigError(where + ".input_json", "must be a JSON object");
    auto number = [&](const std::string& field, const std::string& text) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw ConfigError(where + "." + field, "not a finite number");
      }
      return v;
    };
    a.observed = number("observed", rec[2]);
    a.tolerance = number("tolerance", rec[3]);
    if (!(a.tolerance > 0.0)) throw ConfigError(where + ".tolerance", "must be > 0");
    a.provenance = rec[4];
    if (a.provenance.empty()) throw ConfigError(where + ".provenance", "must not be empty");
    if (a.input.contains("bound")) {
      const auto& b = a.input["bound"];
      if (!b.is_string() || (b != "upper" && b != "lower")) {
        throw ConfigError(where + ".input_json.bound", "must be \"upper\" or \"lower\"");
      }
    }
    anchors.push_back(std::move(a));
  }
  return anchors;
}

AnchorSet read_anchors_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_anchors_csv(in, path.string());
}

AnchorSet select_anchors(const AnchorSet& anchors, std::string_view model_id) {
  AnchorSet out;
  for (const auto& a : anchors) {
    if (a.model_id == model_id) out.push_back(a);
  }
  return out;
}

// -------------------------------------------------------------- objective

namespace {

constexpr double kPenalty = 1e12;

double to_param(const ParamSpec& s, double u) {
  if (s.log_scale) return std::exp(std::log(s.lo) + u * (std::log(s.hi) - std::log(s.lo)));
  return s.lo + u * (s.hi - s.lo);
}

double to_unit(const ParamSpec& s, double x) {
  if (s.log_scale) return (std::log(x) - std::log(s.lo)) / (std::log(s.hi) - std::log(s.lo));
  return (x - s.lo) / (s.hi - s.lo);
}

void check_box(const ParamBox& box) {
  for (const auto& s : box) {
    if (!(s.hi > s.lo) || !std::isfinite(s.lo) || !std::isfinite(s.hi) ||
        (s.log_scale && !(s.lo > 0.0))) {
      throw InvalidInput("bad bounds for parameter '" + s.name + "'");
    }
  }
}

std::vector<double> from_unit(const ParamBox& box, std::span<const double> u) {
  std::vector<double> x(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) x[i] = to_param(box[i], u[i]);
  return x;
}

struct Evaluation {
  double total = 0.0;
  std::vector<double> residuals;
  std::vector<double> values;
};

Evaluation evaluate(std::span<const double> params, const AnchorSet& anchors,
                    const AnchorModel& model) {
  Evaluation ev;
  for (const auto& a : anchors) {
    double value;
    try {
      value = model(params, a);
    } catch (const InvalidInput&) {
      value = std::numeric_limits<double>::quiet_NaN();
    }
    const double r = std::isfinite(value) ? anchor_residual(value, a) : std::sqrt(kPenalty);
    ev.values.push_back(value);
    ev.residuals.push_back(r);
    ev.total += r * r;
  }
  ev.total = std::min(ev.total, kPenalty);
  return ev;
}

}  // namespace

double anchor_residual(double model_value, const Anchor& anchor) {
  double diff = model_value - anchor.observed;
  if (anchor.input.contains("bound")) {
    const bool upper = anchor.input["bound"] == "upper";
    if (upper && diff <= 0.0) diff = 0.0;
    if (!upper && diff >= 0.0) diff = 0.0;
  }
  return diff / anchor.tolerance;
}

double objective(std::span<const double> params, const AnchorSet& anchors,
                 const AnchorModel& model, const ParamBox& box) {
  if (params.size() != box.size()) throw InvalidInput("parameter vector does not match the box");
  double excess = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double x = params[i];
    if (!std::isfinite(x)) return 2.0 * kPenalty;
    if (x < box[i].lo) excess += (box[i].lo - x) / (box[i].hi - box[i].lo);
    if (x > box[i].hi) excess += (x - box[i].hi) / (box[i].hi - box[i].lo);
  }
  if (excess > 0.0) return kPenalty * (1.0 + excess);
  return evaluate(params, anchors, model).total;
}

// ------------------------------------------------------------ Nelder-Mead

namespace {

FitResult finish(const AnchorModel& model, const AnchorSet& anchors, const ParamBox& box,
                 std::vector<double> params, std::span<const double> unit) {
  FitResult r;
  Evaluation ev = evaluate(params, anchors, model);
  r.params = std::move(params);
  r.residual = ev.total;
  r.anchor_residuals = std::move(ev.residuals);
  r.model_values = std::move(ev.values);
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (unit[i] <= 1e-6 || unit[i] >= 1.0 - 1e-6) r.at_bound.push_back(box[i].name);
  }
  return r;
}

}  // namespace

FitResult fit(const AnchorModel& model, const AnchorSet& anchors, std::vector<double> init,
              const ParamBox& box, FitOptions options) {
  if (anchors.empty()) throw InvalidInput("fit needs at least one anchor");
  if (init.size() != box.size() || box.empty()) {
    throw InvalidInput("initial vector does not match the box");
  }
  check_box(box);
  const std::size_t n = box.size();
  std::vector<double> u0(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(init[i] >= box[i].lo && init[i] <= box[i].hi)) {
      throw InvalidInput("initial value of '" + box[i].name + "' lies outside its bounds");
    }
    u0[i] = to_unit(box[i], init[i]);
  }

  auto f = [&](const std::vector<double>& u) {
    for (double v : u) {
      if (!(v >= 0.0 && v <= 1.0)) {
        double excess = 0.0;
        for (double w : u) excess += std::max(0.0, -w) + std::max(0.0, w - 1.0);
        return kPenalty * (1.0 + excess);
      }
    }
    return evaluate(from_unit(box, u), anchors, model).total;
  };

  // start simplex: unit-coordinate steps of 0.1, turned inward near an edge
  std::vector<std::vector<double>> simplex(n + 1, u0);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = u0[i] + 0.1 <= 1.0 ? 0.1 : -0.1;
    simplex[i + 1][i] += step;
  }
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::pow(simplex[i][k] - simplex[j][k], 2);
        d = std::max(d, std::sqrt(s));
      }
    }
    return d;
  };

  int it = 0;
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    {
      std::vector<std::vector<double>> s2;
      std::vector<double> f2;
      for (auto k : order) {
        s2.push_back(simplex[k]);
        f2.push_back(fv[k]);
      }
      simplex = std::move(s2);
      fv = std::move(f2);
    }
    if (diameter() < options.diameter_tol) {
      converged = true;
      break;
    }
    if (it >= options.max_iterations) break;
    ++it;

    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) c[k] += simplex[i][k] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (simplex[n][k] - c[k]);
      return p;
    };
    const auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
      continue;
    }
    const bool outside = fr < fv[n];
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = f(xc);
    if (outside ? fc <= fr : fc < fv[n]) {
      simplex[n] = xc;
      fv[n] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
      }
      fv[i] = f(simplex[i]);
    }
  }

  FitResult r = finish(model, anchors, box, from_unit(box, simplex[0]), simplex[0]);
  r.iterations = it;
  r.converged = converged;
  return r;
}

FitResult grid_oracle(const AnchorModel& model, const AnchorSet& anchors, const ParamBox& box,
                      int resolution) {
  if (box.size() > 4) throw Unsupported("grid oracle supports at most 4 parameters");
  if (box.empty()) throw InvalidInput("empty parameter box");
  if (resolution < 16) throw InvalidInput("grid resolution must be >= 16");
  if (anchors.empty()) throw InvalidInput("grid oracle needs at least one anchor");
  check_box(box);
  const std::size_t n = box.size();
  std::vector<int> idx(n, 0);
  std::vector<double> u(n), best_u(n);
  double best = std::numeric_limits<double>::infinity();
  long count = 0;
  while (true) {
    for (std::size_t k = 0; k < n; ++k) u[k] = static_cast<double>(idx[k]) / (resolution - 1);
    const double v = evaluate(from_unit(box, u), anchors, model).total;
    ++count;
    if (v < best) {
      best = v;
      best_u = u;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == resolution) idx[k++] = 0;
    if (k == n) break;
  }
  FitResult r = finish(model, anchors, box, from_unit(box, best_u), best_u);
  r.iterations = static_cast<int>(count);
  r.converged = true;
  return r;
}

// ----------------------------------------------------- bundled problems

namespace {

double num(const Anchor& a, const char* key) {
  if (!a.input.contains(key) || !a.input[key].is_number()) {
    throw ConfigError(a.model_id + ".input_json." + key, "missing numeric field");
  }
  return a.input[key].get<double>();
}

double num_or(const Anchor& a, const char* key, double fallback) {
  return a.input.contains(key) ? num(a, key) : fallback;
}

std::string str(const Anchor& a, const char* key) {
  if (!a.input.contains(key) || !a.input[key].is_string()) {
    throw ConfigError(a.model_id + ".input_json." + key, "missing string field");
  }
  return a.input[key].get<std::string>();
}

// release anchors are measured with the gate held open from t = 0
constexpr double kReleaseDtS = 10.0;
// closed-loop anchors use a coarser step to keep the fits quick
constexpr double kLoopDtS = 60.0;

double open_gate_release(const ReleaseParams& params, const Anchor& a) {
  const Compound which = str(a, "compound") == "CA" ? Compound::CA : Compound::EG;
  const std::string observable = str(a, "observable");
  const double t_h = num(a, "t_h");
  const auto steps = static_cast<long>(std::llround(t_h * 3600.0 / kReleaseDtS));
  ReleaseState s = ReleaseState::loaded(params);
  for (long i = 0; i < steps; ++i) s = step_release(s, true, kReleaseDtS / 3600.0, params);
  const CompoundState& c = which == Compound::CA ? s.ca : s.eg;
  if (observable == "released_frac") return c.released_fraction(params[which].total_load);
  if (observable == "headspace_ppm") return c.headspace_ppm;
  throw ConfigError(a.model_id + ".input_json.observable", "unknown observable '" + observable + "'");
}

double closed_loop(const ModelParams& p, const Anchor& a) {
  ScenarioConfig c;
  c.name = a.model_id;
  c.food = p.food;
  c.device = p.device;
  c.dt_s = kLoopDtS;
  c.duration_h = num(a, "t_h");
  c.environment.ambient_c = num(a, "temp_c");
  c.smart_packaging_enabled = a.input.value("smart", true);
  const SimulationTrace t = simulate(c);
  const std::string observable = str(a, "observable");
  const TraceRow& row = t.rows.back();
  if (observable == "tvbn") return row.tvbn;
  if (observable == "butanone") return row.butanone;
  if (observable == "methylbutanol") return row.methylbutanol;
  throw ConfigError(a.model_id + ".input_json.observable", "unknown observable '" + observable + "'");
}

EnvCondition reference_env(const Anchor& a) {
  EnvCondition env;
  if (a.input.contains("position")) env.position = str(a, "position");
  return env;
}

double sensor_load(const SensorModel& s, const Anchor& a) {
  return sensor_resistance(num(a, "nh3"), num_or(a, "ch4", 0.0), num_or(a, "co2", 0.0), s);
}

}  // namespace

const std::vector<std::string>& calibration_order() {
  static const std::vector<std::string> order = {
      "sensor_resistance",    "sensor_response",      "sensor_bending",
      "rf_pull",              "rf_gain",              "rf_voltage",
      "thermal",              "gate_threshold",       "release_rate_ca",
      "release_rate_eg",      "release_headspace_ca", "release_headspace_eg",
      "spoilage_nh3",         "spoilage_rt",          "spoilage_4c",
      "spoilage_inhibition",  "markers_butanone",     "markers_methylbutanol"};
  return order;
}

CalibrationProblem make_problem(std::string_view model_id, const ModelParams& upstream) {
  CalibrationProblem pb;
  pb.model_id = std::string(model_id);
  const ModelParams up = upstream;
  using P = std::span<const double>;

  if (model_id == "sensor_resistance") {
    pb.box = {{"r_baseline", 100.0, 5000.0}, {"r_saturated", 100.0, 10000.0}};
    pb.init = {1000.0, 2000.0};
    auto with = [up](P x) {
      SensorModel s = up.device.sensor;
      s.r_baseline = x[0];
      s.r_saturated = x[1];
      s.validate();
      return s;
    };
    pb.model = [with](P x, const Anchor& a) { return sensor_load(with(x), a); };
    pb.apply = [with](ModelParams& m, P x) { m.device.sensor = with(x); };
  } else if (model_id == "sensor_response") {
    pb.box = {{"nh3_transient_response", 0.01, 1.0},
              {"sens_ch4", 1e-6, 1e-2, true},
              {"sens_co2", 1e-8, 1e-3, true}};
    pb.init = {0.1, 1e-3, 1e-5};
    auto with = [up](P x) {
      SensorModel s = up.device.sensor;
      s.nh3_transient_response = x[0];
      s.sens_ch4 = x[1];
      s.sens_co2 = x[2];
      return s;
    };
    pb.model = [with](P x, const Anchor& a) {
      return response_percent(parse_gas(str(a, "gas")), num(a, "conc"), with(x));
    };
    pb.apply = [with](ModelParams& m, P x) { m.device.sensor = with(x); };
  } else if (model_id == "sensor_bending") {
    pb.box = {{"bend_loss_at_5000", 0.0, 0.9}};
    pb.init = {0.1};
    auto with = [up](P x) {
      SensorModel s = up.device.sensor;
      s.bend_loss_at_5000 = x[0];
      return s;
    };
    pb.model = [with](P x, const Anchor& a) {
      const SensorModel s = with(x);
      return degrade_by_bending(s, num(a, "cycles")).nh3_scale() / s.nh3_scale();
    };
    pb.apply = [with](ModelParams& m, P x) { m.device.sensor = with(x); };
  } else if (model_id == "rf_pull") {
    pb.box = {{"f_res_nominal_mhz", 12.0, 16.0}, {"pull_mhz", 0.01, 2.0}};
    pb.init = {13.5, 1.0};
    auto with = [up](P x) {
      RfLinkModel rf = up.device.rf;
      rf.f_res_nominal_mhz = x[0];
      rf.pull_mhz = x[1];
      rf.back_solve_capacitance();
      return rf;
    };
    pb.model = [with](P x, const Anchor& a) {
      return resonance_frequency(with(x), num(a, "r_load"), reference_env(a));
    };
    pb.apply = [with](ModelParams& m, P x) { m.device.rf = with(x); };
  } else if (model_id == "rf_gain") {
    pb.box = {{"gain_fullscale_db", -20.0, 0.0}, {"gain_slope_db_per_mhz", 0.1, 50.0}};
    pb.init = {-3.0, 5.0};
    auto with = [up](P x) {
      RfLinkModel rf = up.device.rf;
      rf.gain_fullscale_db = x[0];
      rf.gain_slope_db_per_mhz = x[1];
      return rf;
    };
    pb.model = [with](P x, const Anchor& a) {
      return gain_db(with(x), num(a, "r_load"), reference_env(a));
    };
    pb.apply = [with](ModelParams& m, P x) { m.device.rf = with(x); };
  } else if (model_id == "rf_voltage") {
    pb.box = {{"v_peak", 0.5, 20.0}};
    pb.init = {3.0};
    auto with = [up](P x) {
      RfLinkModel rf = up.device.rf;
      rf.v_peak = x[0];
      return rf;
    };
    pb.model = [with, up](P x, const Anchor& a) {
      return harvested_voltage(with(x), sensor_load(up.device.sensor, a), reference_env(a));
    };
    pb.apply = [with](ModelParams& m, P x) { m.device.rf = with(x); };
  } else if (model_id == "thermal") {
    pb.box = {{"power_coefficient", 0.1, 10.0}, {"power_exponent", 0.5, 3.0}};
    pb.init = {1.0, 2.0};
    auto with = [up](P x) {
      ThermalParams t = up.device.thermal;
      t.power_coefficient = x[0];
      t.power_exponent = x[1];
      return t;
    };
    pb.model = [with](P x, const Anchor& a) { return steady_state_temp(num(a, "v"), with(x)); };
    pb.apply = [with](ModelParams& m, P x) { m.device.thermal = with(x); };
  } else if (model_id == "gate_threshold") {
    // coupling at the validation position that puts the LCST crossing at the
    // designed NH3 operating point
    pb.box = {{"coupling", 0.05, 1.0}};
    pb.init = {0.5};
    auto with = [up](P x, const std::string& position) {
      RfLinkModel rf = up.device.rf;
      std::erase_if(rf.coupling_table, [&](const CouplingEntry& e) { return e.position == position; });
      rf.coupling_table.push_back({position, x[0]});
      return rf;
    };
    pb.model = [with, up](P x, const Anchor& a) {
      const EnvCondition env = reference_env(a);
      const double v = harvested_voltage(with(x, env.position), sensor_load(up.device.sensor, a), env);
      return steady_state_temp(v, up.device.thermal);
    };
    pb.apply = [with](ModelParams& m, P x) {
      // round down so the gate stays shut at exactly the operating point
      const double floored = std::floor(x[0] * 1e6) / 1e6;
      const double y[1] = {floored};
      m.device.rf = with(y, kValidationPosition);
    };
  } else if (model_id == "release_rate_ca" || model_id == "release_rate_eg") {
    const bool ca = model_id == "release_rate_ca";
    pb.box = {{"rate_constant", ca ? 1e-4 : 1e-2, ca ? 1.0 : 5.0, true}};
    pb.init = {ca ? 0.01 : 0.25};
    auto with = [up, ca](P x) {
      ReleaseParams r = up.device.release;
      (ca ? r.ca : r.eg).rate_constant = x[0];
      return r;
    };
    pb.model = [with](P x, const Anchor& a) { return open_gate_release(with(x), a); };
    pb.apply = [with](ModelParams& m, P x) { m.device.release = with(x); };
  } else if (model_id == "release_headspace_ca" || model_id == "release_headspace_eg") {
    const bool ca = model_id == "release_headspace_ca";
    pb.box = {{"headspace_yield", 1.0, 1e5, true}, {"headspace_loss", 1e-3, 10.0, true}};
    pb.init = {1000.0, 0.1};
    auto with = [up, ca](P x) {
      ReleaseParams r = up.device.release;
      CompoundParams& c = ca ? r.ca : r.eg;
      c.headspace_yield = x[0];
      c.headspace_loss = x[1];
      return r;
    };
    pb.model = [with](P x, const Anchor& a) { return open_gate_release(with(x), a); };
    pb.apply = [with, ca](ModelParams& m, P x) {
      m.device.release = with(x);
      // markers share the headspace loss of the dominant released compound
      if (ca) m.food.marker_decay = x[1];
    };
  } else if (model_id == "spoilage_nh3") {
    pb.box = {{"nh3_per_tvbn", 0.1, 20.0}};
    pb.init = {1.0};
    auto with = [up](P x) {
      SpoilageParams f = up.food;
      f.nh3_per_tvbn = x[0];
      return f;
    };
    pb.model = [with](P x, const Anchor& a) {
      SpoilageParams f = with(x);
      f.tvbn_initial = num(a, "tvbn_initial");
      return nh3_from_tvbn(num(a, "tvbn"), f);
    };
    pb.apply = [with](ModelParams& m, P x) { m.food = with(x); };
  } else if (model_id == "spoilage_rt") {
    pb.box = {{"tvbn_initial", 0.1, 5.0},
              {"growth_rate_rt", 0.01, 3.0, true},
              {"tvbn_cap", 20.5, 100.0}};
    pb.init = {1.0, 0.3, 40.0};
    auto with = [up](P x) {
      SpoilageParams f = up.food;
      f.tvbn_initial = x[0];
      f.growth_rate_rt = x[1];
      f.tvbn_cap = x[2];
      return f;
    };
    pb.model = [with](P x, const Anchor& a) {
      const SpoilageParams f = with(x);
      const double temp = num(a, "temp_c");
      if (a.input.contains("nh3_ppm")) {
        return tvbn_crossing_time(tvbn_for_nh3(num(a, "nh3_ppm"), f), temp, f);
      }
      return tvbn_closed_form(num(a, "t_h"), temp, f);
    };
    pb.apply = [with](ModelParams& m, P x) { m.food = with(x); };
  } else if (model_id == "spoilage_4c") {
    pb.box = {{"q10", 1.0, 10.0}};
    pb.init = {2.0};
    auto with = [up](P x) {
      SpoilageParams f = up.food;
      f.q10 = x[0];
      return f;
    };
    pb.model = [with](P x, const Anchor& a) {
      const SpoilageParams f = with(x);
      const double temp = num(a, "temp_c");
      if (a.input.contains("tvbn_level")) return tvbn_crossing_time(num(a, "tvbn_level"), temp, f);
      return tvbn_closed_form(num(a, "t_h"), temp, f);
    };
    pb.apply = [with](ModelParams& m, P x) { m.food = with(x); };
  } else if (model_id == "spoilage_inhibition") {
    pb.box = {{"inhibition_halfdose", 1e-8, 1e4, true}};
    pb.init = {1e-4};
    auto with = [up](P x) {
      ModelParams m = up;
      m.food.inhibition_halfdose = x[0];
      return m;
    };
    pb.model = [with](P x, const Anchor& a) { return closed_loop(with(x), a); };
    pb.apply = [with](ModelParams& m, P x) { m.food.inhibition_halfdose = with(x).food.inhibition_halfdose; };
  } else if (model_id == "markers_butanone" || model_id == "markers_methylbutanol") {
    const bool b = model_id == "markers_butanone";
    pb.box = {{b ? "marker_yield_butanone" : "marker_yield_methylbutanol", 1.0, 1e6, true}};
    pb.init = {100.0};
    auto with = [up, b](P x) {
      ModelParams m = up;
      (b ? m.food.marker_yield_butanone : m.food.marker_yield_methylbutanol) = x[0];
      return m;
    };
    pb.model = [with](P x, const Anchor& a) { return closed_loop(with(x), a); };
    pb.apply = [with](ModelParams& m, P x) { m.food = with(x).food; };
  } else {
    throw InvalidInput("unknown calibration model '" + std::string(model_id) + "'");
  }
  return pb;
}

void apply_table_anchors(const AnchorSet& anchors, RfLinkModel& rf) {
  std::map<std::string, std::vector<std::pair<double, double>>> tables;
  for (const auto& a : anchors) {
    if (a.model_id.rfind("table:", 0) != 0) continue;
    const std::string name = a.model_id.substr(6);
    if (name == "coupling") {
      const std::string position = str(a, "position");
      std::erase_if(rf.coupling_table, [&](const CouplingEntry& e) { return e.position == position; });
      rf.coupling_table.push_back({position, a.observed});
      continue;
    }
    tables[name].emplace_back(num(a, "x"), a.observed);
  }
  auto& t = rf.env_tables;
  for (auto& [name, knots] : tables) {
    PiecewiseLinear table(std::move(knots));
    if (name == "strain_df") t.strain_df = table;
    else if (name == "strain_trace_r") t.strain_trace_r = table;
    else if (name == "bend_df") t.bend_df = table;
    else if (name == "temp_df") t.temp_df = table;
    else if (name == "humidity_df") t.humidity_df = table;
    else if (name == "electrode_r") t.electrode_r = table;
    else throw ConfigError("table:" + name, "unknown table");
  }
}

CalibrationReport calibrate_all(const AnchorSet& anchors, const ModelParams& base) {
  CalibrationReport report;
  report.params = base;
  apply_table_anchors(anchors, report.params.device.rf);
  for (const auto& a : anchors) {
    if (a.model_id.rfind("table:", 0) == 0) continue;
    const auto& order = calibration_order();
    if (std::find(order.begin(), order.end(), a.model_id) == order.end()) {
      throw ConfigError(a.model_id, "no calibration problem with this model id");
    }
  }
  for (const auto& id : calibration_order()) {
    AnchorSet selected = select_anchors(anchors, id);
    if (selected.empty()) continue;
    CalibrationProblem pb = make_problem(id, report.params);
    FitResult r = fit(pb.model, selected, pb.init, pb.box);
    pb.apply(report.params, r.params);
    report.stages.push_back({id, std::move(r), std::move(selected)});
  }
  return report;
}

void write_residual_report(std::ostream& out, const CalibrationReport& report) {
  for (const auto& st : report.stages) {
    out << "# " << st.model_id << ": residual " << format_number(st.result.residual)
        << ", iterations " << st.result.iterations << ", converged "
        << (st.result.converged ? "yes" : "no");
    if (!st.result.at_bound.empty()) {
      out << ", at bound:";
      for (const auto& n : st.result.at_bound) out << ' ' << n;
    }
    out << '\n';
  }
  out << "model_id,input_json,observed,model_value,tolerance,normalized_residual,provenance\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q.push_back('"');
      q.push_back(c);
    }
    return q + "\"";
  };
  for (const auto& st : report.stages) {
    for (std::size_t i = 0; i < st.anchors.size(); ++i) {
      const Anchor& a = st.anchors[i];
      out << a.model_id << ',' << quote(a.input.dump()) << ',' << format_number(a.observed) << ','
          << format_number(st.result.model_values[i]) << ',' << format_number(a.tolerance) << ','
          << format_number(st.result.anchor_residuals[i]) << ',' << quote(a.provenance) << '\n';
    }
  }
}

}  // namespace smartpack
