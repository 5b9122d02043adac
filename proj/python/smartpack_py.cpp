#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "smartpack/calibrate.hpp"
#include "smartpack/cli.hpp"
#include "smartpack/config_io.hpp"
#include "smartpack/errors.hpp"
#include "smartpack/trace_io.hpp"

namespace py = pybind11;
using namespace smartpack;

namespace {

ScenarioConfig scenario(const std::string& doc) {
  return scenario_from_json(nlohmann::json::parse(doc), resolve_base_params());
}

py::dict trace_dict(const SimulationTrace& t) {
  py::dict out;
  out["name"] = t.name;
  out["config_digest"] = t.config_digest;
  const auto& cols = trace_columns();
  py::dict columns;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& r : t.rows) v.push_back(trace_value(r, c));
    columns[py::str(cols[c])] = v;
  }
  out["columns"] = columns;
  py::list events;
  for (const auto& e : t.events) {
    events.append(py::make_tuple(event_kind_name(e.kind), e.t_h, e.step, e.detail));
  }
  out["events"] = events;
  return out;
}

}  // namespace

PYBIND11_MODULE(_smartpack, m) {
  m.doc() = "closed-loop smart packaging simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  m.def("builtin_params_json", [] { return params_to_json(builtin_params()).dump(); });
  m.def("default_scenario_json", [] { return scenario_to_json(ScenarioConfig::with_defaults()).dump(); });

  m.def("simulate_json", [](const std::string& doc) { return trace_dict(simulate(scenario(doc))); },
        py::arg("scenario_json"));
  m.def("trace_csv_json", [](const std::string& doc) {
    std::ostringstream s;
    write_trace_csv(s, simulate(scenario(doc)));
    return s.str();
  }, py::arg("scenario_json"));
  m.def("compare_json", [](const std::string& a, const std::string& b) {
    const std::vector<SimulationTrace> traces = {simulate(scenario(a)), simulate(scenario(b))};
    const ComparisonReport r = compare(traces);
    py::dict out;
    out["names"] = r.names;
    out["time_to_limit_h"] = r.time_to_limit_h;
    out["extension_h"] = r.shelf_life_extension_h(1);
    return out;
  }, py::arg("scenario_a_json"), py::arg("scenario_b_json"));
  m.def("calibrate_json", [](const std::string& anchors_path) {
    return params_to_json(calibrate_all(read_anchors_csv(anchors_path), builtin_params()).params).dump();
  }, py::arg("anchors_path"));

  m.def("sensor_resistance", [](double nh3, double ch4, double co2) {
    return sensor_resistance(nh3, ch4, co2, builtin_params().device.sensor);
  }, py::arg("nh3"), py::arg("ch4") = 0.0, py::arg("co2") = 0.0);
  m.def("response_percent", [](const std::string& gas, double conc) {
    return response_percent(parse_gas(gas), conc, builtin_params().device.sensor);
  }, py::arg("gas"), py::arg("conc"));
  m.def("steady_state_temp", [](double v) { return steady_state_temp(v, builtin_params().device.thermal); },
        py::arg("v"));
  m.def("harvested_voltage", [](double r_load, const std::string& position) {
    EnvCondition env;
    env.position = position;
    return harvested_voltage(builtin_params().device.rf, r_load, env);
  }, py::arg("r_load"), py::arg("position") = kOptimalPosition);


  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "smartpack");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
