#include "smartpack/config_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "smartpack/errors.hpp"

namespace smartpack {

using nlohmann::json;

namespace {

/// Strict object reader: every key must be consumed, otherwise finish()
/// reports the first unknown one.
class Reader {
public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(display(), "must be an object");
  }

  bool has(const char* key) const { return doc_.contains(key); }

  void number(const char* key, double& out) {
    if (!take(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(child(key), "must be a number");
    out = v.get<double>();
  }

  void boolean(const char* key, bool& out) {
    if (!take(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_boolean()) throw ConfigError(child(key), "must be true or false");
    out = v.get<bool>();
  }

  void string(const char* key, std::string& out) {
    if (!take(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(child(key), "must be a string");
    out = v.get<std::string>();
  }

  template <typename F>
  void object(const char* key, F&& f) {
    if (!take(key)) return;
    Reader sub(doc_.at(key), child(key));
    f(sub);
    sub.finish();
  }

  /// Raw access for array-valued keys.
  const json* raw(const char* key) {
    if (!take(key)) return nullptr;
    return &doc_.at(key);
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ConfigError(child(key), "unknown key");
    }
  }

private:
  bool take(const char* key) {
    if (!doc_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_food(Reader& r, SpoilageParams& f) {
  r.number("tvbn_initial", f.tvbn_initial);
  r.number("growth_rate_rt", f.growth_rate_rt);
  r.number("q10", f.q10);
  r.number("tvbn_cap", f.tvbn_cap);
  r.number("nh3_per_tvbn", f.nh3_per_tvbn);
  r.number("inhibition_halfdose", f.inhibition_halfdose);
  r.number("marker_yield_butanone", f.marker_yield_butanone);
  r.number("marker_yield_methylbutanol", f.marker_yield_methylbutanol);
  r.number("marker_decay", f.marker_decay);
}

json food_json(const SpoilageParams& f) {
  return {{"tvbn_initial", f.tvbn_initial},
          {"growth_rate_rt", f.growth_rate_rt},
          {"q10", f.q10},
          {"tvbn_cap", f.tvbn_cap},
          {"nh3_per_tvbn", f.nh3_per_tvbn},
          {"inhibition_halfdose", f.inhibition_halfdose},
          {"marker_yield_butanone", f.marker_yield_butanone},
          {"marker_yield_methylbutanol", f.marker_yield_methylbutanol},
          {"marker_decay", f.marker_decay}};
}

PiecewiseLinear read_table(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "must be an array of [x, y] pairs");
  std::vector<std::pair<double, double>> knots;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& k = v[i];
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
      throw ConfigError(path + "[" + std::to_string(i) + "]", "must be an [x, y] number pair");
    }
    knots.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  try {
    return PiecewiseLinear(std::move(knots));
  } catch (const InvalidInput& e) {
    throw ConfigError(path, e.what());
  }
}

json table_json(const PiecewiseLinear& t) {
  json out = json::array();
  for (const auto& [x, y] : t.knots()) out.push_back({x, y});
  return out;
}

void read_device(Reader& r, DeviceParams& d) {
  r.object("sensor", [&](Reader& s) {
    auto& m = d.sensor;
    s.number("r_baseline", m.r_baseline);
    s.number("r_saturated", m.r_saturated);
    s.number("nh3_linear_max", m.nh3_linear_max);
    s.number("nh3_transient_response", m.nh3_transient_response);
    s.number("sens_ch4", m.sens_ch4);
    s.number("sens_co2", m.sens_co2);
    s.number("passivation_factor", m.passivation_factor);
    s.number("bend_cycles", m.bend_cycles);
    s.number("bend_loss_at_5000", m.bend_loss_at_5000);
  });
  r.object("rf_link", [&](Reader& s) {
    auto& m = d.rf;
    s.number("inductance_h", m.inductance_h);
    s.number("trace_resistance", m.trace_resistance);
    s.number("carrier_mhz", m.carrier_mhz);
    s.number("f_res_nominal_mhz", m.f_res_nominal_mhz);
    s.number("bandwidth_mhz", m.bandwidth_mhz);
    s.number("peak_match_mhz", m.peak_match_mhz);
    s.number("r_load_ref", m.r_load_ref);
    s.number("pull_mhz", m.pull_mhz);
    s.number("gain_fullscale_db", m.gain_fullscale_db);
    s.number("gain_slope_db_per_mhz", m.gain_slope_db_per_mhz);
    s.number("v_peak", m.v_peak);
    s.boolean("encapsulated", m.encapsulated);
    if (s.has("capacitance_f")) {
      s.number("capacitance_f", m.capacitance_f);
    } else {
      m.back_solve_capacitance();
    }
    if (const json* table = s.raw("coupling_table")) {
      const std::string path = s.child("coupling_table");
      if (!table->is_array()) throw ConfigError(path, "must be an array");
      m.coupling_table.clear();
      for (std::size_t i = 0; i < table->size(); ++i) {
        Reader e((*table)[i], path + "[" + std::to_string(i) + "]");
        CouplingEntry entry;
        e.string("position", entry.position);
        e.number("coupling", entry.coupling);
        e.finish();
        if (entry.position.empty()) throw ConfigError(e.child("position"), "must not be empty");
        m.coupling_table.push_back(entry);
      }
    }
    s.object("env_tables", [&](Reader& t) {
      auto load = [&](const char* key, PiecewiseLinear& table) {
        if (const json* v = t.raw(key)) table = read_table(*v, t.child(key));
      };
      load("strain_df", m.env_tables.strain_df);
      load("strain_trace_r", m.env_tables.strain_trace_r);
      load("bend_df", m.env_tables.bend_df);
      load("temp_df", m.env_tables.temp_df);
      load("humidity_df", m.env_tables.humidity_df);
      load("electrode_r", m.env_tables.electrode_r);
    });
  });
  r.object("thermal", [&](Reader& s) {
    auto& m = d.thermal;
    s.number("heater_resistance", m.heater_resistance);
    s.number("series_electrode_resistance", m.series_electrode_resistance);
    s.number("power_exponent", m.power_exponent);
    s.number("power_coefficient", m.power_coefficient);
    s.number("time_constant_s", m.time_constant_s);
    s.number("ambient_c", m.ambient_c);
  });
  r.object("release", [&](Reader& s) {
    auto& m = d.release;
    s.number("lcst_c", m.lcst_c);
    auto compound = [](Reader& c, CompoundParams& p) {
      c.number("total_load", p.total_load);
      c.number("rate_constant", p.rate_constant);
      c.number("headspace_yield", p.headspace_yield);
      c.number("headspace_loss", p.headspace_loss);
    };
    s.object("ca", [&](Reader& c) { compound(c, m.ca); });
    s.object("eg", [&](Reader& c) { compound(c, m.eg); });
  });
}

json device_json(const DeviceParams& d) {
  const auto& s = d.sensor;
  const auto& rf = d.rf;
  const auto& th = d.thermal;
  const auto& rel = d.release;
  json coupling = json::array();
  for (const auto& e : rf.coupling_table) {
    coupling.push_back({{"position", e.position}, {"coupling", e.coupling}});
  }
  auto compound = [](const CompoundParams& p) {
    return json{{"total_load", p.total_load},
                {"rate_constant", p.rate_constant},
                {"headspace_yield", p.headspace_yield},
                {"headspace_loss", p.headspace_loss}};
  };
  const auto& t = rf.env_tables;
  return {
      {"sensor",
       {{"r_baseline", s.r_baseline},
        {"r_saturated", s.r_saturated},
        {"nh3_linear_max", s.nh3_linear_max},
        {"nh3_transient_response", s.nh3_transient_response},
        {"sens_ch4", s.sens_ch4},
        {"sens_co2", s.sens_co2},
        {"passivation_factor", s.passivation_factor},
        {"bend_cycles", s.bend_cycles},
        {"bend_loss_at_5000", s.bend_loss_at_5000}}},
      {"rf_link",
       {{"inductance_h", rf.inductance_h},
        {"capacitance_f", rf.capacitance_f},
        {"trace_resistance", rf.trace_resistance},
        {"carrier_mhz", rf.carrier_mhz},
        {"f_res_nominal_mhz", rf.f_res_nominal_mhz},
        {"bandwidth_mhz", rf.bandwidth_mhz},
        {"peak_match_mhz", rf.peak_match_mhz},
        {"r_load_ref", rf.r_load_ref},
        {"pull_mhz", rf.pull_mhz},
        {"gain_fullscale_db", rf.gain_fullscale_db},
        {"gain_slope_db_per_mhz", rf.gain_slope_db_per_mhz},
        {"v_peak", rf.v_peak},
        {"encapsulated", rf.encapsulated},
        {"coupling_table", coupling},
        {"env_tables",
         {{"strain_df", table_json(t.strain_df)},
          {"strain_trace_r", table_json(t.strain_trace_r)},
          {"bend_df", table_json(t.bend_df)},
          {"temp_df", table_json(t.temp_df)},
          {"humidity_df", table_json(t.humidity_df)},
          {"electrode_r", table_json(t.electrode_r)}}}}},
      {"thermal",
       {{"heater_resistance", th.heater_resistance},
        {"series_electrode_resistance", th.series_electrode_resistance},
        {"power_exponent", th.power_exponent},
        {"power_coefficient", th.power_coefficient},
        {"time_constant_s", th.time_constant_s},
        {"ambient_c", th.ambient_c}}},
      {"release", {{"lcst_c", rel.lcst_c}, {"ca", compound(rel.ca)}, {"eg", compound(rel.eg)}}}};
}

}  // namespace

json params_to_json(const ModelParams& params) {
  return {{"food", food_json(params.food)}, {"device", device_json(params.device)}};
}

ModelParams params_from_json(const json& doc, const ModelParams& base) {
  ModelParams p = base;
  Reader r(doc, "");
  r.object("food", [&](Reader& f) { read_food(f, p.food); });
  r.object("device", [&](Reader& d) { read_device(d, p.device); });
  r.finish();
  return p;
}

json scenario_to_json(const ScenarioConfig& c) {
  json food = food_json(c.food);
  food["present"] = c.food_present;
  const auto& e = c.environment;
  return {{"name", c.name},
          {"duration_h", c.duration_h},
          {"dt_s", c.dt_s},
          {"smart_packaging_enabled", c.smart_packaging_enabled},
          {"trigger_threshold_ppm", c.trigger_threshold_ppm},
          {"trigger_mode", c.trigger_mode == TriggerMode::Physical ? "physical" : "comparator"},
          {"tvbn_limit", c.tvbn_limit},
          {"environment",
           {{"ambient_c", e.ambient_c},
            {"humidity_rh", e.humidity_rh},
            {"position", e.position},
            {"strain_pct", e.strain_pct},
            {"bend_cycles", e.bend_cycles},
            {"ch4_ppm", e.ch4_ppm},
            {"co2_ppm", e.co2_ppm}}},
          {"food", food},
          {"device", device_json(c.device)}};
}

ScenarioConfig scenario_from_json(const json& doc, const ModelParams& base) {
  ScenarioConfig c;
  c.food = base.food;
  c.device = base.device;
  Reader r(doc, "");
  r.string("name", c.name);
  r.number("duration_h", c.duration_h);
  r.number("dt_s", c.dt_s);
  r.boolean("smart_packaging_enabled", c.smart_packaging_enabled);
  r.number("trigger_threshold_ppm", c.trigger_threshold_ppm);
  r.number("tvbn_limit", c.tvbn_limit);
  std::string mode = "physical";
  r.string("trigger_mode", mode);
  if (mode == "physical") {
    c.trigger_mode = TriggerMode::Physical;
  } else if (mode == "comparator") {
    c.trigger_mode = TriggerMode::Comparator;
  } else {
    throw ConfigError("trigger_mode", "must be \"physical\" or \"comparator\"");
  }
  r.object("environment", [&](Reader& e) {
    auto& env = c.environment;
    e.number("ambient_c", env.ambient_c);
    e.number("humidity_rh", env.humidity_rh);
    e.string("position", env.position);
    e.number("strain_pct", env.strain_pct);
    e.number("bend_cycles", env.bend_cycles);
    e.number("ch4_ppm", env.ch4_ppm);
    e.number("co2_ppm", env.co2_ppm);
  });
  r.object("food", [&](Reader& f) {
    f.boolean("present", c.food_present);
    read_food(f, c.food);
  });
  r.object("device", [&](Reader& d) { read_device(d, c.device); });
  r.finish();
  c.validate();
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
  }
}

ModelParams load_params(const std::filesystem::path& path) {
  return params_from_json(read_json_file(path), builtin_params());
}

ModelParams resolve_base_params() {
  if (const char* env = std::getenv("SMARTPACK_PARAMS"); env != nullptr && *env != '\0') {
    return load_params(env);
  }
  return builtin_params();
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const ModelParams& base) {
  return scenario_from_json(read_json_file(path), base);
}

std::string config_digest(const ScenarioConfig& config) {
  const std::string canonical = scenario_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace smartpack
