#include "smartpack/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>

#include "smartpack/calibrate.hpp"
#include "smartpack/config_io.hpp"
#include "smartpack/errors.hpp"
#include "smartpack/plot.hpp"
#include "smartpack/trace_io.hpp"

namespace smartpack {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

template <typename Write>
void write_file(const fs::path& path, Write&& write) {
  std::ostringstream buf;
  write(buf);
  write_text_file(path, buf.str());
}

// "a,b;c" -> {{a, b}, {c}}
std::vector<std::vector<std::string>> parse_groups(const std::string& spec) {
  std::vector<std::vector<std::string>> groups;
  std::stringstream gs(spec);
  std::string group;
  while (std::getline(gs, group, ';')) {
    std::vector<std::string> cols;
    std::stringstream cs(group);
    std::string col;
    while (std::getline(cs, col, ',')) {
      if (!col.empty()) cols.push_back(col);
    }
    if (!cols.empty()) groups.push_back(cols);
  }
  return groups;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"smartpack: closed-loop smart packaging simulator"};
  app.require_subcommand(1, 1);

  std::string config, out_dir, anchors, config_a, config_b, trace_path, svg_path, columns;

  auto* sim = app.add_subcommand("simulate", "run one scenario, write trace.csv and events.csv");
  sim->add_option("--config", config, "scenario JSON")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* cal = app.add_subcommand("calibrate", "fit parameters to an anchor CSV");
  cal->add_option("--anchors", anchors, "anchor CSV")->required();
  cal->add_option("--out", out_dir, "output directory")->required();

  auto* cmp = app.add_subcommand("compare", "run two scenarios and compare them");
  cmp->add_option("--config-a", config_a, "baseline scenario JSON")->required();
  cmp->add_option("--config-b", config_b, "scenario JSON compared to the baseline")->required();
  cmp->add_option("--out", out_dir, "output directory")->required();

  auto* plt = app.add_subcommand("plot", "render a trace CSV as SVG");
  plt->add_option("--trace", trace_path, "trace CSV")->required();
  plt->add_option("--out", svg_path, "output SVG")->required();
  plt->add_option("--columns", columns, "column groups, e.g. \"nh3_ppm;ca_released_frac,eg_released_frac\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 1;
  }

  try {
    if (*sim) {
      const ScenarioConfig c = load_scenario(config, resolve_base_params());
      const SimulationTrace t = simulate(c);
      ensure_dir(out_dir);
      write_file(fs::path(out_dir) / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, t); });
      write_file(fs::path(out_dir) / "events.csv", [&](std::ostream& o) { write_events_csv(o, t); });
      out << t.name << ": " << t.rows.size() << " rows, " << t.events.size() << " events\n";
    } else if (*cal) {
      const AnchorSet set = read_anchors_csv(anchors);
      const CalibrationReport report = calibrate_all(set, builtin_params());
      ensure_dir(out_dir);
      write_text_file(fs::path(out_dir) / "params.json", params_to_json(report.params).dump(2) + "\n");
      write_file(fs::path(out_dir) / "residuals.csv",
                 [&](std::ostream& o) { write_residual_report(o, report); });
      for (const auto& st : report.stages) {
        out << st.model_id << ": residual " << format_number(st.result.residual)
            << (st.result.converged ? "" : " (not converged)") << '\n';
        if (!st.result.at_bound.empty()) err << "warning: " << st.model_id << " ended on a bound\n";
      }
    } else if (*cmp) {
      const ModelParams base = resolve_base_params();
      const ScenarioConfig a = load_scenario(config_a, base);
      const ScenarioConfig b = load_scenario(config_b, base);
      const std::vector<SimulationTrace> traces = {simulate(a), simulate(b)};
      const ComparisonReport report = compare(traces);
      ensure_dir(out_dir);
      write_file(fs::path(out_dir) / "comparison.csv",
                 [&](std::ostream& o) { write_comparison_csv(o, report); });
      write_file(fs::path(out_dir) / "shelf_life.csv",
                 [&](std::ostream& o) { write_shelf_life_report(o, report); });
      write_shelf_life_report(out, report);
    } else if (*plt) {
      const SimulationTrace t = read_trace_csv(trace_path);
      const auto groups = columns.empty() ? default_plot_groups() : parse_groups(columns);
      write_text_file(svg_path, render_svg(t, groups));
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace smartpack
