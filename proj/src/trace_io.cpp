#include "smartpack/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "smartpack/errors.hpp"

namespace smartpack {

namespace detail {

std::vector<std::vector<std::string>> read_csv_records(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (record.empty() && !field_started && field.empty()) return;
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        field_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw InvalidInput("unterminated quoted CSV field");
  end_record();
  return records;
}

}  // namespace detail

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "# scenario: " << trace.name << '\n';
  out << "# config_digest: " << trace.config_digest << '\n';
  const auto& cols = trace_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& row : trace.rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << ',';
      if (c == 8) {
        out << (row.gate_open ? '1' : '0');
      } else {
        out << format_number(trace_value(row, c));
      }
    }
    out << '\n';
  }
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : "";
}

}  // namespace

void write_events_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "# scenario: " << trace.name << '\n';
  out << "# config_digest: " << trace.config_digest << '\n';
  out << "kind,t_h,step,detail\n";
  for (const auto& e : trace.events) {
    out << event_kind_name(e.kind) << ',' << format_number(e.t_h) << ',' << e.step << ','
        << quote(e.detail) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "trace,column,max_abs_delta,final_delta\n";
  for (const auto& d : report.deltas) {
    out << quote(report.names[d.trace_index]) << ',' << d.column << ','
        << format_number(d.max_abs_delta) << ',' << format_number(d.final_delta) << '\n';
  }
}

void write_shelf_life_report(std::ostream& out, const ComparisonReport& report) {
  out << "trace,time_to_limit_h,duration_h,extension_h,extension_is_lower_bound\n";
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    const auto ext = report.shelf_life_extension_h(i);
    const bool lower = ext && i > 0 && !report.time_to_limit_h[i];
    out << quote(report.names[i]) << ',' << optional_number(report.time_to_limit_h[i]) << ','
        << format_number(report.duration_h[i]) << ',' << optional_number(ext) << ','
        << (lower ? 1 : 0) << '\n';
  }
}

SimulationTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  SimulationTrace trace;
  std::string line;
  std::string body;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# scenario: ", 0) == 0) {
      trace.name = line.substr(12);
    } else if (line.rfind("# config_digest: ", 0) == 0) {
      trace.config_digest = line.substr(17);
    } else if (!line.empty() && line[0] != '#') {
      body += line;
      body += '\n';
    }
  }
  std::istringstream bs(body);
  const auto records = detail::read_csv_records(bs);
  const auto& cols = trace_columns();
  if (records.empty() || records[0] != cols) {
    throw ConfigError(path.string(), "trace CSV header does not match the expected columns");
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != cols.size()) {
      throw ConfigError(path.string() + ":row " + std::to_string(r), "wrong number of fields");
    }
    double v[15];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      char* end = nullptr;
      v[c] = std::strtod(rec[c].c_str(), &end);
      if (rec[c].empty() || *end != '\0') {
        throw ConfigError(path.string() + ":row " + std::to_string(r) + "." + cols[c],
                          "not a number");
      }
    }
    TraceRow row{v[0], v[1], v[2],        v[3],  v[4],  v[5],  v[6], v[7],
                 v[8] != 0.0, v[9], v[10], v[11], v[12], v[13], v[14]};
    trace.rows.push_back(row);
  }
  if (trace.rows.size() > 1) trace.dt_s = trace.rows[1].t_s - trace.rows[0].t_s;
  return trace;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace smartpack
