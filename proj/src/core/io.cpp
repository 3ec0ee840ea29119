#include "anderson/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "anderson/error.hpp"

#ifndef ANDERSON_VERSION
#define ANDERSON_VERSION "0.0.0"
#endif

namespace anderson {

namespace {

constexpr const char* kTool = "anderson-ent";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string render(const CsvCell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::int64_t count(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace

std::string version_string() { return ANDERSON_VERSION; }

std::vector<std::string> RunManifest::comment_lines() const {
  std::vector<std::string> lines;
  lines.push_back(std::string("tool = ") + kTool);
  lines.push_back("version = " + version);
  lines.push_back("command = " + command);
  lines.push_back("seed = " + std::to_string(seed));
  for (const auto& [k, v] : params) lines.push_back(k + " = " + v);
  if (!outputs.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < outputs.size(); ++i) joined += (i ? ";" : "") + outputs[i];
    lines.push_back("outputs = " + joined);
  }
  if (timestamp) lines.push_back("timestamp = " + *timestamp);
  if (wall_time_s) lines.push_back("wall_time_s = " + format_double(*wall_time_s));
  return lines;
}

RunManifest parse_manifest(const std::vector<std::string>& comments) {
  RunManifest m;
  m.version.clear();
  for (const auto& line : comments) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "tool") {
      continue;
    } else if (key == "version") {
      m.version = value;
    } else if (key == "command") {
      m.command = value;
    } else if (key == "seed") {
      m.seed = std::stoull(value);
    } else if (key == "outputs") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ';')) m.outputs.push_back(item);
    } else if (key == "timestamp") {
      m.timestamp = value;
    } else if (key == "wall_time_s") {
      m.wall_time_s = std::strtod(value.c_str(), nullptr);
    } else {
      m.params.emplace_back(key, value);
    }
  }
  return m;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const CsvTable& table, const RunManifest& manifest, std::ostream& out) {
  if (table.header.empty()) throw Error(ErrorKind::InvalidConfig, "refusing to write a CSV without a header row");
  for (const auto& line : manifest.comment_lines()) out << "# " << line << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw Error(ErrorKind::Dimension, "CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
    out << '\n';
  }
}

void write_csv(const CsvTable& table, const RunManifest& manifest, const std::string& path) {
  if (path == "-") {
    write_csv(table, manifest, std::cout);
    std::cout.flush();
    if (!std::cout) throw Error(ErrorKind::Io, "failed writing CSV to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  write_csv(table, manifest, out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

std::size_t CsvDocument::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::OutOfRange, "CSV has no column '" + name + "'");
}

double CsvDocument::number(std::size_t row, const std::string& name) const {
  return std::strtod(rows.at(row).at(column(name)).c_str(), nullptr);
}

CsvDocument parse_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#", 0) == 0) {
      doc.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (line.empty()) continue;
    if (!have_header) {
      doc.header = split_csv_line(line);
      have_header = true;
    } else {
      doc.rows.push_back(split_csv_line(line));
    }
  }
  return doc;
}

CsvDocument read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  return parse_csv(in);
}

std::string csv_body(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::string line, body;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    body += line;
    body += '\n';
  }
  return body;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidConfig, "config line " + std::to_string(lineno) + " is not 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::InvalidConfig, "config line " + std::to_string(lineno) + " has no key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

CsvTable sweep_table(const SweepResult& r) {
  CsvTable t;
  const auto kind = r.config.observable.kind;
  const std::size_t nl = r.axis.size();
  switch (kind) {
    case ObservableKind::AvgConcurrence:
      t.header = {"lambda", "mean_avg_concurrence", "stderr", "realizations"};
      for (std::size_t k = 0; k < nl; ++k)
        t.rows.push_back({r.axis[k], r.mean[k][0], r.std_error[k][0], count(r.successes[k])});
      break;
    case ObservableKind::LocalizationLength:
      t.header = {"lambda"};
      for (const auto& label : r.column_labels) {
        t.header.push_back("mean_" + label);
        t.header.push_back("stderr_" + label);
      }
      t.header.push_back("realizations");
      for (std::size_t k = 0; k < nl; ++k) {
        std::vector<CsvCell> row{r.axis[k]};
        for (std::size_t m = 0; m < r.columns.size(); ++m) {
          row.emplace_back(r.mean[k][m]);
          row.emplace_back(r.std_error[k][m]);
        }
        row.emplace_back(count(r.successes[k]));
        t.rows.push_back(std::move(row));
      }
      break;
    case ObservableKind::Dynamics:
      t.header = {"lambda", "time", "mean_avg_concurrence", "stderr", "realizations"};
      for (std::size_t k = 0; k < nl; ++k)
        for (std::size_t m = 0; m < r.columns.size(); ++m)
          t.rows.push_back({r.axis[k], r.columns[m], r.mean[k][m], r.std_error[k][m], count(r.successes[k])});
      break;
    case ObservableKind::NNProfile:
    case ObservableKind::CenterPair:
    case ObservableKind::CenterProfile:
      t.header = {"lambda", r.column_name, "mean_concurrence", "stderr", "realizations"};
      for (std::size_t k = 0; k < nl; ++k)
        for (std::size_t m = 0; m < r.columns.size(); ++m)
          t.rows.push_back({r.axis[k], static_cast<std::int64_t>(r.columns[m]), r.mean[k][m], r.std_error[k][m],
                            count(r.successes[k])});
      break;
  }
  return t;
}

CsvTable fit_table(const FitResult& fit) {
  CsvTable t;
  t.header = {"param", "value"};
  for (std::size_t i = 0; i < fit.params.size(); ++i) t.rows.push_back({fit.names.at(i), fit.params[i]});
  t.rows.push_back({std::string("residual_norm"), fit.residual_norm});
  t.rows.push_back({std::string("r2"), fit.r2});
  t.rows.push_back({std::string("converged"), std::int64_t{fit.converged ? 1 : 0}});
  t.rows.push_back({std::string("iterations"), std::int64_t{fit.iterations}});
  return t;
}

CsvTable series_table(const std::vector<TimeSample>& series) {
  CsvTable t;
  t.header = {"time", "avg_concurrence"};
  for (const auto& s : series) t.rows.push_back({s.time, s.avg_concurrence});
  return t;
}

CsvTable peak_table(const PeakEstimate& peak) {
  CsvTable t;
  t.header = {"param", "value"};
  t.rows.push_back({std::string("lambda_star"), peak.x});
  t.rows.push_back({std::string("concurrence_star"), peak.y});
  t.rows.push_back({std::string("is_interior"), std::int64_t{peak.interior ? 1 : 0}});
  return t;
}

CsvTable critical_table(const CriticalLambdaResult& result) {
  CsvTable t;
  t.header = {"offset", "lambda_c", "peak_concurrence", "is_interior"};
  for (const auto& p : result.points)
    t.rows.push_back({static_cast<std::int64_t>(p.offset), p.lambda_c, p.peak_value, std::int64_t{p.interior ? 1 : 0}});
  return t;
}

CsvTable decay_table(const std::vector<DecayProfile>& profiles) {
  CsvTable t;
  t.header = {"lambda", "distance", "mean_concurrence", "stderr", "mean_log_concurrence", "realizations"};
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.distance.size(); ++i)
      t.rows.push_back({p.lambda, static_cast<std::int64_t>(p.distance[i]), p.mean_concurrence[i], p.std_error[i],
                        p.mean_log_concurrence[i], count(p.counts[i])});
  return t;
}

}  // namespace anderson
