#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "anderson/dynamics.hpp"
#include "anderson/ensemble.hpp"
#include "anderson/fitting.hpp"

namespace anderson {

std::string version_string();

/// Everything needed to re-run a command. Written as `# key = value` comment
/// lines ahead of every CSV so the parameter block doubles as a config file.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::string version = version_string();
  std::vector<std::string> outputs;
  // Both vary between runs; left empty under --no-timestamp.
  std::optional<std::string> timestamp;
  std::optional<double> wall_time_s;

  std::vector<std::string> comment_lines() const;
};

// Parses the params back out of comment lines produced by comment_lines().
RunManifest parse_manifest(const std::vector<std::string>& comments);

using CsvCell = std::variant<double, std::int64_t, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

// 17 significant digits; strtod recovers the exact double.
std::string format_double(double value);

void write_csv(const CsvTable& table, const RunManifest& manifest, std::ostream& out);
// "-" writes to stdout. Throws Error(Io) naming the path on failure.
void write_csv(const CsvTable& table, const RunManifest& manifest, const std::string& path);

struct CsvDocument {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws Error(OutOfRange).
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

CsvDocument parse_csv(std::istream& in);
CsvDocument read_csv(const std::string& path);

// Non-comment lines of a CSV file, joined with '\n'.
std::string csv_body(const std::string& path);

// Config files: `key = value` per line, '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

// Per-command table layouts.
CsvTable sweep_table(const SweepResult& result);
CsvTable fit_table(const FitResult& fit);
CsvTable series_table(const std::vector<TimeSample>& series);
CsvTable peak_table(const PeakEstimate& peak);
CsvTable critical_table(const CriticalLambdaResult& result);
CsvTable decay_table(const std::vector<DecayProfile>& profiles);

}  // namespace anderson
