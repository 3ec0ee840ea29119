#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

#include "anderson/error.hpp"
#include "anderson/io.hpp"
#include "anderson/rng.hpp"

using namespace anderson;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "anderson_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

RunManifest manifest() {
  RunManifest m;
  m.command = "ground-scan";
  m.seed = 42;
  m.params = {{"size", "1600"}, {"lambdas", "0,0.5,1"}, {"bc", "periodic"}};
  m.outputs = {"a.csv", "a_fit.csv"};
  return m;
}

}  // namespace

TEST_CASE("format_double round trips bit for bit") {
  GaussianStream g(3);
  for (int i = 0; i < 2000; ++i) {
    const double x = g.next() * std::pow(10.0, static_cast<int>(g.next() * 40.0));
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
  CHECK(format_double(0.125) == "0.125");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv write and parse round trip") {
  CsvTable t;
  t.header = {"lambda", "label", "count"};
  t.rows.push_back({0.1, std::string("plain"), std::int64_t{3}});
  t.rows.push_back({1.0 / 3.0, std::string("has,comma \"and\" quote"), std::int64_t{-7}});
  std::stringstream ss;
  write_csv(t, manifest(), ss);
  const auto doc = parse_csv(ss);
  CHECK(doc.header == t.header);
  REQUIRE(doc.rows.size() == 2);
  CHECK(doc.number(1, "lambda") == 1.0 / 3.0);
  CHECK(doc.rows[1][1] == "has,comma \"and\" quote");
  CHECK(doc.number(1, "count") == -7.0);
  CHECK_THROWS_AS(doc.column("missing"), Error);
  CHECK(doc.comments.front() == "tool = anderson-ent");
}

TEST_CASE("manifest round trips through comments and config text") {
  auto m = manifest();
  m.timestamp = "2026-01-01T00:00:00Z";
  m.wall_time_s = 1.5;
  const auto back = parse_manifest(m.comment_lines());
  CHECK(back.command == m.command);
  CHECK(back.seed == 42);
  CHECK(back.version == version_string());
  CHECK(back.params == m.params);
  CHECK(back.outputs == m.outputs);
  CHECK(back.timestamp == m.timestamp);
  CHECK(back.wall_time_s == 1.5);

  std::string text;
  for (const auto& line : m.comment_lines()) text += "# " + line + "\n";
  // The comment block is a valid config once the markers are stripped.
  std::string stripped;
  for (const auto& line : m.comment_lines()) stripped += line + "\n";
  const auto kv = parse_config_text(stripped);
  CHECK(kv.size() == m.comment_lines().size());
  CHECK(parse_config_text(text).empty());
}

TEST_CASE("no timestamp lines unless set") {
  const auto lines = manifest().comment_lines();
  for (const auto& l : lines) {
    CHECK(l.find("timestamp") == std::string::npos);
    CHECK(l.find("wall_time_s") == std::string::npos);
  }
}

TEST_CASE("csv writer refuses bad tables and reports paths") {
  CsvTable empty;
  std::stringstream ss;
  CHECK_THROWS_AS(write_csv(empty, manifest(), ss), Error);
  CsvTable ragged;
  ragged.header = {"a", "b"};
  ragged.rows.push_back({1.0});
  CHECK_THROWS_AS(write_csv(ragged, manifest(), ss), Error);

  CsvTable ok;
  ok.header = {"a"};
  const std::string bad = "/nonexistent_dir_for_tests/out.csv";
  try {
    write_csv(ok, manifest(), bad);
    FAIL("write to missing directory succeeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
  CHECK_THROWS_AS(read_csv(bad), Error);
}

TEST_CASE("file round trip and body extraction") {
  const auto path = scratch("roundtrip.csv").string();
  CsvTable t;
  t.header = {"x", "y"};
  t.rows.push_back({1.0, 2.0});
  write_csv(t, manifest(), path);
  CHECK(csv_body(path) == "x,y\n1,2\n");
  const auto doc = read_csv(path);
  CHECK(parse_manifest(doc.comments).params == manifest().params);
}

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text("# comment\nsize = 64\n\n  bc=open   # trailing\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == std::pair<std::string, std::string>{"size", "64"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"bc", "open"});
  CHECK_THROWS_AS(parse_config_text("size 64\n"), Error);
  CHECK_THROWS_AS(parse_config_text(" = 3\n"), Error);
}

TEST_CASE("table schemas") {
  FitResult f;
  f.names = {"B", "D", "A"};
  f.params = {1.0, 2.0, 3.0};
  f.r2 = 0.99;
  f.converged = true;
  const auto ft = fit_table(f);
  CHECK(ft.header == std::vector<std::string>{"param", "value"});
  CHECK(ft.rows.size() == 7);
  CHECK(std::get<std::string>(ft.rows[4][0]) == "r2");
  CHECK(std::get<std::string>(ft.rows[5][0]) == "converged");

  PeakEstimate p{0.7, 0.01, true};
  const auto pt = peak_table(p);
  CHECK(std::get<std::string>(pt.rows[0][0]) == "lambda_star");
  CHECK(std::get<std::int64_t>(pt.rows[2][1]) == 1);

  SweepResult r;
  r.config.observable.kind = ObservableKind::AvgConcurrence;
  r.axis = {0.0};
  r.columns = {0.0};
  r.mean = {{0.125}};
  r.std_error = {{0.0}};
  r.successes = {1};
  const auto st = sweep_table(r);
  CHECK(st.header == std::vector<std::string>{"lambda", "mean_avg_concurrence", "stderr", "realizations"});

  r.config.observable.kind = ObservableKind::NNProfile;
  r.column_name = "site";
  r.columns = {1.0, 2.0};
  r.mean = {{0.1, 0.2}};
  r.std_error = {{0.0, 0.0}};
  const auto nt = sweep_table(r);
  CHECK(nt.header == std::vector<std::string>{"lambda", "site", "mean_concurrence", "stderr", "realizations"});
  CHECK(nt.rows.size() == 2);
  CHECK(std::get<std::int64_t>(nt.rows[1][1]) == 2);

  CriticalLambdaResult c;
  c.points.push_back({1, 0.7, 0.3, true});
  CHECK(critical_table(c).header ==
        std::vector<std::string>{"offset", "lambda_c", "peak_concurrence", "is_interior"});
  CHECK(series_table({}).header == std::vector<std::string>{"time", "avg_concurrence"});
  CHECK(decay_table({}).header.size() == 6);
}
