// anderson-ent: disorder-averaged entanglement experiments on the 1D Anderson
// model. One subcommand per experiment; every result is a CSV whose comment
// block is a config file that reproduces it.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anderson/anderson.h"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kConfig = 3, kNumeric = 4, kIo = 5 };

struct Failure {
  int code;
  std::string kind;
  std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw Failure{kConfig, "invalid-config", message}; }

void check(ae_status status) {
  if (status == AE_OK) return;
  int code = kInternal;
  switch (status) {
    case AE_ERR_ARGUMENT:
    case AE_ERR_CONFIG: code = kConfig; break;
    case AE_ERR_NUMERIC: code = kNumeric; break;
    case AE_ERR_IO: code = kIo; break;
    default: break;
  }
  throw Failure{code, ae_last_error_kind(), ae_last_error()};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Sweep = std::unique_ptr<ae_sweep, Deleter<ae_sweep, ae_sweep_destroy>>;
using Fit = std::unique_ptr<ae_fit, Deleter<ae_fit, ae_fit_destroy>>;
using Manifest = std::unique_ptr<ae_manifest, Deleter<ae_manifest, ae_manifest_destroy>>;
using Critical = std::unique_ptr<ae_critical, Deleter<ae_critical, ae_critical_destroy>>;
using Decay = std::unique_ptr<ae_decay, Deleter<ae_decay, ae_decay_destroy>>;
using StateHandle = std::unique_ptr<ae_state, Deleter<ae_state, ae_state_destroy>>;
using Config = std::unique_ptr<ae_config, Deleter<ae_config, ae_config_destroy>>;

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_number(const std::string& text, const char* what) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || !std::isfinite(v)) config_error(std::string("bad ") + what + " value '" + text + "'");
  return v;
}

// "a,b,c" or "start:stop:step" (inclusive of stop up to rounding).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) config_error("range '" + text + "' is not start:stop:step");
    const double start = parse_number(parts[0], "lambda");
    const double stop = parse_number(parts[1], "lambda");
    const double step = parse_number(parts[2], "lambda");
    if (step <= 0.0 || stop < start) config_error("range '" + text + "' is empty");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < n; ++i) out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "lambda"));
  }
  if (out.empty()) config_error("empty lambda list");
  return out;
}

std::vector<ptrdiff_t> parse_offsets(const std::string& text) {
  std::vector<ptrdiff_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = parse_number(item, "offset");
    if (v != std::floor(v)) config_error("offset '" + item + "' is not an integer");
    out.push_back(static_cast<ptrdiff_t>(v));
  }
  if (out.empty()) config_error("empty offset list");
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

std::string join(const std::vector<ptrdiff_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

// results.csv -> results_fit.csv; "-" has no sibling.
std::string sibling(const std::string& out, const std::string& suffix) {
  if (out == "-") return {};
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + suffix + ".csv";
  return out.substr(0, dot) + suffix + out.substr(dot);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::size_t size = 1600;
  double hopping = 1.0;
  double offset = 0.0;
  std::uint64_t seed = 1;
  std::string bc = "periodic";
  std::size_t realizations = 50;
  std::size_t workers = 1;
  std::string disorder = "shared";
  std::string lambdas;
  std::string out = "-";
  std::string fit_out;
  std::string config;
  bool no_timestamp = false;

  ptrdiff_t pair_offset = 1;
  std::string offsets = "1,2,3,4,5,6";
  std::size_t max_offset = 40;

  std::string init = "delta";
  std::string state_file;
  std::size_t site = 0;  // 1-based; 0 selects N/2
  double dt = 0.05;
  double total_time = 400.0;
  std::size_t record_stride = 20;
};

struct Cli {
  CLI::App app{"Entanglement of one-particle states in the disordered 1D tight-binding model", "anderson-ent"};
  std::map<std::string, Options> opts;
  std::map<std::string, CLI::App*> subs;

  Cli() {
    app.require_subcommand(1);
    app.set_version_flag("--version", ae_version());

    auto* gs = common("ground-scan", "Ensemble-mean <C> of the ground state vs lambda, with a double-exponential fit",
                      "0:2:0.05", 50);
    gs->add_option("--fit-out", opts["ground-scan"].fit_out, "Fit CSV (default: <out>_fit.csv)");

    common("nn-dist", "Nearest-neighbour concurrence profile of the ground state per lambda",
           "0,0.01,0.05,0.1,0.5,1.0", 1);

    auto* cp = common("center-pair", "C(i0, i0+j) vs lambda around the localization center, with its peak",
                      "0:2:0.1", 50);
    cp->add_option("--pair-offset", opts["center-pair"].pair_offset, "Offset j from the center")->capture_default_str();
    cp->add_option("--fit-out", opts["center-pair"].fit_out, "Peak CSV (default: <out>_peak.csv)");

    auto* cl = common("critical-lambda", "Critical lambda per offset j and its exponential fit", "0:2:0.1", 50);
    cl->add_option("--offsets", opts["critical-lambda"].offsets, "Comma-separated offsets j >= 1")->capture_default_str();
    cl->add_option("--fit-out", opts["critical-lambda"].fit_out, "Fit CSV (default: <out>_fit.csv)");

    auto* dp = common("decay-profile", "Ensemble-mean C(i0, i0+j) folded onto |j|, with decay fits", "0.5,1.0", 50);
    dp->add_option("--max-offset", opts["decay-profile"].max_offset, "Largest |j|")->capture_default_str();
    dp->add_option("--fit-out", opts["decay-profile"].fit_out, "Fit CSV (default: <out>_fit.csv)");

    auto* ev = common("evolve", "Ensemble-mean <C>(t) under Crank-Nicolson evolution", "0,0.05,0.1,0.5,1.0", 1);
    auto& eo = opts["evolve"];
    ev->add_option("--init", eo.init, "Initial state")->check(CLI::IsMember({"delta", "w", "custom"}))->capture_default_str();
    ev->add_option("--site", eo.site, "Delta site, 1-based (default N/2)");
    ev->add_option("--state-file", eo.state_file, "CSV with columns re[,im] for --init custom");
    ev->add_option("--dt", eo.dt, "Time step")->capture_default_str();
    ev->add_option("--total-time", eo.total_time, "Final time")->capture_default_str();
    ev->add_option("--record-stride", eo.record_stride, "Steps between samples")->capture_default_str();

    subs["selfcheck"] = app.add_subcommand("selfcheck", "Small-N invariant suite; exit 0 iff every check passes");
  }

  CLI::App* common(const std::string& name, const std::string& help, const std::string& grid, std::size_t r) {
    auto* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    auto& o = opts[name];
    o.lambdas = grid;
    o.realizations = r;
    sub->add_option("--size", o.size, "Number of sites N")->capture_default_str();
    sub->add_option("--hopping", o.hopping, "Hopping t")->capture_default_str();
    sub->add_option("--offset", o.offset, "Uniform on-site offset V0")->capture_default_str();
    sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    sub->add_option("--bc", o.bc, "Boundary condition")
        ->check(CLI::IsMember({"open", "periodic", "obc", "pbc"}))
        ->capture_default_str();
    sub->add_option("--realizations", o.realizations, "Disorder realizations per lambda")->capture_default_str();
    sub->add_option("--workers", o.workers, "Worker threads (env ANDERSON_ENT_WORKERS)")->check(CLI::PositiveNumber);
    sub->add_option("--disorder", o.disorder, "shared: one eps pattern per realization across lambda; independent: per cell")
        ->check(CLI::IsMember({"shared", "independent"}))
        ->capture_default_str();
    sub->add_option("--lambdas,--lambda", o.lambdas, "Disorder strengths: a,b,c or start:stop:step")
        ->capture_default_str();
    sub->add_option("--out", o.out, "Output CSV, - for stdout")->capture_default_str();
    sub->add_option("--config", o.config, "key = value file; flags take precedence");
    sub->add_flag("--no-timestamp", o.no_timestamp, "Omit timestamp and wall time from the comment block");
    return sub;
  }

  CLI::App* selected() const {
    const auto chosen = app.get_subcommands();
    return chosen.empty() ? nullptr : chosen.front();
  }
};

struct Run {
  std::string command;
  Options o;
  CLI::App* sub;
  Manifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<double> lambdas;

  Run(std::string name, const Options& opts, CLI::App* app) : command(std::move(name)), o(opts), sub(app) {
    if (sub->get_option("--workers")->count() == 0) {
      if (const char* env = std::getenv("ANDERSON_ENT_WORKERS")) {
        const double w = parse_number(env, "ANDERSON_ENT_WORKERS");
        if (w < 1 || w != std::floor(w)) config_error("ANDERSON_ENT_WORKERS must be a positive integer");
        o.workers = static_cast<std::size_t>(w);
      }
    }
    lambdas = parse_grid(o.lambdas);
    ae_manifest* m = nullptr;
    check(ae_manifest_create(command.c_str(), o.seed, &m));
    manifest.reset(m);
    set("size", std::to_string(o.size));
    set("hopping", fmt(o.hopping));
    set("offset", fmt(o.offset));
    set("bc", boundary() == AE_BC_OPEN ? "open" : "periodic");
    set("realizations", std::to_string(o.realizations));
    set("workers", std::to_string(o.workers));
    set("disorder", o.disorder);
    set("lambdas", join(lambdas));
  }

  void set(const std::string& key, const std::string& value) {
    check(ae_manifest_set(manifest.get(), key.c_str(), value.c_str()));
  }

  int boundary() const { return o.bc == "open" || o.bc == "obc" ? AE_BC_OPEN : AE_BC_PERIODIC; }

  ae_sweep_config sweep_config(int observable) const {
    ae_sweep_config cfg;
    ae_sweep_config_init(&cfg);
    cfg.base.size = o.size;
    cfg.base.hopping = o.hopping;
    cfg.base.offset = o.offset;
    cfg.base.seed = o.seed;
    cfg.base.boundary = boundary();
    cfg.lambdas = lambdas.data();
    cfg.n_lambdas = lambdas.size();
    cfg.realizations = o.realizations;
    cfg.workers = o.workers;
    cfg.sampling = o.disorder == "shared" ? AE_SAMPLING_SHARED : AE_SAMPLING_INDEPENDENT;
    cfg.observable = observable;
    return cfg;
  }

  // Secondary output path: --fit-out, else <out><suffix>.csv, empty for stdout.
  std::string second_path(const std::string& suffix) const {
    return o.fit_out.empty() ? sibling(o.out, suffix) : o.fit_out;
  }

  // Lists the files this run writes in the manifest.
  void outputs(const std::string& second = {}) {
    if (o.out != "-") check(ae_manifest_add_output(manifest.get(), o.out.c_str()));
    if (!second.empty()) check(ae_manifest_add_output(manifest.get(), second.c_str()));
  }

  void stamp() {
    if (o.no_timestamp) return;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check(ae_manifest_set_timing(manifest.get(), utc_timestamp().c_str(), wall));
  }

  void report_failures(const ae_sweep* s) const {
    for (std::size_t k = 0; k < ae_sweep_rows(s); ++k) {
      if (ae_sweep_failures(s, k) == 0) continue;
      std::cerr << "anderson-ent: note lambda=" << fmt(ae_sweep_axis(s, k)) << " failed_cells=" << ae_sweep_failures(s, k)
                << " first=\"" << ae_sweep_failure_note(s, k) << "\"\n";
    }
  }

  Sweep sweep(const ae_sweep_config& cfg) const {
    ae_sweep* s = nullptr;
    check(ae_run_sweep(&cfg, &s));
    Sweep out(s);
    report_failures(out.get());
    return out;
  }
};

int ground_scan(Run& run) {
  const auto cfg = run.sweep_config(AE_OBS_AVG_CONCURRENCE);
  const bool fitting = run.lambdas.size() >= 6;
  if (!fitting && !run.o.fit_out.empty()) config_error("the double-exponential fit needs at least 6 lambda values");
  const std::string fit_path = fitting ? run.second_path("_fit") : std::string();
  run.outputs(fit_path);
  auto s = run.sweep(cfg);
  Fit fit;
  if (fitting) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < ae_sweep_rows(s.get()); ++k) {
      xs.push_back(ae_sweep_axis(s.get(), k));
      ys.push_back(ae_sweep_mean(s.get(), k, 0));
    }
    ae_fit* f = nullptr;
    check(ae_fit_exp_double(xs.data(), ys.data(), xs.size(), &f));
    fit.reset(f);
  }
  run.stamp();
  check(ae_write_sweep_csv(s.get(), run.manifest.get(), run.o.out.c_str()));
  if (fit && !fit_path.empty()) check(ae_write_fit_csv(fit.get(), run.manifest.get(), fit_path.c_str()));
  return kOk;
}

int nn_dist(Run& run) {
  const auto cfg = run.sweep_config(AE_OBS_NN_PROFILE);
  run.outputs();
  auto s = run.sweep(cfg);
  run.stamp();
  check(ae_write_sweep_csv(s.get(), run.manifest.get(), run.o.out.c_str()));
  return kOk;
}

int center_pair(Run& run) {
  auto cfg = run.sweep_config(AE_OBS_CENTER_PAIR);
  const ptrdiff_t j = run.o.pair_offset;
  cfg.offsets = &j;
  cfg.n_offsets = 1;
  run.set("pair-offset", std::to_string(j));
  const bool have_peak = run.lambdas.size() >= 5;
  if (!have_peak && !run.o.fit_out.empty()) config_error("peak location needs at least 5 lambda values");
  const std::string peak_path = have_peak ? run.second_path("_peak") : std::string();
  run.outputs(peak_path);
  auto s = run.sweep(cfg);
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < ae_sweep_rows(s.get()); ++k) {
    xs.push_back(ae_sweep_axis(s.get(), k));
    ys.push_back(ae_sweep_mean(s.get(), k, 0));
  }
  ae_peak peak{};
  if (have_peak) check(ae_find_interior_max(xs.data(), ys.data(), xs.size(), &peak));
  run.stamp();
  check(ae_write_sweep_csv(s.get(), run.manifest.get(), run.o.out.c_str()));
  if (have_peak && !peak_path.empty()) check(ae_write_peak_csv(&peak, run.manifest.get(), peak_path.c_str()));
  return kOk;
}

int critical_lambda(Run& run) {
  const auto offsets = parse_offsets(run.o.offsets);
  run.set("offsets", join(offsets));
  const auto cfg = run.sweep_config(AE_OBS_CENTER_PAIR);
  ae_critical* c = nullptr;
  check(ae_run_critical_lambda(&cfg.base, offsets.data(), offsets.size(), run.lambdas.data(), run.lambdas.size(),
                               cfg.realizations, cfg.workers, cfg.sampling, &c));
  Critical result(c);
  const ae_fit* fit = ae_critical_fit(result.get());
  if (!fit && !run.o.fit_out.empty())
    config_error("no exponential fit: need at least 4 offsets with distinct critical lambdas");
  const std::string fit_path = fit ? run.second_path("_fit") : std::string();
  run.outputs(fit_path);
  run.stamp();
  check(ae_write_critical_csv(result.get(), run.manifest.get(), run.o.out.c_str()));
  if (!fit_path.empty()) check(ae_write_fit_csv(fit, run.manifest.get(), fit_path.c_str()));
  return kOk;
}

int decay_profile(Run& run) {
  auto cfg = run.sweep_config(AE_OBS_CENTER_PROFILE);
  cfg.max_offset = run.o.max_offset;
  run.set("max-offset", std::to_string(run.o.max_offset));
  const std::string fit_path = run.second_path("_fit");
  run.outputs(fit_path);
  ae_decay* d = nullptr;
  check(ae_run_decay_profile(&cfg, &d));
  Decay result(d);
  run.stamp();
  check(ae_write_decay_csv(result.get(), run.manifest.get(), run.o.out.c_str()));
  if (!fit_path.empty()) check(ae_write_decay_fits_csv(result.get(), run.manifest.get(), fit_path.c_str()));
  return kOk;
}

int evolve(Run& run) {
  auto cfg = run.sweep_config(AE_OBS_DYNAMICS);
  const auto& o = run.o;
  cfg.propagator.dt = o.dt;
  cfg.propagator.total_time = o.total_time;
  cfg.propagator.record_stride = o.record_stride;
  run.set("init", o.init);
  run.set("dt", fmt(o.dt));
  run.set("total-time", fmt(o.total_time));
  run.set("record-stride", std::to_string(o.record_stride));
  StateHandle custom;
  if (o.init == "delta") {
    cfg.init.kind = AE_INIT_DELTA;
    if (o.site != 0) {
      if (o.site > o.size) config_error("--site " + std::to_string(o.site) + " is outside 1.." + std::to_string(o.size));
      cfg.init.use_middle_site = 0;
      cfg.init.site = o.site - 1;
      run.set("site", std::to_string(o.site));
    }
  } else if (o.init == "w") {
    cfg.init.kind = AE_INIT_W;
  } else {
    if (o.state_file.empty()) config_error("--init custom needs --state-file");
    ae_state* s = nullptr;
    check(ae_state_read_csv(o.state_file.c_str(), &s));
    custom.reset(s);
    if (ae_state_size(s) != o.size)
      config_error("state file has " + std::to_string(ae_state_size(s)) + " amplitudes, expected " +
                   std::to_string(o.size));
    cfg.init.kind = AE_INIT_CUSTOM;
    cfg.init.custom = s;
    run.set("state-file", o.state_file);
  }
  run.outputs();
  auto s = run.sweep(cfg);
  run.stamp();
  check(ae_write_sweep_csv(s.get(), run.manifest.get(), run.o.out.c_str()));
  return kOk;
}

int selfcheck() {
  int all = 0;
  check(ae_selfcheck(
      [](const char* name, int passed, const char* detail, void*) {
        std::cout << (passed ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
      },
      nullptr, &all));
  return all ? kOk : kNumeric;
}

// Config entries become flags that the command line did not already set.
std::vector<std::string> config_arguments(CLI::App* sub, const std::string& path) {
  ae_config* raw = nullptr;
  check(ae_config_read(path.c_str(), &raw));
  Config cfg(raw);
  std::vector<std::string> extra;
  for (std::size_t i = 0; i < ae_config_count(cfg.get()); ++i) {
    const std::string key = ae_config_key(cfg.get(), i);
    const std::string value = ae_config_value(cfg.get(), i);
    if (key == "tool" || key == "version" || key == "outputs" || key == "timestamp" || key == "wall_time_s") continue;
    if (key == "command") {
      if (value != sub->get_name())
        config_error("config is for '" + value + "', not '" + sub->get_name() + "'");
      continue;
    }
    const CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
    if (!opt) config_error("unknown config key '" + key + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    if (opt->get_expected_max() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on") extra.push_back("--" + key);
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  return extra;
}

void parse(Cli& cli, const std::vector<std::string>& args) {
  std::vector<const char*> argv{"anderson-ent"};
  for (const auto& a : args) argv.push_back(a.c_str());
  cli.app.parse(static_cast<int>(argv.size()), argv.data());
}

int dispatch(Cli& cli) {
  CLI::App* sub = cli.selected();
  const std::string name = sub->get_name();
  if (name == "selfcheck") return selfcheck();
  Run run(name, cli.opts.at(name), sub);
  if (name == "ground-scan") return ground_scan(run);
  if (name == "nn-dist") return nn_dist(run);
  if (name == "center-pair") return center_pair(run);
  if (name == "critical-lambda") return critical_lambda(run);
  if (name == "decay-profile") return decay_profile(run);
  return evolve(run);
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  auto cli = std::make_unique<Cli>();
  try {
    parse(*cli, args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return cli->app.exit(e);
    std::cerr << "anderson-ent: error code=" << kUsage << " kind=usage: " << one_line(e.what()) << '\n';
    return kUsage;
  }
  try {
    const std::string name = cli->selected()->get_name();
    if (name != "selfcheck" && !cli->opts.at(name).config.empty()) {
      auto extra = config_arguments(cli->selected(), cli->opts.at(name).config);
      auto full = args;
      full.insert(full.end(), extra.begin(), extra.end());
      cli = std::make_unique<Cli>();
      try {
        parse(*cli, full);
      } catch (const CLI::ParseError& e) {
        config_error(std::string("config value rejected: ") + e.what());
      }
    }
    return dispatch(*cli);
  } catch (const Failure& f) {
    std::cerr << "anderson-ent: error code=" << f.code << " kind=" << f.kind << ": " << one_line(f.message) << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "anderson-ent: error code=" << kInternal << " kind=internal: " << one_line(e.what()) << '\n';
    return kInternal;
  }
}
