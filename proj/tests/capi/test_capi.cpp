#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "anderson/anderson.h"

namespace {

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "anderson_capi_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ae_disorder_config small(std::size_t n, double lambda) {
  ae_disorder_config c;
  ae_disorder_config_init(&c);
  c.size = n;
  c.strength = lambda;
  return c;
}

}  // namespace

TEST_CASE("defaults") {
  ae_disorder_config c;
  ae_disorder_config_init(&c);
  CHECK(c.size == 1600);
  CHECK(c.hopping == 1.0);
  CHECK(c.boundary == AE_BC_PERIODIC);
  ae_propagator_config p;
  ae_propagator_config_init(&p);
  CHECK(p.dt == 0.05);
  CHECK(p.total_time == 400.0);
  CHECK(p.record_stride == 20);
  ae_sweep_config s;
  ae_sweep_config_init(&s);
  CHECK(s.realizations == 50);
  CHECK(s.sampling == AE_SAMPLING_SHARED);
  CHECK(std::string(ae_version()).size() > 0);
}

TEST_CASE("null arguments and error codes") {
  ae_hamiltonian* h = nullptr;
  CHECK(ae_hamiltonian_create(nullptr, &h) == AE_ERR_ARGUMENT);
  CHECK(std::string(ae_last_error_kind()) == "argument");

  auto c = small(1, 0.0);
  CHECK(ae_hamiltonian_create(&c, &h) == AE_ERR_CONFIG);
  CHECK(std::string(ae_last_error()).size() > 0);
  c = small(8, 0.0);
  c.boundary = 7;
  CHECK(ae_hamiltonian_create(&c, &h) == AE_ERR_CONFIG);

  ae_state* s = nullptr;
  const double zeros[4] = {0, 0, 0, 0};
  CHECK(ae_state_create(zeros, 2, 1, &s) == AE_ERR_NUMERIC);
  const double unnormalized[4] = {1, 0, 1, 0};
  CHECK(ae_state_create(unnormalized, 2, 0, &s) == AE_ERR_CONFIG);

  ae_state* flat = nullptr;
  REQUIRE(ae_state_w(50, &flat) == AE_OK);
  ae_localization_report rep;
  CHECK(ae_localization_length(flat, AE_BC_PERIODIC, &rep) == AE_ERR_NUMERIC);
  CHECK(std::string(ae_last_error_kind()) == "nonpositive-slope");
  ae_state_destroy(flat);

  ae_state* tmp = nullptr;
  CHECK(ae_state_read_csv("/nonexistent_dir_for_tests/state.csv", &tmp) == AE_ERR_IO);
  CHECK(std::string(ae_last_error()).find("/nonexistent_dir_for_tests/state.csv") != std::string::npos);

  // Destroying null handles is a no-op.
  ae_hamiltonian_destroy(nullptr);
  ae_state_destroy(nullptr);
  ae_sweep_destroy(nullptr);
  ae_fit_destroy(nullptr);
}

TEST_CASE("last error is per thread") {
  ae_hamiltonian* h = nullptr;
  CHECK(ae_hamiltonian_create(nullptr, &h) == AE_ERR_ARGUMENT);
  std::string other;
  std::thread t([&] {
    auto c = small(1, 0.0);
    ae_hamiltonian_create(&c, &h);
    other = ae_last_error_kind();
  });
  t.join();
  CHECK(other == "invalid-config");
  CHECK(std::string(ae_last_error_kind()) == "argument");
}

TEST_CASE("ground state and concurrence") {
  auto c = small(16, 0.0);
  ae_hamiltonian* h = nullptr;
  REQUIRE(ae_hamiltonian_create(&c, &h) == AE_OK);
  CHECK(ae_hamiltonian_size(h) == 16);
  double e = 0;
  ae_state* gs = nullptr;
  REQUIRE(ae_ground_state(h, &e, &gs) == AE_OK);
  CHECK(e == doctest::Approx(-2.0));
  double avg = 0;
  REQUIRE(ae_average_concurrence(gs, &avg) == AE_OK);
  CHECK(avg == doctest::Approx(0.125));
  std::vector<double> prof(16);
  std::size_t len = 0;
  REQUIRE(ae_nn_profile(gs, AE_BC_PERIODIC, prof.data(), prof.size(), &len) == AE_OK);
  CHECK(len == 16);
  CHECK(ae_nn_profile(gs, AE_BC_PERIODIC, prof.data(), 3, &len) == AE_ERR_ARGUMENT);

  double energies[3];
  ae_state* states[3] = {nullptr, nullptr, nullptr};
  REQUIRE(ae_lowest_k(h, 3, energies, states) == AE_OK);
  CHECK(energies[0] <= energies[1]);
  for (auto* s : states) ae_state_destroy(s);
  ae_state_destroy(gs);
  ae_hamiltonian_destroy(h);
}

TEST_CASE("evolution of the W state") {
  auto c = small(8, 0.0);
  ae_hamiltonian* h = nullptr;
  REQUIRE(ae_hamiltonian_create(&c, &h) == AE_OK);
  ae_propagator_config p;
  ae_propagator_config_init(&p);
  p.total_time = 5.0;
  p.record_stride = 10;
  ae_initial_state init{AE_INIT_W, 0, 0, nullptr};
  ae_series* series = nullptr;
  REQUIRE(ae_evolve_record(h, &init, &p, &series) == AE_OK);
  CHECK(ae_series_length(series) == 11);
  for (std::size_t i = 0; i < ae_series_length(series); ++i) {
    double t = 0, v = 0;
    REQUIRE(ae_series_sample(series, i, &t, &v) == AE_OK);
    CHECK(std::abs(v - 0.25) < 1e-10);
  }
  const auto path = scratch("series.csv");
  CHECK(ae_write_series_csv(series, nullptr, path.c_str()) == AE_OK);
  CHECK(slurp(path).find("time,avg_concurrence") != std::string::npos);
  ae_series_destroy(series);
  ae_hamiltonian_destroy(h);
}

TEST_CASE("fits through handles") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 20; ++i) {
    xs.push_back(i);
    ys.push_back(3.0 * std::exp(-i / 5.0) + 0.1);
  }
  ae_fit* f = nullptr;
  REQUIRE(ae_fit_exp_single(xs.data(), ys.data(), xs.size(), &f) == AE_OK);
  CHECK(ae_fit_param_count(f) == 3);
  CHECK(std::string(ae_fit_param_name(f, 1)) == "D");
  double d = 0;
  REQUIRE(ae_fit_param(f, "D", &d) == AE_OK);
  CHECK(d == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(ae_fit_param(f, "Q", &d) == AE_ERR_CONFIG);
  CHECK(ae_fit_converged(f) == 1);
  CHECK(ae_fit_r2(f) == doctest::Approx(1.0));
  ae_fit_destroy(f);

  std::vector<double> flat(xs.size(), 1.0);
  CHECK(ae_fit_exp_single(xs.data(), flat.data(), xs.size(), &f) == AE_ERR_CONFIG);
  CHECK(std::string(ae_last_error_kind()) == "degenerate-input");

  ae_peak peak;
  std::vector<double> hump;
  for (double x : xs) hump.push_back(-(x - 7.0) * (x - 7.0));
  REQUIRE(ae_find_interior_max(xs.data(), hump.data(), xs.size(), &peak) == AE_OK);
  CHECK(peak.interior == 1);
  CHECK(peak.x == doctest::Approx(7.0));
}

TEST_CASE("sweep, CSV and read back") {
  ae_sweep_config cfg;
  ae_sweep_config_init(&cfg);
  cfg.base.size = 64;
  const double lambdas[] = {0.0, 0.5, 1.0};
  cfg.lambdas = lambdas;
  cfg.n_lambdas = 3;
  cfg.realizations = 4;
  ae_sweep* s = nullptr;
  REQUIRE(ae_run_sweep(&cfg, &s) == AE_OK);
  CHECK(ae_sweep_rows(s) == 3);
  CHECK(ae_sweep_cols(s) == 1);
  CHECK(ae_sweep_mean(s, 0, 0) == doctest::Approx(2.0 / 64.0));
  CHECK(ae_sweep_successes(s, 2) == 4);
  CHECK(std::string(ae_sweep_failure_note(s, 1)).empty());

  ae_manifest* m = nullptr;
  REQUIRE(ae_manifest_create("ground-scan", 1, &m) == AE_OK);
  REQUIRE(ae_manifest_set(m, "size", "64") == AE_OK);
  const auto path = scratch("sweep.csv");
  REQUIRE(ae_write_sweep_csv(s, m, path.c_str()) == AE_OK);

  ae_config* conf = nullptr;
  REQUIRE(ae_config_read(path.c_str(), &conf) == AE_OK);
  bool found = false;
  for (std::size_t i = 0; i < ae_config_count(conf); ++i)
    if (std::string(ae_config_key(conf, i)) == "size") found = std::string(ae_config_value(conf, i)) == "64";
  CHECK(found);
  CHECK(std::string(ae_config_key(conf, 0)) == "tool");
  ae_config_destroy(conf);

  const auto plain = scratch("plain.csv");
  {
    std::ofstream o(plain);
    o << "a,b\n1,2\n";
  }
  CHECK(ae_config_read(plain.c_str(), &conf) == AE_ERR_CONFIG);

  CHECK(ae_write_sweep_csv(s, m, "/nonexistent_dir_for_tests/x.csv") == AE_ERR_IO);
  ae_manifest_destroy(m);
  ae_sweep_destroy(s);

  cfg.workers = 0;
  CHECK(ae_run_sweep(&cfg, &s) == AE_ERR_CONFIG);
}

TEST_CASE("critical lambda and decay handles") {
  auto base = small(128, 0.0);
  const ptrdiff_t offsets[] = {1, 2, 3, 4};
  const double lambdas[] = {0.0, 0.3, 0.6, 0.9, 1.2, 1.5};
  ae_critical* c = nullptr;
  REQUIRE(ae_run_critical_lambda(&base, offsets, 4, lambdas, 6, 3, 2, AE_SAMPLING_SHARED, &c) == AE_OK);
  CHECK(ae_critical_count(c) == 4);
  ptrdiff_t j = 0;
  double lc = 0, pk = 0;
  int interior = 0;
  REQUIRE(ae_critical_point(c, 0, &j, &lc, &pk, &interior) == AE_OK);
  CHECK(j == 1);
  CHECK(ae_critical_point(c, 9, &j, &lc, &pk, &interior) == AE_ERR_ARGUMENT);
  ae_critical_destroy(c);
  CHECK(ae_run_critical_lambda(&base, offsets, 4, lambdas, 6, 3, 1, 5, &c) == AE_ERR_CONFIG);

  ae_sweep_config cfg;
  ae_sweep_config_init(&cfg);
  cfg.base = small(200, 0.0);
  const double ls[] = {0.5, 1.0};
  cfg.lambdas = ls;
  cfg.n_lambdas = 2;
  cfg.realizations = 4;
  cfg.max_offset = 10;
  ae_decay* d = nullptr;
  CHECK(ae_run_decay_profile(&cfg, &d) == AE_ERR_CONFIG);
  cfg.observable = AE_OBS_CENTER_PROFILE;
  REQUIRE(ae_run_decay_profile(&cfg, &d) == AE_OK);
  CHECK(ae_decay_count(d) == 2);
  CHECK(ae_decay_lambda(d, 1) == 1.0);
  const ae_fit* lf = ae_decay_log_fit(d, 0);
  REQUIRE(lf != nullptr);
  double slope = 0;
  REQUIRE(ae_fit_param(lf, "slope", &slope) == AE_OK);
  CHECK(slope < 0);
  const auto path = scratch("decay_fits.csv");
  REQUIRE(ae_write_decay_fits_csv(d, nullptr, path.c_str()) == AE_OK);
  const auto text = slurp(path);
  CHECK(text.find("lambda,model,param,value") != std::string::npos);
  CHECK(text.find("decay_length") != std::string::npos);
  ae_decay_destroy(d);
}

TEST_CASE("state files") {
  const auto path = scratch("state.csv");
  {
    std::ofstream out(path);
    out << "re,im\n3,0\n0,4\n";
  }
  ae_state* s = nullptr;
  REQUIRE(ae_state_read_csv(path.c_str(), &s) == AE_OK);
  double amps[4];
  REQUIRE(ae_state_amplitudes(s, amps, 2) == AE_OK);
  CHECK(amps[0] == doctest::Approx(0.6));
  CHECK(amps[3] == doctest::Approx(0.8));
  ae_state_destroy(s);
  {
    std::ofstream out(path);
    out << "re\n0\n0\n";
  }
  CHECK(ae_state_read_csv(path.c_str(), &s) == AE_ERR_NUMERIC);
  {
    std::ofstream out(path);
    out << "re\nabc\n";
  }
  CHECK(ae_state_read_csv(path.c_str(), &s) == AE_ERR_CONFIG);
}

TEST_CASE("config parsing") {
  ae_config* c = nullptr;
  REQUIRE(ae_config_parse("size = 8\n# note\nbc = open\n", &c) == AE_OK);
  CHECK(ae_config_count(c) == 2);
  CHECK(std::string(ae_config_key(c, 1)) == "bc");
  CHECK(std::string(ae_config_value(c, 1)) == "open");
  ae_config_destroy(c);
  CHECK(ae_config_parse("size 8\n", &c) == AE_ERR_CONFIG);
}

TEST_CASE("self check through the callback") {
  struct Tally {
    int total = 0;
    int passed = 0;
  } tally;
  int all = 0;
  REQUIRE(ae_selfcheck(
              [](const char*, int ok, const char*, void* user) {
                auto* t = static_cast<Tally*>(user);
                ++t->total;
                t->passed += ok ? 1 : 0;
              },
              &tally, &all) == AE_OK);
  CHECK(tally.total == 10);
  CHECK(tally.passed == 10);
  CHECK(all == 1);
}
