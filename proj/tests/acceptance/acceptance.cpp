// Acceptance run: one PASS/FAIL line per criterion, INFO lines for the
// measurements behind each verdict. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anderson/dynamics.hpp"
#include "anderson/eigensolver.hpp"
#include "anderson/ensemble.hpp"
#include "anderson/entanglement.hpp"
#include "anderson/error.hpp"
#include "anderson/fitting.hpp"
#include "anderson/io.hpp"
#include "anderson/rng.hpp"
#include "oracle.hpp"

using namespace anderson;

namespace {

int g_failed = 0;

void info(const char* fmt, auto... args) {
  std::printf("  INFO ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

void verdict(int id, bool ok, const std::string& what) {
  std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> out;
  const auto n = static_cast<int>(std::lround((stop - start) / step));
  for (int i = 0; i <= n; ++i) out.push_back(std::round((start + i * step) * 1e12) / 1e12);
  return out;
}

DisorderConfig lattice(std::size_t n, std::uint64_t seed = 20240601, Boundary bc = Boundary::Periodic) {
  DisorderConfig c;
  c.size = n;
  c.seed = seed;
  c.boundary = bc;
  return c;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string body_of(const CsvTable& table) {
  std::ostringstream out;
  RunManifest none;
  write_csv(table, none, out);
  std::string text = out.str(), body;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind("#", 0) != 0) body += line + "\n";
  return body;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  GaussianStream g(1);
  std::mt19937_64 pick(2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + pick() % 63;
    std::vector<Complex> a(n);
    for (auto& z : a) z = Complex(g.next(), g.next());
    const State s(a, State::Normalization::Normalize);
    const double direct = oracle::pair_sum_average(s.amplitudes());
    worst = std::max(worst, std::abs(average_concurrence(s) - direct) / direct);
  }
  const double elapsed = seconds_since(t0);
  info("worst relative difference %.3g over 1000 states, %.3f s", worst, elapsed);
  verdict(1, worst <= 1e-12 && elapsed < 1.0, "closed-form <C> equals the pair sum (1e-12 relative, < 1 s)");
}

void criterion2() {
  bool ok = true;
  for (std::size_t n : {16u, 256u, 1600u}) {
    const auto h = build_hamiltonian(lattice(n));
    const auto gs = ground_state(h);
    const double target = 2.0 / static_cast<double>(n);
    const double c = average_concurrence(gs.state);
    double nn_worst = 0.0;
    for (double v : nn_profile(gs.state, Boundary::Periodic)) nn_worst = std::max(nn_worst, std::abs(v - target));
    PropagatorConfig p;
    p.total_time = 100.0;
    p.record_stride = 20;
    double drift = 0.0;
    for (const auto& s : evolve_record(h, InitialState::w(), p)) drift = std::max(drift, std::abs(s.avg_concurrence - target));
    info("N=%zu: |<C> - 2/N| = %.3g, NN profile max deviation %.3g, W drift to t=100 %.3g", n, std::abs(c - target),
         nn_worst, drift);
    ok = ok && std::abs(c - target) <= 1e-10 && nn_worst <= 1e-10 && drift < 1e-8;
  }
  verdict(2, ok, "clean ring: <C> = 2/N, flat NN profile, W state invariant to t = 100");
}

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 pick(3);
  double worst_vec = 0.0, worst_e = 0.0;
  for (Boundary bc : {Boundary::Open, Boundary::Periodic}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto c = lattice(2 + pick() % 31, pick(), bc);
      c.strength = 0.05 + 3.0 * static_cast<double>(pick() % 1000) / 1000.0;
      const auto h = build_hamiltonian(c);
      const auto gs = ground_state(h);
      const auto spec = oracle::eig(h);
      worst_e = std::max(worst_e, std::abs(gs.energy - spec.values(0)));
      // Align the dense vector's sign with ours through the overlap.
      double overlap = 0.0;
      for (std::size_t i = 0; i < c.size; ++i) overlap += gs.state[i].real() * spec.vectors(static_cast<Eigen::Index>(i), 0);
      const double sign = overlap < 0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < c.size; ++i)
        worst_vec = std::max(worst_vec, std::abs(gs.state[i] - sign * spec.vectors(static_cast<Eigen::Index>(i), 0)));
    }
  }
  const double elapsed = seconds_since(t0);
  info("200 realizations: worst eigenvector entry error %.3g, worst energy error %.3g, %.2f s", worst_vec, worst_e,
       elapsed);
  verdict(3, worst_vec <= 1e-8 && worst_e <= 1e-8 && elapsed < 10.0,
          "ground state matches dense diagonalization for N <= 32 (1e-8, < 10 s)");
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig cfg;
  cfg.base = lattice(1600);
  cfg.lambdas = grid(0.0, 2.0, 0.05);
  cfg.realizations = 50;
  const auto r = run_sweep(cfg);
  int violations = 0, large = 0;
  for (std::size_t k = 0; k + 1 < r.axis.size(); ++k) {
    const double rise = r.mean[k + 1][0] - r.mean[k][0];
    if (rise >= 0.0) {
      ++violations;
      const double se = std::hypot(r.std_error[k][0], r.std_error[k + 1][0]);
      if (rise > se) ++large;
    }
  }
  std::vector<double> ys;
  for (const auto& row : r.mean) ys.push_back(row[0]);
  const auto fit = fit_exp_double(r.axis, ys);
  const double d1 = fit.param("D1"), d2 = fit.param("D2");
  info("shared disorder: %d non-decreasing adjacent pairs (%d beyond one stderr), %.2f s", violations, large,
       seconds_since(t0));
  info("fit B1=%.4g D1=%.4g B2=%.4g D2=%.4g, D2/D1=%.3g, r2=%.6f, converged=%d", fit.param("B1"), d1,
       fit.param("B2"), d2, d2 / d1, fit.r2, fit.converged ? 1 : 0);

  cfg.sampling = DisorderSampling::Independent;
  const auto ind = run_sweep(cfg);
  int ind_violations = 0;
  for (std::size_t k = 0; k + 1 < ind.axis.size(); ++k) ind_violations += ind.mean[k + 1][0] >= ind.mean[k][0] ? 1 : 0;
  info("independent disorder per lambda: %d non-decreasing adjacent pairs", ind_violations);

  verdict(4, violations <= 2 && large == 0 && fit.converged && d1 < d2 && d2 / d1 > 3.0,
          "ground-state <C> decreasing in lambda (N=1600, R=50), double exponential with D2/D1 > 3");
}

void criterion5() {
  SweepConfig cfg;
  cfg.base = lattice(1600);
  cfg.lambdas = grid(0.0, 2.0, 0.1);
  cfg.realizations = 50;
  cfg.observable.kind = ObservableKind::CenterPair;
  cfg.observable.offsets = {1};
  const auto r = run_sweep(cfg);
  std::vector<double> ys;
  for (const auto& row : r.mean) ys.push_back(row[0]);
  const auto peak = find_interior_max(r.axis, ys);
  info("lambda* = %.4f, C* = %.4g, interior = %d", peak.x, peak.y, peak.interior ? 1 : 0);
  verdict(5, peak.interior && peak.x >= 0.4 && peak.x <= 1.2, "C(i0, i0+1) peaks at an interior lambda* in [0.4, 1.2]");
}

void criterion6() {
  const std::vector<std::ptrdiff_t> offsets{1, 2, 3, 4, 5, 6};
  const auto res = run_critical_lambda(lattice(1600), offsets, grid(0.0, 2.0, 0.1), 50);
  std::string list;
  for (const auto& p : res.points) list += std::to_string(p.lambda_c).substr(0, 6) + (p.interior ? " " : "* ");
  info("lambda_c(j), j=1..6: %s(* = grid edge)", list.c_str());
  // A rise of at most one grid step is within the resolution of the estimate.
  int exceptions = 0, large = 0;
  for (std::size_t m = 0; m + 1 < res.points.size(); ++m) {
    const double rise = res.points[m + 1].lambda_c - res.points[m].lambda_c;
    if (rise > 0.0) {
      ++exceptions;
      if (rise > 0.1 + 1e-12) ++large;
    }
  }
  const bool fitted = res.fit.has_value();
  if (fitted)
    info("fit B=%.4g D=%.4g A=%.4g r2=%.4f", res.fit->param("B"), res.fit->param("D"), res.fit->param("A"), res.fit->r2);
  verdict(6, exceptions <= 1 && large == 0 && fitted && res.fit->r2 > 0.8,
          "lambda_c(j) nonincreasing for j = 1..6, exponential fit r2 > 0.8");
}

void criterion7() {
  SweepConfig cfg;
  cfg.base = lattice(1600);
  cfg.lambdas = {0.5, 1.0};
  cfg.realizations = 50;
  cfg.observable.kind = ObservableKind::CenterProfile;
  cfg.observable.max_offset = 40;
  cfg.keep_samples = true;
  const auto profiles = fold_center_profiles(run_sweep(cfg));
  bool ok = true;
  std::vector<double> lengths;
  for (const auto& p : profiles) {
    const auto fit = log_decay_fit(p);
    const double length = -1.0 / fit.param("slope");
    lengths.push_back(length);
    std::size_t used = 0;
    for (double c : p.mean_concurrence) used += c > 1e-8 ? 1 : 0;
    info("lambda=%.1f: ln C slope %.4f, decay length %.4f, r2 %.5f over %zu distances", p.lambda, fit.param("slope"),
         length, fit.r2, used);
    ok = ok && fit.r2 > 0.9;
  }
  verdict(7, ok && lengths[1] < lengths[0], "ln C_j linear in |j| (r2 > 0.9), decay length shrinks from 0.5 to 1.0");
}

void criterion8() {
  SweepConfig cfg;
  cfg.base = lattice(1600);
  cfg.lambdas = grid(0.2, 2.0, 0.2);
  cfg.realizations = 50;
  const auto avg = run_sweep(cfg);
  cfg.observable.kind = ObservableKind::LocalizationLength;
  const auto loc = run_sweep(cfg);
  std::vector<double> xi2, c;
  std::size_t failures = 0;
  for (std::size_t k = 0; k < cfg.lambdas.size(); ++k) {
    xi2.push_back(loc.mean[k][1]);
    c.push_back(avg.mean[k][0]);
    failures += loc.failures[k];
  }
  const auto fit = linear_fit(xi2, c);
  info("<C> vs xi^2: slope %.4g, intercept %.4g, r2 %.4f (%zu failed localization fits)", fit.param("slope"),
       fit.param("intercept"), fit.r2, failures);
  verdict(8, fit.param("slope") > 0.0 && fit.r2 > 0.8, "<C> grows linearly with xi^2 (positive slope, r2 > 0.8)");
}

void criterion9() {
  bool ok = true;

  // Norm drift over 1e4 steps.
  {
    auto c = lattice(1600);
    c.strength = 1.0;
    const auto h = build_hamiltonian(c);
    const CrankNicolson cn(h, 0.05);
    auto psi = InitialState::delta_at_middle().materialize(1600);
    std::vector<Complex> v(psi.amplitudes().begin(), psi.amplitudes().end());
    for (int k = 0; k < 10000; ++k) cn.advance(v);
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    const double drift = std::abs(std::sqrt(norm) - 1.0);
    info("9a norm drift after 1e4 steps at N=1600: %.3g", drift);
    ok = ok && drift < 1e-8;
  }

  // Dense propagator agreement, N <= 32, t <= 50.
  {
    double worst_fine = 0.0, worst_default = 0.0;
    for (Boundary bc : {Boundary::Open, Boundary::Periodic}) {
      for (std::size_t n : {8u, 16u, 32u}) {
        auto c = lattice(n, 7 + n, bc);
        c.strength = 1.0;
        const auto h = build_hamiltonian(c);
        const State s = State::delta(n, n / 2 - 1);
        const std::vector<Complex> start(s.amplitudes().begin(), s.amplitudes().end());
        for (double dt : {5e-4, 0.05}) {
          const CrankNicolson cn(h, dt);
          auto psi = start;
          const int steps = static_cast<int>(std::lround(50.0 / dt));
          const int every = static_cast<int>(std::lround(10.0 / dt));
          double worst = 0.0;
          for (int k = 1; k <= steps; ++k) {
            cn.advance(psi);
            if (k % every == 0) worst = std::max(worst, max_diff(psi, oracle::propagate(h, start, k * dt)));
          }
          (dt < 0.01 ? worst_fine : worst_default) = std::max(dt < 0.01 ? worst_fine : worst_default, worst);
        }
      }
    }
    info("9b max amplitude error vs exp(-iHt), t <= 50: %.3g at dt=5e-4, %.3g at dt=0.05", worst_fine, worst_default);
    ok = ok && worst_fine < 1e-4;
  }

  // Orderings at N = 1600.
  const std::vector<double> lambdas{0.0, 0.05, 0.1, 0.5, 1.0};
  const std::size_t reps = 20;
  SweepConfig cfg;
  cfg.base = lattice(1600);
  cfg.lambdas = lambdas;
  cfg.realizations = reps;
  cfg.observable.kind = ObservableKind::Dynamics;
  cfg.observable.propagator.record_stride = 20;
  const auto t0 = std::chrono::steady_clock::now();
  cfg.observable.init = InitialState::delta_at_middle();
  const auto delta = run_sweep(cfg);
  cfg.observable.init = InitialState::w();
  const auto w = run_sweep(cfg);
  info("9c/9d %zu realizations per lambda and initial state, %.1f s", reps, seconds_since(t0));

  const std::size_t last = delta.columns.size() - 1;
  bool final_order = true;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    info("lambda=%.2f: delta final <C> %.6g (se %.2g), W final <C> %.6g (se %.2g)", lambdas[k], delta.mean[k][last],
         delta.std_error[k][last], w.mean[k][last], w.std_error[k][last]);
    if (k > 0 && !(delta.mean[k][last] < delta.mean[k - 1][last])) final_order = false;
  }
  info("9c delta-init final <C> decreasing across lambda: %s", final_order ? "yes" : "no");
  ok = ok && final_order;

  // W-init: nonincreasing in time for lambda > 0. A rise counts when it exceeds
  // the combined standard error of the two samples.
  bool monotone = true;
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    int rises = 0;
    double worst = 0.0;
    for (std::size_t m = 0; m + 1 < w.columns.size(); ++m) {
      const double rise = w.mean[k][m + 1] - w.mean[k][m];
      const double se = std::hypot(w.std_error[k][m], w.std_error[k][m + 1]);
      if (rise > se) {
        ++rises;
        worst = std::max(worst, rise / se);
      }
    }
    info("lambda=%.2f: W-init <C>(t) rises beyond one stderr at %d of %zu steps (worst %.2f stderr)", lambdas[k],
         rises, w.columns.size() - 1, worst);
    if (rises > 0) monotone = false;
  }
  info("9d W-init <C> nonincreasing in time for lambda > 0: %s", monotone ? "yes" : "no");
  ok = ok && monotone;

  // Larger lambda decays faster at a fixed early time (t = 5).
  std::size_t early = 0;
  while (early < w.columns.size() && w.columns[early] < 5.0 - 1e-9) ++early;
  bool faster = true;
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (!(w.mean[k][early] < w.mean[k - 1][early])) faster = false;
  info("9e W-init <C> at t=%.1f decreasing across lambda: %s", w.columns[early], faster ? "yes" : "no");
  ok = ok && faster;

  bool residue = true;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    if (!(w.mean[k][last] >= delta.mean[k][last])) residue = false;
  info("9f W-init residue >= delta-init residue per lambda: %s", residue ? "yes" : "no");
  ok = ok && residue;

  verdict(9, ok, "dynamics: unitarity, dense-propagator agreement and the time-evolution orderings");
}

void criterion10() {
  bool same = true;
  auto check = [&](SweepConfig cfg, const char* name) {
    cfg.workers = 1;
    const std::string one = body_of(sweep_table(run_sweep(cfg)));
    for (std::size_t w : {2u, 4u, 7u}) {
      cfg.workers = w;
      if (body_of(sweep_table(run_sweep(cfg))) != one) {
        info("%s differs with %zu workers", name, w);
        same = false;
      }
    }
  };
  SweepConfig cfg;
  cfg.base = lattice(1600);
  cfg.lambdas = grid(0.0, 2.0, 0.1);
  cfg.realizations = 10;
  check(cfg, "ground-state <C>");
  cfg.observable.kind = ObservableKind::CenterPair;
  cfg.observable.offsets = {1, 2, 3};
  check(cfg, "center pair");
  cfg.sampling = DisorderSampling::Independent;
  check(cfg, "center pair, independent sampling");
  cfg.base = lattice(200);
  cfg.lambdas = {0.1, 1.0};
  cfg.realizations = 3;
  cfg.observable.kind = ObservableKind::Dynamics;
  cfg.observable.propagator.total_time = 20.0;
  check(cfg, "dynamics");
  verdict(10, same, "CSV bodies identical for 1, 2, 4 and 7 workers");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                          criterion6, criterion7, criterion8, criterion9, criterion10};
  for (int i = 0; i < 10; ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(i + 1, false, std::string("raised: ") + e.what());
    }
  }
  std::printf("%d of 10 criteria failed, %.1f s\n", g_failed, seconds_since(t0));
  return g_failed == 0 ? 0 : 1;
}
