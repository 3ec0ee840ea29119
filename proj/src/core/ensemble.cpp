#include "anderson/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "anderson/eigensolver.hpp"
#include "anderson/entanglement.hpp"
#include "anderson/error.hpp"
#include "anderson/localization.hpp"
#include "anderson/rng.hpp"

namespace anderson {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellOutcome {
  std::vector<double> values;
  bool ok = false;
  ErrorKind kind = ErrorKind::Numerical;
  std::string message;
};

// Welford accumulation in a fixed order; identical inputs give a mean equal
// to the input and zero spread.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(std::max(0.0, m2) / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  }
};

}  // namespace

std::string to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::AvgConcurrence: return "avg-concurrence";
    case ObservableKind::NNProfile: return "nn-profile";
    case ObservableKind::CenterPair: return "center-pair";
    case ObservableKind::CenterProfile: return "center-profile";
    case ObservableKind::LocalizationLength: return "localization-length";
    case ObservableKind::Dynamics: return "dynamics";
  }
  return "unknown";
}

std::string to_string(DisorderSampling sampling) {
  return sampling == DisorderSampling::Shared ? "shared" : "independent";
}

DisorderSampling parse_sampling(std::string_view text) {
  if (text == "shared") return DisorderSampling::Shared;
  if (text == "independent") return DisorderSampling::Independent;
  throw Error(ErrorKind::InvalidConfig, "unknown disorder sampling '" + std::string(text) + "'");
}

std::uint64_t SweepConfig::cell_seed(std::size_t lambda_index, std::size_t realization) const {
  return child_seed(base.seed, sampling == DisorderSampling::Shared ? 0 : lambda_index, realization);
}

void SweepConfig::validate() const {
  DisorderConfig probe = base;
  probe.strength = 0.0;
  probe.validate();
  if (lambdas.empty()) throw Error(ErrorKind::InvalidConfig, "lambda grid is empty");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] >= 0.0) || !std::isfinite(lambdas[k]))
      throw Error(ErrorKind::InvalidConfig, "lambda values must be finite and nonnegative");
    if (k > 0 && !(lambdas[k] > lambdas[k - 1]))
      throw Error(ErrorKind::InvalidConfig, "lambda grid must be strictly increasing");
  }
  if (realizations == 0) throw Error(ErrorKind::InvalidConfig, "need at least one realization");
  if (workers == 0) throw Error(ErrorKind::InvalidConfig, "need at least one worker");
  switch (observable.kind) {
    case ObservableKind::CenterPair:
      if (observable.offsets.empty()) throw Error(ErrorKind::InvalidConfig, "no offsets requested");
      for (auto j : observable.offsets) {
        if (j == 0) throw Error(ErrorKind::InvalidConfig, "offset 0 is the center itself");
        if (static_cast<std::size_t>(std::abs(j)) >= base.size)
          throw Error(ErrorKind::InvalidConfig, "offset larger than the lattice");
      }
      break;
    case ObservableKind::CenterProfile:
      if (observable.max_offset == 0) throw Error(ErrorKind::InvalidConfig, "max offset must be positive");
      if (base.boundary == Boundary::Periodic ? 2 * observable.max_offset >= base.size
                                              : observable.max_offset >= base.size)
        throw Error(ErrorKind::InvalidConfig, "max offset too large for the lattice");
      break;
    case ObservableKind::Dynamics:
      observable.propagator.validate();
      (void)observable.init.materialize(base.size);
      break;
    default:
      break;
  }
}

std::vector<double> evaluate_observable(const Observable& observable, const DisorderConfig& realization) {
  const Hamiltonian h = build_hamiltonian(realization);
  const Boundary bc = realization.boundary;
  if (observable.kind == ObservableKind::Dynamics) {
    const auto series = evolve_record(h, observable.init, observable.propagator);
    std::vector<double> values;
    values.reserve(series.size());
    for (const auto& s : series) values.push_back(s.avg_concurrence);
    return values;
  }

  const EigenPair gs = ground_state(h);
  const State& psi = gs.state;
  switch (observable.kind) {
    case ObservableKind::AvgConcurrence:
      return {average_concurrence(psi)};
    case ObservableKind::NNProfile:
      return nn_profile(psi, bc);
    case ObservableKind::CenterPair: {
      const std::size_t center = localization_center(psi);
      std::vector<double> values;
      for (auto j : observable.offsets) {
        const std::size_t site = offset_site(psi.size(), center, j, bc);
        if (site >= psi.size())
          throw Error(ErrorKind::OutOfRange, "offset " + std::to_string(j) + " falls off the open chain");
        values.push_back(concurrence_pair(psi, center, site));
      }
      return values;
    }
    case ObservableKind::CenterProfile: {
      const std::size_t center = localization_center(psi);
      const auto jmax = static_cast<std::ptrdiff_t>(observable.max_offset);
      std::vector<double> values;
      values.reserve(2 * observable.max_offset);
      for (std::ptrdiff_t j = -jmax; j <= jmax; ++j) {
        if (j == 0) continue;
        const std::size_t site = offset_site(psi.size(), center, j, bc);
        if (site >= psi.size())
          throw Error(ErrorKind::OutOfRange, "profile window around site " + std::to_string(center + 1) +
                                                 " falls off the open chain");
        values.push_back(concurrence_pair(psi, center, site));
      }
      return values;
    }
    case ObservableKind::LocalizationLength: {
      const LocalizationReport rep = localization_length(psi, bc);
      return {rep.length, rep.length * rep.length, rep.participation_ratio, rep.fit_r2};
    }
    case ObservableKind::Dynamics:
      break;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown observable");
}

void describe_columns(const Observable& observable, const DisorderConfig& base, SweepResult& result) {
  result.columns.clear();
  result.column_labels.clear();
  switch (observable.kind) {
    case ObservableKind::AvgConcurrence:
      result.column_name = "quantity";
      result.columns = {0.0};
      result.column_labels = {"avg_concurrence"};
      break;
    case ObservableKind::NNProfile: {
      result.column_name = "site";
      const std::size_t count = base.boundary == Boundary::Periodic ? base.size : base.size - 1;
      for (std::size_t i = 0; i < count; ++i) result.columns.push_back(static_cast<double>(i + 1));
      break;
    }
    case ObservableKind::CenterPair:
      result.column_name = "offset";
      for (auto j : observable.offsets) result.columns.push_back(static_cast<double>(j));
      break;
    case ObservableKind::CenterProfile: {
      result.column_name = "offset";
      const auto jmax = static_cast<std::ptrdiff_t>(observable.max_offset);
      for (std::ptrdiff_t j = -jmax; j <= jmax; ++j) {
        if (j != 0) result.columns.push_back(static_cast<double>(j));
      }
      break;
    }
    case ObservableKind::LocalizationLength:
      result.column_name = "quantity";
      result.columns = {0.0, 1.0, 2.0, 3.0};
      result.column_labels = {"xi", "xi_squared", "participation_ratio", "fit_r2"};
      break;
    case ObservableKind::Dynamics: {
      result.column_name = "time";
      const auto& p = observable.propagator;
      const std::size_t steps = p.steps();
      for (std::size_t k = 0; k <= steps; k += p.record_stride) result.columns.push_back(static_cast<double>(k) * p.dt);
      if (steps % p.record_stride != 0) result.columns.push_back(static_cast<double>(steps) * p.dt);
      break;
    }
  }
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t n_lambda = config.lambdas.size();
  const std::size_t reps = config.realizations;
  const std::size_t cells = n_lambda * reps;

  SweepResult result;
  result.config = config;
  result.axis = config.lambdas;
  describe_columns(config.observable, config.base, result);
  const std::size_t n_col = result.columns.size();

  std::vector<CellOutcome> outcomes(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells) return;
      const std::size_t k = c / reps;
      const std::size_t r = c % reps;
      DisorderConfig cell = config.base;
      cell.strength = config.lambdas[k];
      cell.seed = config.cell_seed(k, r);
      CellOutcome& out = outcomes[c];
      try {
        out.values = evaluate_observable(config.observable, cell);
        if (out.values.size() != n_col) throw Error(ErrorKind::Dimension, "observable returned the wrong shape");
        out.ok = true;
      } catch (const Error& e) {
        out.kind = e.kind();
        out.message = e.what();
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(cells);
        return;
      }
    }
  };

  const std::size_t n_threads = std::min(config.workers, cells);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  result.mean.assign(n_lambda, std::vector<double>(n_col, kNaN));
  result.std_error.assign(n_lambda, std::vector<double>(n_col, kNaN));
  result.successes.assign(n_lambda, 0);
  result.failures.assign(n_lambda, 0);
  result.failure_notes.assign(n_lambda, {});
  if (config.keep_samples) result.samples.assign(n_lambda, {});

  for (std::size_t k = 0; k < n_lambda; ++k) {
    std::vector<RunningStats> stats(n_col);
    const CellOutcome* first_failure = nullptr;
    for (std::size_t r = 0; r < reps; ++r) {
      const CellOutcome& out = outcomes[k * reps + r];
      if (config.keep_samples) result.samples[k].push_back(out.ok ? out.values : std::vector<double>(n_col, kNaN));
      if (!out.ok) {
        ++result.failures[k];
        if (!first_failure) first_failure = &out;
        continue;
      }
      ++result.successes[k];
      for (std::size_t m = 0; m < n_col; ++m) stats[m].add(out.values[m]);
    }
    if (first_failure) result.failure_notes[k] = first_failure->message;
    if (result.successes[k] == 0) {
      throw Error(first_failure->kind, "all " + std::to_string(reps) + " realizations failed at lambda=" +
                                           std::to_string(config.lambdas[k]) + ": " + first_failure->message);
    }
    for (std::size_t m = 0; m < n_col; ++m) {
      result.mean[k][m] = stats[m].mean;
      result.std_error[k][m] = stats[m].std_error();
    }
  }
  return result;
}

CriticalLambdaResult critical_lambda_from_curves(const std::vector<std::ptrdiff_t>& offsets,
                                                 const std::vector<double>& lambdas,
                                                 const std::vector<std::vector<double>>& curves) {
  if (curves.size() != lambdas.size()) throw Error(ErrorKind::Dimension, "one curve row per lambda expected");
  CriticalLambdaResult result;
  std::vector<double> js, lcs;
  for (std::size_t m = 0; m < offsets.size(); ++m) {
    std::vector<double> ys(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      if (curves[k].size() != offsets.size()) throw Error(ErrorKind::Dimension, "one curve column per offset expected");
      ys[k] = curves[k][m];
    }
    const PeakEstimate peak = locate_peak(lambdas, ys);
    result.points.push_back({offsets[m], peak.x, peak.y, peak.interior});
    js.push_back(static_cast<double>(offsets[m]));
    lcs.push_back(peak.x);
  }
  if (js.size() >= 4) {
    try {
      result.fit = fit_exp_single(js, lcs);
    } catch (const Error&) {
      result.fit.reset();
    }
  }
  return result;
}

CriticalLambdaResult run_critical_lambda(const DisorderConfig& base, const std::vector<std::ptrdiff_t>& offsets,
                                         const std::vector<double>& lambdas, std::size_t realizations,
                                         std::size_t workers, DisorderSampling sampling) {
  for (auto j : offsets) {
    if (j < 1) throw Error(ErrorKind::InvalidConfig, "critical-lambda offsets must be >= 1");
  }
  SweepConfig cfg;
  cfg.base = base;
  cfg.lambdas = lambdas;
  cfg.realizations = realizations;
  cfg.workers = workers;
  cfg.sampling = sampling;
  cfg.observable.kind = ObservableKind::CenterPair;
  cfg.observable.offsets = offsets;
  SweepResult sweep = run_sweep(cfg);
  CriticalLambdaResult result = critical_lambda_from_curves(offsets, lambdas, sweep.mean);
  result.curves = std::move(sweep);
  return result;
}

std::vector<DecayProfile> fold_center_profiles(const SweepResult& sweep) {
  if (sweep.config.observable.kind != ObservableKind::CenterProfile)
    throw Error(ErrorKind::InvalidConfig, "folding needs a center-profile sweep");
  if (sweep.samples.size() != sweep.axis.size())
    throw Error(ErrorKind::InvalidConfig, "folding needs a sweep run with keep_samples");
  const auto jmax = static_cast<std::ptrdiff_t>(sweep.config.observable.max_offset);
  // Column of offset j in the signed layout [-jmax..-1, 1..jmax].
  auto column = [jmax](std::ptrdiff_t j) {
    return static_cast<std::size_t>(j < 0 ? j + jmax : j + jmax - 1);
  };

  std::vector<DecayProfile> out;
  for (std::size_t k = 0; k < sweep.axis.size(); ++k) {
    DecayProfile p;
    p.lambda = sweep.axis[k];
    for (std::ptrdiff_t d = 1; d <= jmax; ++d) {
      RunningStats lin, logs;
      bool hit_zero = false;
      for (const auto& row : sweep.samples[k]) {
        const double left = row[column(-d)], right = row[column(d)];
        if (std::isnan(left) || std::isnan(right)) continue;
        const double folded = 0.5 * (left + right);
        lin.add(folded);
        if (folded > 0.0) {
          logs.add(std::log(folded));
        } else {
          hit_zero = true;
        }
      }
      p.distance.push_back(static_cast<double>(d));
      p.mean_concurrence.push_back(lin.n ? lin.mean : kNaN);
      p.std_error.push_back(lin.std_error());
      p.mean_log_concurrence.push_back(hit_zero ? -std::numeric_limits<double>::infinity()
                                                : (logs.n ? logs.mean : kNaN));
      p.counts.push_back(lin.n);
    }
    out.push_back(std::move(p));
  }
  return out;
}

FitResult log_decay_fit(const DecayProfile& profile, double threshold) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < profile.distance.size(); ++i) {
    if (profile.mean_concurrence[i] > threshold && std::isfinite(profile.mean_log_concurrence[i])) {
      xs.push_back(profile.distance[i]);
      ys.push_back(profile.mean_log_concurrence[i]);
    }
  }
  return linear_fit(xs, ys);
}

}  // namespace anderson
