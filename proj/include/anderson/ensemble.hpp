#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anderson/dynamics.hpp"
#include "anderson/fitting.hpp"
#include "anderson/lattice.hpp"

namespace anderson {

enum class ObservableKind {
  AvgConcurrence,      // <C> of the ground state
  NNProfile,           // nearest-neighbour concurrences of the ground state
  CenterPair,          // C(i0, i0 + j) for each requested offset j
  CenterProfile,       // C(i0, i0 + j) for j in [-max_offset, max_offset] \ {0}
  LocalizationLength,  // xi, xi^2, participation ratio, fit r^2
  Dynamics,            // <C>(t) of an evolved initial state
};

std::string to_string(ObservableKind kind);

struct Observable {
  ObservableKind kind = ObservableKind::AvgConcurrence;
  std::vector<std::ptrdiff_t> offsets{1};
  std::size_t max_offset = 40;
  PropagatorConfig propagator;
  InitialState init = InitialState::delta_at_middle();
};

// How disorder seeds are assigned to (lambda_k, realization r) cells.
// Shared: realization r draws eps from child_seed(master, 0, r) at every
// lambda, so V_i = V0 + lambda eps_i scales one fixed pattern along the grid.
// Independent: each cell draws from child_seed(master, k, r).
enum class DisorderSampling { Shared, Independent };

std::string to_string(DisorderSampling sampling);
DisorderSampling parse_sampling(std::string_view text);

struct SweepConfig {
  DisorderConfig base;  // base.seed is the master seed; base.strength is ignored
  std::vector<double> lambdas;
  std::size_t realizations = 50;
  Observable observable;
  std::size_t workers = 1;
  DisorderSampling sampling = DisorderSampling::Shared;
  bool keep_samples = false;

  std::uint64_t cell_seed(std::size_t lambda_index, std::size_t realization) const;

  void validate() const;
};

struct SweepResult {
  SweepConfig config;
  std::vector<double> axis;  // lambda grid
  std::string column_name;   // "quantity", "site", "offset" or "time"
  std::vector<double> columns;
  std::vector<std::string> column_labels;
  std::vector<std::vector<double>> mean;       // [lambda][column]
  std::vector<std::vector<double>> std_error;  // sample stdev / sqrt(successes)
  std::vector<std::size_t> successes;
  std::vector<std::size_t> failures;
  std::vector<std::string> failure_notes;  // first failure message per lambda, empty if none
  // [lambda][realization][column], NaN rows for failed cells; only with keep_samples.
  std::vector<std::vector<std::vector<double>>> samples;
};

/// Observable of a single disorder realization. This is the unit of work of
/// run_sweep; exposed so serial reference loops can be built in tests.
std::vector<double> evaluate_observable(const Observable& observable, const DisorderConfig& realization);

/// Secondary axis (column values and labels) of an observable on a lattice.
void describe_columns(const Observable& observable, const DisorderConfig& base, SweepResult& result);

/// Runs every (lambda_k, realization r) cell with disorder seed
/// config.cell_seed(k, r) on a pool of `workers` threads and aggregates in
/// realization order, so the result does not depend on scheduling. Cells that
/// throw anderson::Error are excluded and counted; a lambda with no
/// successful cell fails the sweep.
SweepResult run_sweep(const SweepConfig& config);

struct CriticalPoint {
  std::ptrdiff_t offset = 0;
  double lambda_c = 0.0;
  double peak_value = 0.0;
  bool interior = false;
};

struct CriticalLambdaResult {
  std::vector<CriticalPoint> points;
  std::optional<FitResult> fit;  // lambda_c vs offset, single exponential
  std::optional<SweepResult> curves;
};

/// lambda_c(j) = peak of the ensemble-mean C(i0, i0 + j) over the lambda grid
/// for each offset, then a single-exponential fit of lambda_c against j.
CriticalLambdaResult run_critical_lambda(const DisorderConfig& base, const std::vector<std::ptrdiff_t>& offsets,
                                         const std::vector<double>& lambdas, std::size_t realizations,
                                         std::size_t workers = 1,
                                         DisorderSampling sampling = DisorderSampling::Shared);

// curves[k][m] is the mean concurrence at lambdas[k] for offsets[m].
CriticalLambdaResult critical_lambda_from_curves(const std::vector<std::ptrdiff_t>& offsets,
                                                 const std::vector<double>& lambdas,
                                                 const std::vector<std::vector<double>>& curves);

struct DecayProfile {
  double lambda = 0.0;
  std::vector<double> distance;
  std::vector<double> mean_concurrence;
  std::vector<double> std_error;
  std::vector<double> mean_log_concurrence;
  std::vector<std::size_t> counts;
};

/// Folds a CenterProfile sweep (run with keep_samples) onto |j|: each
/// realization contributes (C_{+d} + C_{-d}) / 2 where both sides exist.
std::vector<DecayProfile> fold_center_profiles(const SweepResult& sweep);

/// Linear fit of mean ln C against distance over the distances whose mean C
/// exceeds `threshold`. The decay length is -1 / slope.
FitResult log_decay_fit(const DecayProfile& profile, double threshold = 1e-8);

}  // namespace anderson
