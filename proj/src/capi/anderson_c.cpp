#include "anderson/anderson.h"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <new>
#include <optional>
#include <stdexcept>
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
#include "anderson/lattice.hpp"
#include "anderson/localization.hpp"
#include "anderson/selfcheck.hpp"

namespace a = anderson;

struct ae_hamiltonian {
  a::Hamiltonian h;
};
struct ae_state {
  a::State s;
};
struct ae_series {
  std::vector<a::TimeSample> samples;
};
struct ae_fit {
  a::FitResult f;
};
struct ae_sweep {
  a::SweepResult r;
};
struct ae_critical {
  a::CriticalLambdaResult r;
  std::optional<ae_fit> fit;
};
struct ae_decay {
  std::vector<a::DecayProfile> profiles;
  std::vector<std::optional<ae_fit>> fits;
  std::vector<std::optional<ae_fit>> log_fits;
};
struct ae_manifest {
  a::RunManifest m;
};
struct ae_config {
  std::vector<std::pair<std::string, std::string>> entries;
};

namespace {

thread_local std::string g_message;
thread_local std::string g_kind;

ae_status fail(ae_status code, const std::string& kind, const std::string& message) {
  g_kind = kind;
  g_message = message;
  return code;
}

ae_status status_of(a::ErrorKind kind) {
  switch (kind) {
    case a::ErrorKind::InvalidConfig:
    case a::ErrorKind::Dimension:
    case a::ErrorKind::OutOfRange:
    case a::ErrorKind::DegenerateInput:
      return AE_ERR_CONFIG;
    case a::ErrorKind::Convergence:
    case a::ErrorKind::Numerical:
    case a::ErrorKind::InsufficientData:
    case a::ErrorKind::NonpositiveSlope:
      return AE_ERR_NUMERIC;
    case a::ErrorKind::Io:
      return AE_ERR_IO;
  }
  return AE_ERR_INTERNAL;
}

// Caller-side mistakes detected inside a guarded body, e.g. a short buffer.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class F>
ae_status guarded(F&& body) {
  try {
    body();
    return AE_OK;
  } catch (const ArgumentError& e) {
    return fail(AE_ERR_ARGUMENT, "argument", e.what());
  } catch (const a::Error& e) {
    return fail(status_of(e.kind()), a::to_string(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(AE_ERR_INTERNAL, "internal", "out of memory");
  } catch (const std::exception& e) {
    return fail(AE_ERR_INTERNAL, "internal", e.what());
  }
}

ae_status null_arg(const char* what) { return fail(AE_ERR_ARGUMENT, "argument", std::string(what) + " is null"); }

a::Boundary to_boundary(int bc) {
  if (bc == AE_BC_OPEN) return a::Boundary::Open;
  if (bc == AE_BC_PERIODIC) return a::Boundary::Periodic;
  throw a::Error(a::ErrorKind::InvalidConfig, "unknown boundary code " + std::to_string(bc));
}

a::DisorderConfig to_config(const ae_disorder_config& c) {
  a::DisorderConfig out;
  out.size = c.size;
  out.hopping = c.hopping;
  out.offset = c.offset;
  out.strength = c.strength;
  out.seed = c.seed;
  out.boundary = to_boundary(c.boundary);
  return out;
}

a::PropagatorConfig to_propagator(const ae_propagator_config& c) {
  a::PropagatorConfig out;
  out.dt = c.dt;
  out.total_time = c.total_time;
  out.record_stride = c.record_stride;
  return out;
}

a::InitialState to_initial(const ae_initial_state& init) {
  switch (init.kind) {
    case AE_INIT_DELTA:
      return init.use_middle_site ? a::InitialState::delta_at_middle() : a::InitialState::delta(init.site);
    case AE_INIT_W:
      return a::InitialState::w();
    case AE_INIT_CUSTOM:
      if (!init.custom) throw a::Error(a::ErrorKind::InvalidConfig, "custom initial state without a state");
      return a::InitialState::custom(init.custom->s);
  }
  throw a::Error(a::ErrorKind::InvalidConfig, "unknown initial-state kind " + std::to_string(init.kind));
}

a::ObservableKind to_observable(int kind) {
  switch (kind) {
    case AE_OBS_AVG_CONCURRENCE: return a::ObservableKind::AvgConcurrence;
    case AE_OBS_NN_PROFILE: return a::ObservableKind::NNProfile;
    case AE_OBS_CENTER_PAIR: return a::ObservableKind::CenterPair;
    case AE_OBS_CENTER_PROFILE: return a::ObservableKind::CenterProfile;
    case AE_OBS_LOCALIZATION_LENGTH: return a::ObservableKind::LocalizationLength;
    case AE_OBS_DYNAMICS: return a::ObservableKind::Dynamics;
  }
  throw a::Error(a::ErrorKind::InvalidConfig, "unknown observable code " + std::to_string(kind));
}

a::DisorderSampling to_sampling(int sampling) {
  if (sampling == AE_SAMPLING_SHARED) return a::DisorderSampling::Shared;
  if (sampling == AE_SAMPLING_INDEPENDENT) return a::DisorderSampling::Independent;
  throw a::Error(a::ErrorKind::InvalidConfig, "unknown sampling code " + std::to_string(sampling));
}

a::SweepConfig to_sweep(const ae_sweep_config& c) {
  a::SweepConfig out;
  out.base = to_config(c.base);
  if (c.n_lambdas && !c.lambdas) throw a::Error(a::ErrorKind::InvalidConfig, "lambda grid pointer is null");
  out.lambdas.assign(c.lambdas, c.lambdas + c.n_lambdas);
  out.realizations = c.realizations;
  out.workers = c.workers;
  out.sampling = to_sampling(c.sampling);
  out.observable.kind = to_observable(c.observable);
  if (c.n_offsets) {
    if (!c.offsets) throw a::Error(a::ErrorKind::InvalidConfig, "offset list pointer is null");
    out.observable.offsets.assign(c.offsets, c.offsets + c.n_offsets);
  }
  out.observable.max_offset = c.max_offset;
  out.observable.propagator = to_propagator(c.propagator);
  out.observable.init = to_initial(c.init);
  return out;
}

std::vector<a::Complex> to_complex(const double* interleaved, std::size_t n) {
  std::vector<a::Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a::Complex(interleaved[2 * i], interleaved[2 * i + 1]);
  return out;
}

void from_complex(std::span<const a::Complex> v, double* out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
}

std::optional<ae_fit> try_fit(const std::function<a::FitResult()>& fn) {
  try {
    return ae_fit{fn()};
  } catch (const a::Error&) {
    return std::nullopt;
  }
}

a::RunManifest manifest_or_default(const ae_manifest* m, const char* command) {
  if (m) return m->m;
  a::RunManifest out;
  out.command = command;
  return out;
}

template <class Table>
ae_status write_table(const Table& table, const ae_manifest* m, const char* command, const char* path) {
  if (!path) return null_arg("path");
  return guarded([&] { a::write_csv(table, manifest_or_default(m, command), std::string(path)); });
}

}  // namespace

extern "C" {

const char* ae_version(void) {
  static const std::string v = a::version_string();
  return v.c_str();
}

const char* ae_last_error(void) { return g_message.c_str(); }
const char* ae_last_error_kind(void) { return g_kind.c_str(); }

void ae_disorder_config_init(ae_disorder_config* cfg) {
  if (!cfg) return;
  const a::DisorderConfig d;
  cfg->size = d.size;
  cfg->hopping = d.hopping;
  cfg->offset = d.offset;
  cfg->strength = d.strength;
  cfg->seed = d.seed;
  cfg->boundary = AE_BC_PERIODIC;
}

ae_status ae_sample_disorder(const ae_disorder_config* cfg, double* out, size_t len) {
  if (!cfg) return null_arg("config");
  if (!out) return null_arg("output buffer");
  return guarded([&] {
    const auto v = a::sample_disorder(to_config(*cfg));
    if (len < v.size()) throw ArgumentError("output buffer shorter than the lattice");
    std::copy(v.begin(), v.end(), out);
  });
}

ae_status ae_hamiltonian_create(const ae_disorder_config* cfg, ae_hamiltonian** out) {
  if (!cfg) return null_arg("config");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_hamiltonian{a::build_hamiltonian(to_config(*cfg))}; });
}

ae_status ae_hamiltonian_from_potentials(const double* potentials, size_t n, double hopping, int boundary,
                                         ae_hamiltonian** out) {
  if (!potentials) return null_arg("potentials");
  if (!out) return null_arg("output handle");
  return guarded([&] {
    *out = new ae_hamiltonian{a::Hamiltonian(std::vector<double>(potentials, potentials + n), hopping,
                                             to_boundary(boundary))};
  });
}

void ae_hamiltonian_destroy(ae_hamiltonian* h) { delete h; }

size_t ae_hamiltonian_size(const ae_hamiltonian* h) { return h ? h->h.size() : 0; }

ae_status ae_hamiltonian_potentials(const ae_hamiltonian* h, double* out, size_t len) {
  if (!h) return null_arg("hamiltonian");
  if (!out) return null_arg("output buffer");
  const auto v = h->h.potentials();
  if (len < v.size()) return fail(AE_ERR_ARGUMENT, "argument", "output buffer shorter than the lattice");
  std::copy(v.begin(), v.end(), out);
  return AE_OK;
}

ae_status ae_hamiltonian_apply(const ae_hamiltonian* h, const double* in, double* out, size_t n) {
  if (!h) return null_arg("hamiltonian");
  if (!in || !out) return null_arg("vector");
  return guarded([&] { from_complex(h->h.apply(to_complex(in, n)), out); });
}

ae_status ae_state_create(const double* amplitudes, size_t n, int normalize, ae_state** out) {
  if (!amplitudes) return null_arg("amplitudes");
  if (!out) return null_arg("output handle");
  return guarded([&] {
    const auto mode = normalize ? a::State::Normalization::Normalize : a::State::Normalization::Require;
    *out = new ae_state{a::State(to_complex(amplitudes, n), mode)};
  });
}

ae_status ae_state_w(size_t n, ae_state** out) {
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_state{a::State::w(n)}; });
}

ae_status ae_state_delta(size_t n, size_t site, ae_state** out) {
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_state{a::State::delta(n, site)}; });
}

ae_status ae_state_read_csv(const char* path, ae_state** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("output handle");
  return guarded([&] {
    const auto doc = a::read_csv(path);
    const std::size_t re = doc.column("re");
    std::optional<std::size_t> im;
    for (std::size_t i = 0; i < doc.header.size(); ++i)
      if (doc.header[i] == "im") im = i;
    std::vector<a::Complex> amps;
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
      const auto& row = doc.rows[r];
      auto number = [&](std::size_t col) {
        if (col >= row.size()) throw a::Error(a::ErrorKind::InvalidConfig, "state file row " + std::to_string(r + 1) + " is short");
        char* end = nullptr;
        const double v = std::strtod(row[col].c_str(), &end);
        if (end == row[col].c_str())
          throw a::Error(a::ErrorKind::InvalidConfig, "state file has a non-numeric value '" + row[col] + "'");
        return v;
      };
      amps.emplace_back(number(re), im ? number(*im) : 0.0);
    }
    *out = new ae_state{a::State(std::move(amps), a::State::Normalization::Normalize)};
  });
}

void ae_state_destroy(ae_state* s) { delete s; }

size_t ae_state_size(const ae_state* s) { return s ? s->s.size() : 0; }

ae_status ae_state_amplitudes(const ae_state* s, double* out, size_t n) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("output buffer");
  if (n < s->s.size()) return fail(AE_ERR_ARGUMENT, "argument", "output buffer shorter than the state");
  from_complex(s->s.amplitudes(), out);
  return AE_OK;
}

ae_status ae_ground_state(const ae_hamiltonian* h, double* energy, ae_state** state) {
  if (!h) return null_arg("hamiltonian");
  return guarded([&] {
    auto gs = a::ground_state(h->h);
    if (energy) *energy = gs.energy;
    if (state) *state = new ae_state{std::move(gs.state)};
  });
}

ae_status ae_lowest_k(const ae_hamiltonian* h, size_t k, double* energies, ae_state** states) {
  if (!h) return null_arg("hamiltonian");
  return guarded([&] {
    auto pairs = a::lowest_k(h->h, k);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (energies) energies[i] = pairs[i].energy;
      if (states) states[i] = new ae_state{std::move(pairs[i].state)};
    }
  });
}

ae_status ae_concurrence_pair(const ae_state* s, size_t i, size_t j, double* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("output");
  return guarded([&] { *out = a::concurrence_pair(s->s, i, j); });
}

ae_status ae_average_concurrence(const ae_state* s, double* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("output");
  return guarded([&] { *out = a::average_concurrence(s->s); });
}

ae_status ae_nn_profile(const ae_state* s, int boundary, double* out, size_t capacity, size_t* len) {
  if (!s) return null_arg("state");
  return guarded([&] {
    const auto v = a::nn_profile(s->s, to_boundary(boundary));
    if (len) *len = v.size();
    if (!out) return;
    if (capacity < v.size()) throw ArgumentError("output buffer too short for the profile");
    std::copy(v.begin(), v.end(), out);
  });
}

ae_status ae_center_profile(const ae_state* s, int boundary, ptrdiff_t* offsets, double* values, size_t capacity,
                            size_t* len) {
  if (!s) return null_arg("state");
  return guarded([&] {
    const auto v = a::center_profile(s->s, to_boundary(boundary));
    if (len) *len = v.size();
    if (!offsets && !values) return;
    if (capacity < v.size()) throw ArgumentError("output buffer too short for the profile");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (offsets) offsets[i] = v[i].offset;
      if (values) values[i] = v[i].value;
    }
  });
}

ae_status ae_localization_center(const ae_state* s, size_t* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("output");
  return guarded([&] { *out = a::localization_center(s->s); });
}

ae_status ae_localization_length(const ae_state* s, int boundary, ae_localization_report* out) {
  if (!s) return null_arg("state");
  if (!out) return null_arg("output");
  return guarded([&] {
    const auto r = a::localization_length(s->s, to_boundary(boundary));
    out->center = r.center;
    out->length = r.length;
    out->fit_r2 = r.fit_r2;
    out->participation_ratio = r.participation_ratio;
  });
}

void ae_propagator_config_init(ae_propagator_config* cfg) {
  if (!cfg) return;
  const a::PropagatorConfig d;
  cfg->dt = d.dt;
  cfg->total_time = d.total_time;
  cfg->record_stride = d.record_stride;
}

ae_status ae_step(const ae_hamiltonian* h, const ae_state* in, double dt, ae_state** out) {
  if (!h) return null_arg("hamiltonian");
  if (!in) return null_arg("state");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_state{a::step(h->h, in->s, dt)}; });
}

ae_status ae_evolve_record(const ae_hamiltonian* h, const ae_initial_state* init, const ae_propagator_config* cfg,
                           ae_series** out) {
  if (!h) return null_arg("hamiltonian");
  if (!init) return null_arg("initial state");
  if (!cfg) return null_arg("propagator config");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_series{a::evolve_record(h->h, to_initial(*init), to_propagator(*cfg))}; });
}

size_t ae_series_length(const ae_series* s) { return s ? s->samples.size() : 0; }

ae_status ae_series_sample(const ae_series* s, size_t index, double* time, double* avg_concurrence) {
  if (!s) return null_arg("series");
  if (index >= s->samples.size()) return fail(AE_ERR_ARGUMENT, "argument", "series index out of range");
  if (time) *time = s->samples[index].time;
  if (avg_concurrence) *avg_concurrence = s->samples[index].avg_concurrence;
  return AE_OK;
}

void ae_series_destroy(ae_series* s) { delete s; }

ae_status ae_fit_exp_single(const double* xs, const double* ys, size_t n, ae_fit** out) {
  if (!xs || !ys) return null_arg("data");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_fit{a::fit_exp_single({xs, n}, {ys, n})}; });
}

ae_status ae_fit_exp_double(const double* xs, const double* ys, size_t n, ae_fit** out) {
  if (!xs || !ys) return null_arg("data");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_fit{a::fit_exp_double({xs, n}, {ys, n})}; });
}

ae_status ae_linear_fit(const double* xs, const double* ys, size_t n, ae_fit** out) {
  if (!xs || !ys) return null_arg("data");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_fit{a::linear_fit({xs, n}, {ys, n})}; });
}

void ae_fit_destroy(ae_fit* f) { delete f; }

size_t ae_fit_param_count(const ae_fit* f) { return f ? f->f.params.size() : 0; }

const char* ae_fit_param_name(const ae_fit* f, size_t i) {
  if (!f || i >= f->f.names.size()) return nullptr;
  return f->f.names[i].c_str();
}

double ae_fit_param_value(const ae_fit* f, size_t i) {
  if (!f || i >= f->f.params.size()) return 0.0;
  return f->f.params[i];
}

ae_status ae_fit_param(const ae_fit* f, const char* name, double* out) {
  if (!f) return null_arg("fit");
  if (!name) return null_arg("name");
  if (!out) return null_arg("output");
  return guarded([&] { *out = f->f.param(name); });
}

double ae_fit_residual_norm(const ae_fit* f) { return f ? f->f.residual_norm : 0.0; }
double ae_fit_r2(const ae_fit* f) { return f ? f->f.r2 : 0.0; }
int ae_fit_converged(const ae_fit* f) { return f && f->f.converged ? 1 : 0; }
int ae_fit_iterations(const ae_fit* f) { return f ? f->f.iterations : 0; }

ae_status ae_find_interior_max(const double* xs, const double* ys, size_t n, ae_peak* out) {
  if (!xs || !ys) return null_arg("data");
  if (!out) return null_arg("output");
  return guarded([&] {
    const auto p = a::find_interior_max({xs, n}, {ys, n});
    out->x = p.x;
    out->y = p.y;
    out->interior = p.interior ? 1 : 0;
  });
}

void ae_sweep_config_init(ae_sweep_config* cfg) {
  if (!cfg) return;
  const a::SweepConfig d;
  ae_disorder_config_init(&cfg->base);
  cfg->lambdas = nullptr;
  cfg->n_lambdas = 0;
  cfg->realizations = d.realizations;
  cfg->workers = d.workers;
  cfg->sampling = AE_SAMPLING_SHARED;
  cfg->observable = AE_OBS_AVG_CONCURRENCE;
  cfg->offsets = nullptr;
  cfg->n_offsets = 0;
  cfg->max_offset = d.observable.max_offset;
  ae_propagator_config_init(&cfg->propagator);
  cfg->init.kind = AE_INIT_DELTA;
  cfg->init.use_middle_site = 1;
  cfg->init.site = 0;
  cfg->init.custom = nullptr;
}

ae_status ae_run_sweep(const ae_sweep_config* cfg, ae_sweep** out) {
  if (!cfg) return null_arg("sweep config");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_sweep{a::run_sweep(to_sweep(*cfg))}; });
}

void ae_sweep_destroy(ae_sweep* s) { delete s; }

size_t ae_sweep_rows(const ae_sweep* s) { return s ? s->r.axis.size() : 0; }
size_t ae_sweep_cols(const ae_sweep* s) { return s ? s->r.columns.size() : 0; }

double ae_sweep_axis(const ae_sweep* s, size_t row) {
  return s && row < s->r.axis.size() ? s->r.axis[row] : 0.0;
}

double ae_sweep_column(const ae_sweep* s, size_t col) {
  return s && col < s->r.columns.size() ? s->r.columns[col] : 0.0;
}

double ae_sweep_mean(const ae_sweep* s, size_t row, size_t col) {
  if (!s || row >= s->r.mean.size() || col >= s->r.mean[row].size()) return 0.0;
  return s->r.mean[row][col];
}

double ae_sweep_stderr(const ae_sweep* s, size_t row, size_t col) {
  if (!s || row >= s->r.std_error.size() || col >= s->r.std_error[row].size()) return 0.0;
  return s->r.std_error[row][col];
}

size_t ae_sweep_successes(const ae_sweep* s, size_t row) {
  return s && row < s->r.successes.size() ? s->r.successes[row] : 0;
}

size_t ae_sweep_failures(const ae_sweep* s, size_t row) {
  return s && row < s->r.failures.size() ? s->r.failures[row] : 0;
}

const char* ae_sweep_failure_note(const ae_sweep* s, size_t row) {
  if (!s || row >= s->r.failure_notes.size()) return "";
  return s->r.failure_notes[row].c_str();
}

ae_status ae_run_critical_lambda(const ae_disorder_config* base, const ptrdiff_t* offsets, size_t n_offsets,
                                 const double* lambdas, size_t n_lambdas, size_t realizations, size_t workers,
                                 int sampling, ae_critical** out) {
  if (!base) return null_arg("config");
  if (!offsets || !lambdas) return null_arg("grid");
  if (!out) return null_arg("output handle");
  return guarded([&] {
    auto r = a::run_critical_lambda(to_config(*base), std::vector<std::ptrdiff_t>(offsets, offsets + n_offsets),
                                    std::vector<double>(lambdas, lambdas + n_lambdas), realizations, workers,
                                    to_sampling(sampling));
    auto* c = new ae_critical{std::move(r), std::nullopt};
    if (c->r.fit) c->fit = ae_fit{*c->r.fit};
    *out = c;
  });
}

void ae_critical_destroy(ae_critical* c) { delete c; }

size_t ae_critical_count(const ae_critical* c) { return c ? c->r.points.size() : 0; }

ae_status ae_critical_point(const ae_critical* c, size_t i, ptrdiff_t* offset, double* lambda_c, double* peak,
                            int* interior) {
  if (!c) return null_arg("critical result");
  if (i >= c->r.points.size()) return fail(AE_ERR_ARGUMENT, "argument", "point index out of range");
  const auto& p = c->r.points[i];
  if (offset) *offset = p.offset;
  if (lambda_c) *lambda_c = p.lambda_c;
  if (peak) *peak = p.peak_value;
  if (interior) *interior = p.interior ? 1 : 0;
  return AE_OK;
}

const ae_fit* ae_critical_fit(const ae_critical* c) { return c && c->fit ? &*c->fit : nullptr; }

ae_status ae_run_decay_profile(const ae_sweep_config* cfg, ae_decay** out) {
  if (!cfg) return null_arg("sweep config");
  if (!out) return null_arg("output handle");
  if (cfg->observable != AE_OBS_CENTER_PROFILE)
    return fail(AE_ERR_CONFIG, "invalid-config", "decay profiles need the center-profile observable");
  return guarded([&] {
    auto sweep = to_sweep(*cfg);
    sweep.keep_samples = true;
    auto* d = new ae_decay{a::fold_center_profiles(a::run_sweep(sweep)), {}, {}};
    for (const auto& p : d->profiles) {
      d->fits.push_back(try_fit([&] { return a::fit_exp_single(p.distance, p.mean_concurrence); }));
      d->log_fits.push_back(try_fit([&] { return a::log_decay_fit(p); }));
    }
    *out = d;
  });
}

void ae_decay_destroy(ae_decay* d) { delete d; }

size_t ae_decay_count(const ae_decay* d) { return d ? d->profiles.size() : 0; }

double ae_decay_lambda(const ae_decay* d, size_t i) {
  return d && i < d->profiles.size() ? d->profiles[i].lambda : 0.0;
}

const ae_fit* ae_decay_fit(const ae_decay* d, size_t i) {
  return d && i < d->fits.size() && d->fits[i] ? &*d->fits[i] : nullptr;
}

const ae_fit* ae_decay_log_fit(const ae_decay* d, size_t i) {
  return d && i < d->log_fits.size() && d->log_fits[i] ? &*d->log_fits[i] : nullptr;
}

ae_status ae_manifest_create(const char* command, uint64_t seed, ae_manifest** out) {
  if (!command) return null_arg("command");
  if (!out) return null_arg("output handle");
  return guarded([&] {
    auto* m = new ae_manifest{};
    m->m.command = command;
    m->m.seed = seed;
    *out = m;
  });
}

void ae_manifest_destroy(ae_manifest* m) { delete m; }

ae_status ae_manifest_set(ae_manifest* m, const char* key, const char* value) {
  if (!m) return null_arg("manifest");
  if (!key || !value) return null_arg("entry");
  return guarded([&] {
    for (auto& [k, v] : m->m.params) {
      if (k == key) {
        v = value;
        return;
      }
    }
    m->m.params.emplace_back(key, value);
  });
}

ae_status ae_manifest_add_output(ae_manifest* m, const char* path) {
  if (!m) return null_arg("manifest");
  if (!path) return null_arg("path");
  return guarded([&] { m->m.outputs.emplace_back(path); });
}

ae_status ae_manifest_set_timing(ae_manifest* m, const char* timestamp, double wall_time_s) {
  if (!m) return null_arg("manifest");
  if (timestamp)
    m->m.timestamp = timestamp;
  else
    m->m.timestamp.reset();
  if (wall_time_s >= 0.0)
    m->m.wall_time_s = wall_time_s;
  else
    m->m.wall_time_s.reset();
  return AE_OK;
}

ae_status ae_write_sweep_csv(const ae_sweep* s, const ae_manifest* m, const char* path) {
  if (!s) return null_arg("sweep");
  return write_table(a::sweep_table(s->r), m, "sweep", path);
}

ae_status ae_write_fit_csv(const ae_fit* f, const ae_manifest* m, const char* path) {
  if (!f) return null_arg("fit");
  return write_table(a::fit_table(f->f), m, "fit", path);
}

ae_status ae_write_peak_csv(const ae_peak* p, const ae_manifest* m, const char* path) {
  if (!p) return null_arg("peak");
  return write_table(a::peak_table(a::PeakEstimate{p->x, p->y, p->interior != 0}), m, "peak", path);
}

ae_status ae_write_critical_csv(const ae_critical* c, const ae_manifest* m, const char* path) {
  if (!c) return null_arg("critical result");
  return write_table(a::critical_table(c->r), m, "critical-lambda", path);
}

ae_status ae_write_decay_csv(const ae_decay* d, const ae_manifest* m, const char* path) {
  if (!d) return null_arg("decay profile");
  return write_table(a::decay_table(d->profiles), m, "decay-profile", path);
}

ae_status ae_write_decay_fits_csv(const ae_decay* d, const ae_manifest* m, const char* path) {
  if (!d) return null_arg("decay profile");
  a::CsvTable t;
  t.header = {"lambda", "model", "param", "value"};
  auto add = [&](double lambda, const char* model, const std::optional<ae_fit>& fit) {
    if (!fit) return;
    const auto& f = fit->f;
    for (std::size_t i = 0; i < f.params.size(); ++i)
      t.rows.push_back({lambda, std::string(model), f.names[i], f.params[i]});
    t.rows.push_back({lambda, std::string(model), std::string("residual_norm"), f.residual_norm});
    t.rows.push_back({lambda, std::string(model), std::string("r2"), f.r2});
    t.rows.push_back({lambda, std::string(model), std::string("converged"), std::int64_t{f.converged ? 1 : 0}});
  };
  for (std::size_t i = 0; i < d->profiles.size(); ++i) {
    add(d->profiles[i].lambda, "exp", d->fits[i]);
    add(d->profiles[i].lambda, "log-linear", d->log_fits[i]);
    if (d->log_fits[i] && d->log_fits[i]->f.param("slope") < 0.0)
      t.rows.push_back({d->profiles[i].lambda, std::string("log-linear"), std::string("decay_length"),
                        -1.0 / d->log_fits[i]->f.param("slope")});
  }
  return write_table(t, m, "decay-profile", path);
}

ae_status ae_write_series_csv(const ae_series* s, const ae_manifest* m, const char* path) {
  if (!s) return null_arg("series");
  return write_table(a::series_table(s->samples), m, "evolve", path);
}

ae_status ae_config_parse(const char* text, ae_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("output handle");
  return guarded([&] { *out = new ae_config{a::parse_config_text(text)}; });
}

ae_status ae_config_read(const char* path, ae_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("output handle");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw a::Error(a::ErrorKind::Io, std::string("cannot open config '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    // A CSV written by this library: its comment block is the config.
    if (text.rfind("# tool = ", 0) == 0) {
      std::istringstream lines(text);
      std::string line, block;
      while (std::getline(lines, line))
        if (line.rfind("# ", 0) == 0) block += line.substr(2) + "\n";
      text = std::move(block);
    }
    *out = new ae_config{a::parse_config_text(text)};
  });
}

void ae_config_destroy(ae_config* c) { delete c; }

size_t ae_config_count(const ae_config* c) { return c ? c->entries.size() : 0; }

const char* ae_config_key(const ae_config* c, size_t i) {
  return c && i < c->entries.size() ? c->entries[i].first.c_str() : nullptr;
}

const char* ae_config_value(const ae_config* c, size_t i) {
  return c && i < c->entries.size() ? c->entries[i].second.c_str() : nullptr;
}

ae_status ae_selfcheck(ae_check_callback callback, void* user, int* all_passed) {
  return guarded([&] {
    bool ok = true;
    for (const auto& c : a::run_selfcheck()) {
      ok = ok && c.passed;
      if (callback) callback(c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), user);
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
