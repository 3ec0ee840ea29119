/*
 * anderson.h - C interface to the one-dimensional Anderson entanglement
 * library.
 *
 * All objects are opaque handles created by ae_*_create / ae_run_* and
 * released with the matching ae_*_destroy (NULL is accepted). Functions that
 * can fail return an ae_status; on failure ae_last_error() holds a one-line
 * message for the calling thread until its next failing call.
 *
 * Sites are 0-based. Complex vectors are interleaved (re, im) pairs, so a
 * state on n sites occupies 2n doubles.
 */
#ifndef ANDERSON_ANDERSON_H
#define ANDERSON_ANDERSON_H

#include <stddef.h>
#include <stdint.h>

#if defined(ANDERSON_BUILDING_LIBRARY)
#define AE_API __attribute__((visibility("default")))
#else
#define AE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ae_status {
  AE_OK = 0,
  AE_ERR_ARGUMENT = 1, /* null handle, bad enum value, short buffer */
  AE_ERR_CONFIG = 3,   /* invalid configuration or input data */
  AE_ERR_NUMERIC = 4,  /* convergence failure, singular system, no decay */
  AE_ERR_IO = 5,
  AE_ERR_INTERNAL = 6
} ae_status;

typedef enum ae_boundary { AE_BC_OPEN = 0, AE_BC_PERIODIC = 1 } ae_boundary;

AE_API const char* ae_version(void);
AE_API const char* ae_last_error(void);
/* Finer-grained category of the last error, e.g. "convergence". */
AE_API const char* ae_last_error_kind(void);

/* ---- disorder and Hamiltonian ------------------------------------------ */

typedef struct ae_disorder_config {
  size_t size;
  double hopping;
  double offset;   /* V0 */
  double strength; /* lambda */
  uint64_t seed;
  int boundary;    /* ae_boundary */
} ae_disorder_config;

/* N = 1600, t = 1, V0 = 0, lambda = 0, seed = 1, periodic. */
AE_API void ae_disorder_config_init(ae_disorder_config* cfg);

AE_API ae_status ae_sample_disorder(const ae_disorder_config* cfg, double* out, size_t len);

typedef struct ae_hamiltonian ae_hamiltonian;

AE_API ae_status ae_hamiltonian_create(const ae_disorder_config* cfg, ae_hamiltonian** out);
AE_API ae_status ae_hamiltonian_from_potentials(const double* potentials, size_t n, double hopping, int boundary,
                                                ae_hamiltonian** out);
AE_API void ae_hamiltonian_destroy(ae_hamiltonian* h);
AE_API size_t ae_hamiltonian_size(const ae_hamiltonian* h);
AE_API ae_status ae_hamiltonian_potentials(const ae_hamiltonian* h, double* out, size_t len);
/* out = H in; both hold n interleaved complex values. */
AE_API ae_status ae_hamiltonian_apply(const ae_hamiltonian* h, const double* in, double* out, size_t n);

/* ---- states and entanglement -------------------------------------------- */

typedef struct ae_state ae_state;

/* normalize != 0 rescales; otherwise the norm must already be 1 (1e-10). */
AE_API ae_status ae_state_create(const double* amplitudes, size_t n, int normalize, ae_state** out);
AE_API ae_status ae_state_w(size_t n, ae_state** out);
AE_API ae_status ae_state_delta(size_t n, size_t site, ae_state** out);
/* CSV with columns re[,im]; '#' lines ignored; normalized on load. */
AE_API ae_status ae_state_read_csv(const char* path, ae_state** out);
AE_API void ae_state_destroy(ae_state* s);
AE_API size_t ae_state_size(const ae_state* s);
AE_API ae_status ae_state_amplitudes(const ae_state* s, double* out, size_t n);

AE_API ae_status ae_ground_state(const ae_hamiltonian* h, double* energy, ae_state** state);
/* energies[k] and states[k] for the k lowest levels, energies nondecreasing. */
AE_API ae_status ae_lowest_k(const ae_hamiltonian* h, size_t k, double* energies, ae_state** states);

AE_API ae_status ae_concurrence_pair(const ae_state* s, size_t i, size_t j, double* out);
AE_API ae_status ae_average_concurrence(const ae_state* s, double* out);
/* Writes N-1 (open) or N (periodic) values; *len receives the count. */
AE_API ae_status ae_nn_profile(const ae_state* s, int boundary, double* out, size_t capacity, size_t* len);
AE_API ae_status ae_center_profile(const ae_state* s, int boundary, ptrdiff_t* offsets, double* values,
                                   size_t capacity, size_t* len);

typedef struct ae_localization_report {
  size_t center;
  double length;
  double fit_r2;
  double participation_ratio;
} ae_localization_report;

AE_API ae_status ae_localization_center(const ae_state* s, size_t* out);
AE_API ae_status ae_localization_length(const ae_state* s, int boundary, ae_localization_report* out);

/* ---- dynamics ------------------------------------------------------------ */

typedef struct ae_propagator_config {
  double dt;
  double total_time;
  size_t record_stride;
} ae_propagator_config;

/* dt = 0.05, total_time = 400, record_stride = 20. */
AE_API void ae_propagator_config_init(ae_propagator_config* cfg);

typedef enum ae_init_kind { AE_INIT_DELTA = 0, AE_INIT_W = 1, AE_INIT_CUSTOM = 2 } ae_init_kind;

typedef struct ae_initial_state {
  int kind;               /* ae_init_kind */
  int use_middle_site;    /* delta only: site N/2 (1-based) when nonzero */
  size_t site;            /* delta only, 0-based */
  const ae_state* custom; /* custom only; borrowed */
} ae_initial_state;

AE_API ae_status ae_step(const ae_hamiltonian* h, const ae_state* in, double dt, ae_state** out);

typedef struct ae_series ae_series;

AE_API ae_status ae_evolve_record(const ae_hamiltonian* h, const ae_initial_state* init,
                                  const ae_propagator_config* cfg, ae_series** out);
AE_API size_t ae_series_length(const ae_series* s);
AE_API ae_status ae_series_sample(const ae_series* s, size_t index, double* time, double* avg_concurrence);
AE_API void ae_series_destroy(ae_series* s);

/* ---- fitting ------------------------------------------------------------- */

typedef struct ae_fit ae_fit;

AE_API ae_status ae_fit_exp_single(const double* xs, const double* ys, size_t n, ae_fit** out);
AE_API ae_status ae_fit_exp_double(const double* xs, const double* ys, size_t n, ae_fit** out);
AE_API ae_status ae_linear_fit(const double* xs, const double* ys, size_t n, ae_fit** out);
AE_API void ae_fit_destroy(ae_fit* f);
AE_API size_t ae_fit_param_count(const ae_fit* f);
AE_API const char* ae_fit_param_name(const ae_fit* f, size_t i);
AE_API double ae_fit_param_value(const ae_fit* f, size_t i);
AE_API ae_status ae_fit_param(const ae_fit* f, const char* name, double* out);
AE_API double ae_fit_residual_norm(const ae_fit* f);
AE_API double ae_fit_r2(const ae_fit* f);
AE_API int ae_fit_converged(const ae_fit* f);
AE_API int ae_fit_iterations(const ae_fit* f);

typedef struct ae_peak {
  double x;
  double y;
  int interior;
} ae_peak;

AE_API ae_status ae_find_interior_max(const double* xs, const double* ys, size_t n, ae_peak* out);

/* ---- ensembles ----------------------------------------------------------- */

typedef enum ae_observable_kind {
  AE_OBS_AVG_CONCURRENCE = 0,
  AE_OBS_NN_PROFILE = 1,
  AE_OBS_CENTER_PAIR = 2,
  AE_OBS_CENTER_PROFILE = 3,
  AE_OBS_LOCALIZATION_LENGTH = 4,
  AE_OBS_DYNAMICS = 5
} ae_observable_kind;

/* Shared: realization r reuses one disorder pattern eps at every lambda.
 * Independent: every (lambda, realization) cell draws its own eps. */
typedef enum ae_sampling { AE_SAMPLING_SHARED = 0, AE_SAMPLING_INDEPENDENT = 1 } ae_sampling;

typedef struct ae_sweep_config {
  ae_disorder_config base; /* base.seed is the master seed */
  const double* lambdas;   /* borrowed */
  size_t n_lambdas;
  size_t realizations;
  size_t workers;
  int sampling;              /* ae_sampling */
  int observable;            /* ae_observable_kind */
  const ptrdiff_t* offsets;  /* center pair */
  size_t n_offsets;
  size_t max_offset;         /* center profile */
  ae_propagator_config propagator;
  ae_initial_state init;
} ae_sweep_config;

/* Default base, R = 50, one worker, shared sampling, average concurrence, offsets {1},
 * max_offset 40, default propagator, delta on the middle site. */
AE_API void ae_sweep_config_init(ae_sweep_config* cfg);

typedef struct ae_sweep ae_sweep;

AE_API ae_status ae_run_sweep(const ae_sweep_config* cfg, ae_sweep** out);
AE_API void ae_sweep_destroy(ae_sweep* s);
AE_API size_t ae_sweep_rows(const ae_sweep* s);
AE_API size_t ae_sweep_cols(const ae_sweep* s);
AE_API double ae_sweep_axis(const ae_sweep* s, size_t row);
AE_API double ae_sweep_column(const ae_sweep* s, size_t col);
AE_API double ae_sweep_mean(const ae_sweep* s, size_t row, size_t col);
AE_API double ae_sweep_stderr(const ae_sweep* s, size_t row, size_t col);
AE_API size_t ae_sweep_successes(const ae_sweep* s, size_t row);
AE_API size_t ae_sweep_failures(const ae_sweep* s, size_t row);
/* First failure message for the row, "" when none. */
AE_API const char* ae_sweep_failure_note(const ae_sweep* s, size_t row);

typedef struct ae_critical ae_critical;

AE_API ae_status ae_run_critical_lambda(const ae_disorder_config* base, const ptrdiff_t* offsets, size_t n_offsets,
                                        const double* lambdas, size_t n_lambdas, size_t realizations,
                                        size_t workers, int sampling, ae_critical** out);
AE_API void ae_critical_destroy(ae_critical* c);
AE_API size_t ae_critical_count(const ae_critical* c);
AE_API ae_status ae_critical_point(const ae_critical* c, size_t i, ptrdiff_t* offset, double* lambda_c,
                                   double* peak, int* interior);
/* Borrowed; NULL when fewer than 4 offsets or the fit was degenerate. */
AE_API const ae_fit* ae_critical_fit(const ae_critical* c);

typedef struct ae_decay ae_decay;

/* cfg->observable must be AE_OBS_CENTER_PROFILE. */
AE_API ae_status ae_run_decay_profile(const ae_sweep_config* cfg, ae_decay** out);
AE_API void ae_decay_destroy(ae_decay* d);
AE_API size_t ae_decay_count(const ae_decay* d);
AE_API double ae_decay_lambda(const ae_decay* d, size_t i);
/* Borrowed; single exponential B exp(-d/D) + A of the mean concurrence. NULL if degenerate. */
AE_API const ae_fit* ae_decay_fit(const ae_decay* d, size_t i);
/* Borrowed; linear fit of mean ln C against distance. NULL if degenerate. */
AE_API const ae_fit* ae_decay_log_fit(const ae_decay* d, size_t i);

/* ---- run manifests and CSV ----------------------------------------------- */

typedef struct ae_manifest ae_manifest;

AE_API ae_status ae_manifest_create(const char* command, uint64_t seed, ae_manifest** out);
AE_API void ae_manifest_destroy(ae_manifest* m);
AE_API ae_status ae_manifest_set(ae_manifest* m, const char* key, const char* value);
AE_API ae_status ae_manifest_add_output(ae_manifest* m, const char* path);
/* timestamp may be NULL; a negative wall time is omitted. */
AE_API ae_status ae_manifest_set_timing(ae_manifest* m, const char* timestamp, double wall_time_s);

/* path "-" writes to stdout. */
AE_API ae_status ae_write_sweep_csv(const ae_sweep* s, const ae_manifest* m, const char* path);
AE_API ae_status ae_write_fit_csv(const ae_fit* f, const ae_manifest* m, const char* path);
AE_API ae_status ae_write_peak_csv(const ae_peak* p, const ae_manifest* m, const char* path);
AE_API ae_status ae_write_critical_csv(const ae_critical* c, const ae_manifest* m, const char* path);
AE_API ae_status ae_write_decay_csv(const ae_decay* d, const ae_manifest* m, const char* path);
/* Rows lambda,model,param,value for both decay fits of every lambda. */
AE_API ae_status ae_write_decay_fits_csv(const ae_decay* d, const ae_manifest* m, const char* path);
AE_API ae_status ae_write_series_csv(const ae_series* s, const ae_manifest* m, const char* path);

typedef struct ae_config ae_config;

/* `key = value` lines, '#' comments. ae_config_read also accepts a CSV written
 * by this library and reads its comment block. */
AE_API ae_status ae_config_parse(const char* text, ae_config** out);
AE_API ae_status ae_config_read(const char* path, ae_config** out);
AE_API void ae_config_destroy(ae_config* c);
AE_API size_t ae_config_count(const ae_config* c);
AE_API const char* ae_config_key(const ae_config* c, size_t i);
AE_API const char* ae_config_value(const ae_config* c, size_t i);

/* ---- self check ----------------------------------------------------------- */

typedef void (*ae_check_callback)(const char* name, int passed, const char* detail, void* user);

/* Runs the small-N invariant suite; *all_passed is 1 iff every check passed. */
AE_API ae_status ae_selfcheck(ae_check_callback callback, void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* ANDERSON_ANDERSON_H */
