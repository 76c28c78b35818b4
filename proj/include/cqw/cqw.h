/* C interface to the cyclic quantum walk library. All functions return a
 * cqw_status; on failure cqw_last_error() describes the problem (per thread).
 * Objects are opaque handles released with the matching *_destroy call. */
#ifndef CQW_H
#define CQW_H

#include <stddef.h>
#include <stdint.h>

#if defined(CQW_BUILDING_LIBRARY)
#define CQW_API __attribute__((visibility("default")))
#else
#define CQW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CQW_OK = 0,
  CQW_ERR_INVALID_ARGUMENT = 1,
  CQW_ERR_DIMENSION = 2,
  CQW_ERR_OUT_OF_RANGE = 3,
  CQW_ERR_NUMERICAL = 4,
  CQW_ERR_IO = 5,
  CQW_ERR_PARSE = 6,
  CQW_ERR_INTERNAL = 99
} cqw_status;

typedef enum { CQW_FORMAT_CSV = 0, CQW_FORMAT_JSON = 1 } cqw_format;

typedef struct cqw_step cqw_step;
typedef struct cqw_spectrum cqw_spectrum;
typedef struct cqw_trace cqw_trace;
typedef struct cqw_circuit cqw_circuit;

typedef struct {
  double gamma;
  double theta;
  double phi;
} cqw_coin;

CQW_API const char* cqw_version(void);
CQW_API const char* cqw_last_error(void);

CQW_API cqw_status cqw_parse_angle(const char* text, double* out);
/* "hadamard" or "symmetric". */
CQW_API cqw_status cqw_coin_preset(const char* name, cqw_coin* out);
CQW_API cqw_status cqw_coin_check(const cqw_coin* coin);

/* ---- step operators ---- */
CQW_API cqw_status cqw_step_create(int n_sites, const cqw_coin* coin, cqw_step** out);
/* Static site phases drawn uniformly from [-phi_max, phi_max]. */
CQW_API cqw_status cqw_step_create_noisy(int n_sites, const cqw_coin* coin, double phi_max,
                                         uint64_t seed, uint64_t realization, cqw_step** out);
CQW_API void cqw_step_destroy(cqw_step* step);
CQW_API int cqw_step_sites(const cqw_step* step);
/* in/out hold 2N complex amplitudes as interleaved (re, im), index 2 s + c. */
CQW_API cqw_status cqw_step_apply(const cqw_step* step, const double* in, double* out);
/* Row-major 2N x 2N interleaved complex matrix, 8 N^2 doubles. */
CQW_API cqw_status cqw_step_dense(const cqw_step* step, double* out, size_t capacity);
/* PR of the site distribution after `steps` steps from initial_site, |+>
 * coin. initial_site < 0 selects floor(N/2). */
CQW_API cqw_status cqw_walker_pr(const cqw_step* step, int initial_site, int steps, double* out);

/* ---- spectra ---- */
typedef struct {
  int n_sites;
  double gamma;
  double half_sum;
  double gap;
  int degenerate;
  int degeneracy_m; /* -1 when half_sum is not m pi / N */
  int max_cluster;
  double mean_pr;
} cqw_spectrum_info;

CQW_API cqw_status cqw_spectrum_analytic(int n_sites, const cqw_coin* coin, cqw_spectrum** out);
CQW_API cqw_status cqw_spectrum_numerical(const cqw_step* step, cqw_spectrum** out);
CQW_API void cqw_spectrum_destroy(cqw_spectrum* spectrum);
CQW_API size_t cqw_spectrum_size(const cqw_spectrum* spectrum);
CQW_API cqw_status cqw_spectrum_eigenvalue(const cqw_spectrum* spectrum, size_t i, double* re,
                                           double* im);
CQW_API cqw_status cqw_spectrum_pr(const cqw_spectrum* spectrum, size_t i, double* out);
CQW_API cqw_status cqw_spectrum_get_info(const cqw_spectrum* spectrum, cqw_spectrum_info* out);
CQW_API cqw_status cqw_spectrum_write(const cqw_spectrum* spectrum, const char* path,
                                      cqw_format format);

/* ---- evolution ---- */
typedef struct {
  int initial_site; /* < 0: floor(N/2) */
  int record_every;
  int keep_distributions;
  int literal_msd; /* 0: per-site MSD, 1: squared displacement of the mean */
} cqw_evolve_options;

typedef struct {
  double alpha;
  double beta;
  double residual;
  int m_lo;
  int m_hi;
  int points;
  int loglog; /* 0: nonlinear least squares, 1: log-log OLS */
} cqw_fit;

typedef struct {
  int window;
  double min_cv;
  int min_cv_step;
  int converged;
  int convergence_step;    /* -1 when not converged */
  double saturation_level; /* NaN when not converged */
  double min_cv_window_mean;
} cqw_convergence;

CQW_API cqw_evolve_options cqw_evolve_options_default(void);
CQW_API cqw_status cqw_evolve(const cqw_step* step, int n_steps, const cqw_evolve_options* options,
                              cqw_trace** out);
CQW_API void cqw_trace_destroy(cqw_trace* trace);
CQW_API size_t cqw_trace_size(const cqw_trace* trace);
CQW_API cqw_status cqw_trace_record(const cqw_trace* trace, size_t i, int* step,
                                    double* mean_position, double* msd, double* norm);
CQW_API cqw_status cqw_trace_distribution(const cqw_trace* trace, size_t i, double* out,
                                          size_t capacity);
/* Final-state site distribution, N values. */
CQW_API cqw_status cqw_trace_final_distribution(const cqw_trace* trace, double* out,
                                                size_t capacity);
/* m_hi <= 0 selects the default window [1, floor(N/2)]. */
CQW_API cqw_status cqw_trace_fit(const cqw_trace* trace, int m_lo, int m_hi, int loglog,
                                 cqw_fit* out);
/* min_cv_policy = 1 takes the saturation level from the minimum-CV window. */
CQW_API cqw_status cqw_trace_converge(const cqw_trace* trace, double threshold, int horizon,
                                      int min_cv_policy, cqw_convergence* out);
CQW_API cqw_status cqw_trace_write(const cqw_trace* trace, const char* path, cqw_format format);
CQW_API cqw_status cqw_trace_write_distributions(const cqw_trace* trace, const char* path);
CQW_API cqw_status cqw_fit_write(const cqw_fit* fit, const char* path);
CQW_API cqw_status cqw_trace_write_convergence(const cqw_trace* trace, double threshold,
                                               int horizon, int min_cv_policy, const char* path);
/* Static string, or NULL for a non-finite beta. */
CQW_API const char* cqw_classify_spread(double beta);

/* ---- circuits (N = 2^n sites) ---- */
CQW_API cqw_status cqw_circuit_coin(const cqw_coin* coin, cqw_circuit** out);
CQW_API cqw_status cqw_circuit_qft(int n_qubits, int inverse, cqw_circuit** out);
CQW_API cqw_status cqw_circuit_clock(int n_qubits, int power, int adjoint, cqw_circuit** out);
CQW_API cqw_status cqw_circuit_step(int n_qubits, const cqw_coin* coin, cqw_circuit** out);
/* noisy = 0 ignores phi_max / seed / realization. */
CQW_API cqw_status cqw_circuit_walk(int n_qubits, const cqw_coin* coin, int steps, int noisy,
                                    double phi_max, uint64_t seed, uint64_t realization,
                                    cqw_circuit** out);
CQW_API cqw_status cqw_circuit_parse_qasm(const char* text, cqw_circuit** out);
CQW_API void cqw_circuit_destroy(cqw_circuit* circuit);
CQW_API size_t cqw_circuit_gate_count(const cqw_circuit* circuit);
CQW_API int cqw_circuit_qubits(const cqw_circuit* circuit);
/* Copies a NUL-terminated string into buf when capacity allows; *needed
 * receives the full length including the terminator. */
CQW_API cqw_status cqw_circuit_qasm(const cqw_circuit* circuit, char* buf, size_t capacity,
                                    size_t* needed);
CQW_API cqw_status cqw_circuit_counts_json(const cqw_circuit* circuit, char* buf, size_t capacity,
                                           size_t* needed);
/* Compares the simulated unitary with the dense operator the circuit was
 * compiled from. Parsed circuits have no reference (CQW_ERR_INVALID_ARGUMENT). */
CQW_API cqw_status cqw_circuit_verify(const cqw_circuit* circuit, double* max_deviation,
                                      int* equivalent);

/* ---- sweeps ---- */
typedef struct {
  double phi_max;
  double median_beta; /* NaN when every fit failed */
  int failures;
} cqw_beta_level;

/* slice 0: gamma vs theta = phi; slice 1: gamma = pi/4, theta vs phi. */
CQW_API cqw_status cqw_pr_map(int n_sites, int resolution, int slice, int walker_steps,
                              int threads, const char* path, cqw_format format);
/* Writes <dir>/beta.csv + beta_summary.csv (or beta.json). crossover is NaN
 * when the median never crosses 1. levels_out holds n_levels entries. */
CQW_API cqw_status cqw_sweep_beta(int n_sites, const char* coin, const double* levels,
                                  size_t n_levels, int realizations, uint64_t seed, int m_lo,
                                  int m_hi, int loglog, int threads, const char* dir,
                                  cqw_format format, cqw_beta_level* levels_out,
                                  double* crossover);

typedef struct {
  int steps;
  int record_every;
  int horizon;
  double threshold;
} cqw_saturation_options;

typedef struct {
  size_t runs;
  size_t converged;
  double median_saturation; /* over converged runs, NaN if none */
  double median_min_cv;
} cqw_saturation_summary;

CQW_API cqw_saturation_options cqw_saturation_options_default(void);
CQW_API cqw_status cqw_sweep_saturation(const int* sizes, size_t n_sizes, const char* coin,
                                        const double* levels, size_t n_levels, int realizations,
                                        uint64_t seed, const cqw_saturation_options* options,
                                        int threads, const char* path, cqw_format format,
                                        cqw_saturation_summary* out);

typedef struct {
  uint64_t seed;
  int realizations;
  int pr_map_resolution;
  int threads;
  int long_steps;
  int report_steps;
  int saturation_realizations;
} cqw_reproduce_options;

CQW_API cqw_reproduce_options cqw_reproduce_options_default(void);
/* Writes the figure data and manifest.json into out_dir. The one-line
 * summary is copied to buf as in cqw_circuit_qasm. */
CQW_API cqw_status cqw_reproduce(int figure, const char* out_dir,
                                 const cqw_reproduce_options* options, char* buf, size_t capacity,
                                 size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
