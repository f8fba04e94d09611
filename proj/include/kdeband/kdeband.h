/*
 * C interface to the kdeband library: kernel density estimates, confidence
 * bands built from them, checks of bandwidth rate conditions and Monte Carlo
 * coverage studies.
 *
 * Every object is an opaque handle created by a kb_*_create function (or
 * returned through an out parameter) and released with the matching
 * kb_*_destroy. Functions that can fail return a kb_status; on failure a
 * message for the calling thread is available from kb_last_error(). Strings
 * returned through char** out parameters are owned by the caller and must
 * be released with kb_string_free().
 */
#ifndef KDEBAND_KDEBAND_H
#define KDEBAND_KDEBAND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KDEBAND_BUILDING_LIBRARY)
#    define KB_API __declspec(dllexport)
#  else
#    define KB_API __declspec(dllimport)
#  endif
#else
#  define KB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kb_status
{
  KB_OK = 0,
  KB_ERROR_INVALID_ARGUMENT = 1,
  KB_ERROR_DIMENSION_MISMATCH = 2,
  /* a parameter lies outside the interval a construction requires */
  KB_ERROR_OUT_OF_DOMAIN = 3,
  /* unusable data: parse failures, empty samples, degenerate estimates */
  KB_ERROR_DATA = 4,
  KB_ERROR_IO = 5,
  /* quadrature or fit failed to converge */
  KB_ERROR_NUMERIC = 6,
  KB_ERROR_INTERNAL = 7
} kb_status;

KB_API const char* kb_status_name(kb_status status);
/* Message of the last failure on this thread; "" if none. */
KB_API const char* kb_last_error(void);
KB_API void kb_string_free(char* s);
KB_API const char* kb_version(void);

/* ---- kernels ---------------------------------------------------------- */

typedef struct kb_kernel kb_kernel;

/* id: "gaussian", "epanechnikov", "biweight", "uniform" or
 * "product:<k1>,<k2>,...". dim = 0 keeps the id's own dimension; dim > 1
 * with a single shape builds the dim-fold product. */
KB_API kb_status kb_kernel_create(const char* id, size_t dim, kb_kernel** out);
KB_API void kb_kernel_destroy(kb_kernel* kernel);
KB_API size_t kb_kernel_dimension(const kb_kernel* kernel);
KB_API kb_status kb_kernel_evaluate(const kb_kernel* kernel,
                                    const double* z,
                                    size_t dim,
                                    double* out);
KB_API kb_status kb_kernel_kappa(const kb_kernel* kernel, double* out);
KB_API kb_status kb_kernel_deriv_sq_integral(const kb_kernel* kernel, double* out);
/* JSON report of the kernel moment clauses; failures are reported, not returned. */
KB_API kb_status kb_kernel_validate_a1(const kb_kernel* kernel, char** json);

/* ---- samples, grids and estimates -------------------------------------- */

typedef struct kb_sample kb_sample;
typedef struct kb_grid kb_grid;
typedef struct kb_estimate kb_estimate;

/* rows: n * dim values, row-major. */
KB_API kb_status kb_sample_create(const double* rows, size_t n, size_t dim, kb_sample** out);
KB_API kb_status kb_sample_read_csv(const char* path, kb_sample** out);
KB_API void kb_sample_destroy(kb_sample* sample);
KB_API size_t kb_sample_size(const kb_sample* sample);
KB_API size_t kb_sample_dimension(const kb_sample* sample);
KB_API const double* kb_sample_data(const kb_sample* sample);

/* Box [lo_i, hi_i]; step may hold one value for all axes (step_count 1) or
 * one per axis. */
KB_API kb_status kb_grid_create(size_t dim,
                                const double* lo,
                                const double* hi,
                                const double* step,
                                size_t step_count,
                                kb_grid** out);
KB_API void kb_grid_destroy(kb_grid* grid);
KB_API size_t kb_grid_size(const kb_grid* grid);
KB_API size_t kb_grid_dimension(const kb_grid* grid);
KB_API kb_status kb_grid_point(const kb_grid* grid, size_t index, double* out);

KB_API kb_status kb_kde_at_point(const kb_sample* sample,
                                 const kb_kernel* kernel,
                                 double h,
                                 const double* x,
                                 size_t dim,
                                 double* out);
KB_API kb_status kb_kde_on_grid(const kb_sample* sample,
                                const kb_kernel* kernel,
                                double h,
                                const kb_grid* grid,
                                kb_estimate** out);
KB_API void kb_estimate_destroy(kb_estimate* estimate);
KB_API size_t kb_estimate_size(const kb_estimate* estimate);
KB_API const double* kb_estimate_values(const kb_estimate* estimate);
KB_API double kb_estimate_bandwidth(const kb_estimate* estimate);
KB_API kb_status kb_estimate_sup(const kb_estimate* estimate, size_t* index, double* value);
KB_API kb_status kb_estimate_write_csv(const kb_estimate* estimate, const char* path);

/* ---- rate schedules ---------------------------------------------------- */

/* c * n^p * (log n)^q * (log log n)^r */
typedef struct kb_rate
{
  double coefficient;
  double n_exponent;
  double log_exponent;
  double loglog_exponent;
} kb_rate;

typedef enum kb_limit_class
{
  KB_LIMIT_TO_ZERO = 0,
  KB_LIMIT_TO_INFINITY = 1,
  KB_LIMIT_BOUNDED = 2
} kb_limit_class;

/* Grammar "c*n^p*log^q*loglog^r", factors in any order, each optional. */
KB_API kb_status kb_rate_parse(const char* text, kb_rate* out);
KB_API kb_status kb_rate_format(kb_rate rate, char** out);
KB_API kb_status kb_rate_eval(kb_rate rate, double n, double* out);
KB_API kb_limit_class kb_rate_limit_class(kb_rate rate);

typedef struct kb_schedule kb_schedule;

typedef struct kb_preset_params
{
  double a;        /* NaN: unset */
  double e;        /* NaN: preset default */
  double c_star;
  double v_star;
  double eps_star;
  int h_log_variant;
} kb_preset_params;

/* a = e = NaN, constants 1, no variant. */
KB_API kb_preset_params kb_preset_params_default(void);

/* name: "bickel_rosenblatt", "translated", "thinner_mse", "thinner_sup". */
KB_API kb_status kb_schedule_preset(const char* name,
                                    size_t dim,
                                    const kb_preset_params* params,
                                    kb_schedule** out);
KB_API kb_status kb_schedule_from_rates(size_t dim,
                                        kb_rate h,
                                        kb_rate h_star,
                                        kb_rate v,
                                        kb_rate eps,
                                        kb_schedule** out);
KB_API void kb_schedule_destroy(kb_schedule* schedule);
KB_API size_t kb_schedule_dimension(const kb_schedule* schedule);
/* Any of the out pointers may be NULL. */
KB_API void kb_schedule_rates(const kb_schedule* schedule,
                              kb_rate* h,
                              kb_rate* h_star,
                              kb_rate* v,
                              kb_rate* eps);

typedef enum kb_condition
{
  KB_CONDITION_THEOREM1 = 1,
  KB_CONDITION_THEOREM2 = 2,
  KB_CONDITION_TRUNCATION = 4,
  KB_CONDITION_TRANSLATION = 8,
  /* every set that applies; translation only for d = 1 */
  KB_CONDITION_ALL = 15
} kb_condition;

/* conditions: bitwise OR of kb_condition values. holds (optional) receives
 * 1 when every requested set holds. */
KB_API kb_status kb_schedule_check(const kb_schedule* schedule,
                                   int conditions,
                                   int* holds,
                                   char** json);

/* ---- bands ------------------------------------------------------------- */

typedef enum kb_band_family
{
  KB_BAND_HAT = 0,
  KB_BAND_CHECK = 1,
  KB_BAND_BICKEL_ROSENBLATT = 2,
  KB_BAND_TRANSLATED = 3,
  KB_BAND_SIMPLIFIED = 4,
  KB_BAND_TRUNCATED = 5
} kb_band_family;

typedef enum kb_truncation
{
  KB_TRUNCATION_NONE = 0,
  KB_TRUNCATION_TILDE = 1,
  KB_TRUNCATION_SUP = 2
} kb_truncation;

typedef struct kb_band_spec
{
  kb_band_family family;
  kb_truncation truncation;
  double delta;
  double alpha;
} kb_band_spec;

KB_API kb_status kb_band_family_parse(const char* name, kb_band_family* out);
KB_API kb_status kb_truncation_parse(const char* name, kb_truncation* out);

KB_API kb_status kb_z_alpha(double alpha, double* out);
KB_API kb_status kb_u_n(const kb_kernel* kernel, double c1, double c2, double h, double* out);

typedef struct kb_band kb_band;

/* fstar and fn must share a grid and sample size. The schedule supplies
 * v_n and eps_n at that sample size. */
KB_API kb_status kb_band_build(const kb_band_spec* spec,
                               const kb_kernel* kernel,
                               const kb_schedule* schedule,
                               const kb_estimate* fstar,
                               const kb_estimate* fn,
                               kb_band** out);
KB_API void kb_band_destroy(kb_band* band);
KB_API size_t kb_band_size(const kb_band* band);
KB_API kb_status kb_band_interval(const kb_band* band,
                                  size_t index,
                                  double* center,
                                  double* half_width,
                                  int* truncated);
/* contained = 1 when every truth value lies in its closed interval;
 * otherwise first_violation receives the first failing grid index. */
KB_API kb_status kb_band_contains(const kb_band* band,
                                  const double* truth,
                                  size_t count,
                                  int* contained,
                                  size_t* first_violation);
KB_API kb_status kb_band_write_csv(const kb_band* band, const char* path);
KB_API kb_status kb_band_summary_json(const kb_band* band, char** json);

/* ---- coverage ---------------------------------------------------------- */

typedef struct kb_density kb_density;

/* "gaussian", "mixture", "compact_beta", "smoothed_uniform". */
KB_API kb_status kb_density_create(const char* name, size_t dim, kb_density** out);
KB_API void kb_density_destroy(kb_density* density);
KB_API kb_status kb_density_evaluate(const kb_density* density,
                                     const double* x,
                                     size_t dim,
                                     double* out);
/* n observations from the stream kb_stream_seed(seed, n, 0). */
KB_API kb_status kb_density_sample(const kb_density* density,
                                   uint64_t seed,
                                   size_t n,
                                   kb_sample** out);
KB_API uint64_t kb_stream_seed(uint64_t master, uint64_t n, uint64_t rep);

typedef enum kb_correction
{
  KB_CORRECTION_NONE = 0,
  KB_CORRECTION_HALF = 1
} kb_correction;

typedef struct kb_simulation_config
{
  const char* density;
  size_t dim;
  const char* kernel;
  const kb_schedule* schedule;
  kb_band_spec band;
  /* region C; NULL for the density's 1e-6 quantile box */
  const double* lo;
  const double* hi;
  /* grid step per axis; NULL for min(h, h*)/4 */
  const double* step;
  const size_t* n_list;
  size_t n_count;
  size_t replications;
  uint64_t seed;
  unsigned workers;
} kb_simulation_config;

typedef struct kb_report kb_report;

typedef struct kb_coverage_entry
{
  size_t n;
  size_t replications;
  size_t misses;
  double phat;
  double se;
  double w_n;
} kb_coverage_entry;

typedef struct kb_log_level_fit
{
  double slope;
  double intercept;
  double slope_se; /* NaN with two points */
  size_t points_used;
  int corrected;
} kb_log_level_fit;

KB_API kb_status kb_simulate(const kb_simulation_config* config, kb_report** out);
KB_API void kb_report_destroy(kb_report* report);
KB_API size_t kb_report_size(const kb_report* report);
KB_API kb_status kb_report_entry(const kb_report* report, size_t index, kb_coverage_entry* out);
KB_API kb_status kb_report_fit(const kb_report* report, kb_correction correction, kb_log_level_fit* out);
KB_API kb_status kb_report_json(const kb_report* report, kb_correction correction, char** json);

/* Least squares of log p against w over points with p > 0. */
KB_API kb_status kb_fit_log_level(const double* w, const double* p, size_t count, kb_log_level_fit* out);

/* `paths` nested sample paths with seeds seed, seed+1, ...; the JSON lists
 * per-path coverage over n_list and the share of paths with no miss beyond
 * `beyond`. */
KB_API kb_status kb_almost_sure_study(const kb_simulation_config* config,
                                      size_t paths,
                                      size_t beyond,
                                      double* fraction_clean,
                                      char** json);

#ifdef __cplusplus
}
#endif

#endif
