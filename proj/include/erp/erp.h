/* C interface to the ERP analysis library.
 *
 * Every function returns an erp_status; no function throws or aborts.
 * Functions that can fail leave a human-readable message retrievable via
 * erp_pipeline_last_error (handle-bound calls) or erp_last_error
 * (stateless calls, per thread). Returned strings stay valid until the
 * next call on the same handle or thread.
 */
#ifndef ERP_H
#define ERP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum erp_status {
  ERP_OK = 0,
  ERP_ERROR_INVALID_ARGUMENT = 1, /* bad parameter value */
  ERP_ERROR_DATA = 2,             /* input data violates a precondition */
  ERP_ERROR_CONFIG = 3,           /* malformed configuration */
  ERP_ERROR_IO = 4,               /* file missing, unreadable, unwritable */
  ERP_ERROR_NUMERIC = 5,          /* iterative solver failed to converge */
  ERP_ERROR_INTERNAL = 6          /* invariant violation; please report */
} erp_status;

/* Library version as "major.minor.patch". */
const char* erp_version(void);

/* Stable lowercase name for a status code. */
const char* erp_status_name(erp_status status);

/* Message from the calling thread's most recent failed stateless call;
 * empty string if the last call succeeded. */
const char* erp_last_error(void);

/* ---- batch pipeline ---------------------------------------------------
 *
 * A handle wraps one parsed configuration file plus run options. Stages
 * exchange artifacts through the configured work directory; an advisory
 * lock file serializes concurrent runs.
 */
typedef struct erp_pipeline erp_pipeline;

/* Parses the configuration file and allocates a handle. On failure *out
 * is NULL and the message is available via erp_last_error(). */
erp_status erp_pipeline_create(const char* config_path, erp_pipeline** out);

/* Overrides the configuration's root seed. */
erp_status erp_pipeline_set_seed(erp_pipeline* p, uint64_t seed);

/* Nonzero: the evaluate stage reuses the whole-dataset feature selection
 * instead of reselecting inside each training fold. This leaks test
 * information and inflates accuracy; off by default. */
erp_status erp_pipeline_set_leaky(erp_pipeline* p, int leaky);

/* Redirects the next single-stage run's artifact directory. Pass NULL to
 * restore the default work_dir/<stage> layout. */
erp_status erp_pipeline_set_stage_dir(erp_pipeline* p, const char* dir);

/* Runs one stage: "synth", "preprocess", "extract", "select", "train",
 * "evaluate", "roi" or "report". */
erp_status erp_pipeline_run_stage(erp_pipeline* p, const char* stage_name);

/* Runs every stage in order under a single lock acquisition. The synth
 * stage is skipped when the configuration names an input directory. */
erp_status erp_pipeline_run_all(erp_pipeline* p);

/* Message from the handle's most recent failed call; empty string if the
 * last call succeeded. NULL-safe. */
const char* erp_pipeline_last_error(const erp_pipeline* p);

/* NULL-safe. */
void erp_pipeline_destroy(erp_pipeline* p);

/* ---- stateless signal operations --------------------------------------
 *
 * Array arguments are caller-allocated. Input and output may not alias.
 */

/* Zero-phase FIR bandpass (lo_hz = 0 gives a lowpass). `output` receives
 * n samples. */
erp_status erp_bandpass_filter(const double* input, size_t n,
                               double rate_hz, double lo_hz, double hi_hz,
                               double* output);

/* Anti-aliased downsampling by an integer factor. `output` must hold
 * ceil(n / factor) values; the count actually written goes to *output_n
 * and the new sampling rate to *output_rate_hz. */
erp_status erp_decimate(const double* input, size_t n, double rate_hz,
                        size_t factor, double* output, size_t* output_n,
                        double* output_rate_hz);

/* Multilevel wavelet low/high split. `lowpass_out` and `highpass_out`
 * each receive n samples; the highpass part is exactly the input minus
 * the lowpass part.
 * symmetric_boundary: 0 = periodic extension, nonzero = symmetric. */
erp_status erp_wavelet_split(const double* input, size_t n, size_t levels,
                             int symmetric_boundary, double* lowpass_out,
                             double* highpass_out);

/* Neighborhood-contrast feature weights for a binary-labeled matrix.
 * `matrix` is row-major n_samples x n_features, labels are 0 or 1 with
 * at least k_neighbors + 1 samples per class, and `weights_out` receives
 * n_features values. */
erp_status erp_relieff_weights(const double* matrix, const int* labels,
                               size_t n_samples, size_t n_features,
                               size_t k_neighbors, double* weights_out);

#ifdef __cplusplus
}
#endif

#endif /* ERP_H */
