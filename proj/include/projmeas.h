/*
 * projmeas C API.
 *
 * Finitely additive measures on the projection lattices of finite-dimensional
 * von Neumann algebras (direct sums of complex matrix blocks): evaluation,
 * reconstruction of the unique bounded linear extension, additivity and
 * linearity audits, functional norm bounds, and nonlinearity certificates for
 * the 2x2 obstruction.
 *
 * Conventions:
 *   - Structured data crosses the boundary as UTF-8 JSON strings; strings
 *     returned through char** out-parameters are heap-allocated and must be
 *     released with pm_string_free().
 *   - Opaque handles are created by pm_*_from_json and released with the
 *     matching pm_*_free; handles are immutable and safe to share between
 *     threads.
 *   - Every function returns a pm_status; on failure pm_last_error() gives a
 *     thread-local diagnostic for the most recent failing call.
 */

#ifndef PROJMEAS_H
#define PROJMEAS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PM_API __declspec(dllexport)
#else
#define PM_API __attribute__((visibility("default")))
#endif

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_PARSE = 1,          /* malformed JSON or schema violation */
  PM_ERR_SHAPE = 2,          /* algebra shapes disagree */
  PM_ERR_MALFORMED = 3,      /* element violates a structural invariant */
  PM_ERR_DOMAIN = 4,         /* precondition violated */
  PM_ERR_UNEVALUABLE = 5,    /* table measure miss with no oracle */
  PM_ERR_REPRESENTATION = 6, /* representation cannot evaluate the input */
  PM_ERR_DEGENERATE = 7,     /* degenerate input (e.g. central measure) */
  PM_ERR_NULL_ARG = 8,
  PM_ERR_INTERNAL = 9
} pm_status;

/* Matches the CLI exit-code contract. */
typedef enum pm_extension_status {
  PM_EXTENDED = 0,
  PM_I2_OBSTRUCTION = 2,
  PM_NOT_A_MEASURE = 3
} pm_extension_status;

typedef struct pm_measure pm_measure;
typedef struct pm_element pm_element;

PM_API const char* pm_version(void);

/* Thread-local message for the most recent failing call on this thread. */
PM_API const char* pm_last_error(void);

PM_API void pm_string_free(char* s);

/* ----------------------------------------------------------- handles */

PM_API pm_status pm_measure_from_json(const char* json, pm_measure** out);
PM_API void pm_measure_free(pm_measure* m);
PM_API pm_status pm_measure_to_json(const pm_measure* m, char** json_out);

PM_API pm_status pm_element_from_json(const char* json, pm_element** out);
PM_API void pm_element_free(pm_element* e);
PM_API pm_status pm_element_to_json(const pm_element* e, char** json_out);

/* -------------------------------------------------------- operations */

/* Measure value at a projection; out_re_im receives {Re, Im}. The element is
 * validated as a projection at tolerance tol. */
PM_API pm_status pm_evaluate(const pm_measure* m, const pm_element* projection,
                             double tol, double out_re_im[2]);

/* Quasi-linear spectral extension omega at an arbitrary element. */
PM_API pm_status pm_omega(const pm_measure* m, const pm_element* x, double tol,
                          double out_re_im[2]);

/* Reconstructs the representing matrix by solving the spanning-family linear
 * system per block and verifying on sampled projections. result_json_out
 * receives the serialized result {"status","rho","residual","verified_on"};
 * ext_status_out (optional) receives the trichotomy. */
PM_API pm_status pm_reconstruct(const pm_measure* m, double tol, int verify_samples,
                                uint64_t seed, int* ext_status_out,
                                char** result_json_out);

/* Additivity check, linearity audit and (trace-form only) the trace-norm
 * identity |2 alpha(1) - mu(1)| = ||rho||_1, combined in one report. */
PM_API pm_status pm_audit(const pm_measure* m, int trials, uint64_t seed,
                          double tol, char** report_json_out);

/* Empirical norm bound for the functional x -> trace(rho x):
 * {"trace_norm": ..., "four_sup": ...} with trace_norm <= four_sup. */
PM_API pm_status pm_norm_bound(const pm_element* rho, int samples, uint64_t seed,
                               char** report_json_out);

/* Minimax nonlinearity certificate for a frame2 measure on a deterministic
 * Fibonacci sphere grid. csv_out (optional) receives the per-grid-point trace
 * "n_z,mu,fit". */
PM_API pm_status pm_nonlinearity_certificate(const pm_measure* m, int grid_size,
                                             char** cert_json_out, char** csv_out);

/* Builds a fixture measure from a JSON config:
 *   {"kind":"trace_form","shape":{"blocks":[3]},"seed":1,"complex":false}
 *   {"kind":"frame2","c":1.0,"coeffs":[0,0,0,0.5]}
 *   {"kind":"table_trace_sq","shape":{"blocks":[3]}}
 * and returns the measure JSON. */
PM_API pm_status pm_gen_fixture(const char* config_json, char** measure_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROJMEAS_H */
