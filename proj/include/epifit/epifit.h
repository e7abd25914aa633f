/*
 * epifit — parameter estimation for discrete-time epidemic models by
 * rejection sampling over candidate grids, with the sample-size bounds
 * that size the sampling effort.
 *
 * C API: opaque handles, integer status codes, thread-local error text.
 * Strings returned through handle accessors stay valid until the handle
 * is freed; epifit_last_error() is valid until the next failing call on
 * the same thread.
 */

#ifndef EPIFIT_H
#define EPIFIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EPIFIT_API __declspec(dllexport)
#else
#define EPIFIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epifit_status {
    EPIFIT_OK = 0,
    EPIFIT_ERR_RUNTIME = 1,  /* internal failure                    */
    EPIFIT_ERR_ARGUMENT = 2, /* bad arguments or configuration      */
    EPIFIT_ERR_DATA = 3,     /* invalid input data                  */
    EPIFIT_ERR_GUARD = 4     /* a resource guard tripped            */
} epifit_status;

EPIFIT_API const char* epifit_version(void);

/* Message for the most recent failure on the calling thread. */
EPIFIT_API const char* epifit_last_error(void);

/* Progress and warnings (never results) are reported through the logger;
 * the default writes to stderr. Pass NULL to restore the default. */
typedef void (*epifit_log_fn)(const char* line, void* user);
EPIFIT_API void epifit_set_logger(epifit_log_fn fn, void* user);

/* ------------------------------------------------------------------ *
 * Direct model simulation                                             *
 * ------------------------------------------------------------------ */

/* Simulates the SIR difference system. `initial` is (S, I, R) proportions;
 * `out` receives (horizon+1)*3 doubles, row per day starting with the
 * initial state. */
EPIFIT_API epifit_status epifit_sir_simulate(double beta, double gamma,
                                             const double initial[3], int horizon,
                                             double* out);

/* Simulates the six-compartment SEIR system. `params` is (beta, tau_e,
 * tau_r, tau_s, tau_rs, tau_d, p_s); `initial` is (S, E, I, I_s, R, D)
 * counts; `out` receives (horizon+1)*6 doubles. */
EPIFIT_API epifit_status epifit_seir_simulate(const double params[7], double p_d,
                                              double population,
                                              const double initial[6], int horizon,
                                              double* out);

/* ------------------------------------------------------------------ *
 * Sample-size bounds                                                  *
 * ------------------------------------------------------------------ */

/* Binomial-index conventions for the improved bound. */
typedef enum epifit_index_rule {
    EPIFIT_INDEX_NEAREST = 0,
    EPIFIT_INDEX_CEILING = 1,
    EPIFIT_INDEX_CONTINUOUS = 2
} epifit_index_rule;

EPIFIT_API epifit_status epifit_bound_theorem1(double n, double epsilon,
                                               double h_cardinality, double* out);
EPIFIT_API epifit_status epifit_bound_corollary_m(double epsilon, double delta,
                                                  double h_cardinality, double* out);
EPIFIT_API epifit_status epifit_bound_eq9_m(double c, double delta, double g_mass,
                                            double p_good, double* out);
EPIFIT_API epifit_status epifit_bound_prop2(double c, double g_mass, double p_good,
                                            double n, epifit_index_rule rule,
                                            double* out);
EPIFIT_API epifit_status epifit_bound_eq10_m(double c, double delta, double g_mass,
                                             double p_good, epifit_index_rule rule,
                                             double* out);
EPIFIT_API epifit_status epifit_bound_min_meaningful_c(double delta, double p_good,
                                                       double* out);
EPIFIT_API epifit_status epifit_bound_prop3(uint64_t n, uint64_t p, double* lhs,
                                            double* rhs);

/* ------------------------------------------------------------------ *
 * Configured runs                                                     *
 * ------------------------------------------------------------------ */

typedef struct epifit_config epifit_config;
typedef struct epifit_result epifit_result;

EPIFIT_API epifit_status epifit_config_parse(const char* json_text,
                                             epifit_config** out);
EPIFIT_API epifit_status epifit_config_load(const char* path, epifit_config** out);

/* Applies a JSON value at a JSON pointer, e.g.
 * epifit_config_override(cfg, "/sampling/seed", "42"). */
EPIFIT_API epifit_status epifit_config_override(epifit_config* config,
                                                const char* pointer,
                                                const char* value_json);
EPIFIT_API void epifit_config_free(epifit_config* config);

/* Runs one of "simulate", "scan", "estimate", "bounds", "covid". The
 * result is a list of named documents (CSV/JSON text); the first is the
 * command's primary output and an effective-config echo is always
 * included. Identical config and seed produce byte-identical documents
 * for any worker count. */
EPIFIT_API epifit_status epifit_run(const epifit_config* config, const char* command,
                                    epifit_result** out);

EPIFIT_API size_t epifit_result_count(const epifit_result* result);
EPIFIT_API const char* epifit_result_name(const epifit_result* result, size_t index);
EPIFIT_API const char* epifit_result_content(const epifit_result* result, size_t index,
                                             size_t* length);
EPIFIT_API void epifit_result_free(epifit_result* result);

#ifdef __cplusplus
}
#endif

#endif /* EPIFIT_H */
