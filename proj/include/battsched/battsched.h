/*
 * battsched - battery scheduling benchmark library, C interface.
 *
 * The core is C++; this header is the stable boundary for other languages
 * and for the bundled CLI. All objects are opaque handles created and
 * destroyed here. Functions return BATTSCHED_OK (0) on success or an error
 * class matching the CLI exit codes; battsched_last_error() describes the
 * most recent failure on the calling thread.
 *
 * Configuration documents are JSON strings; the schema is described in the
 * project README.
 */

#ifndef BATTSCHED_H
#define BATTSCHED_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum battsched_status {
  BATTSCHED_OK = 0,
  BATTSCHED_ERR_CONFIG = 2,  /* bad configuration or arguments */
  BATTSCHED_ERR_DATA = 3,    /* coverage, format or numeric-domain problems */
  BATTSCHED_ERR_SOLVER = 4,  /* LP solver failure */
  BATTSCHED_ERR_INTERNAL = 5
} battsched_status;

const char* battsched_version(void);

/* Message for the last failure on this thread; valid until the next call. */
const char* battsched_last_error(void);

typedef struct battsched_env battsched_env;
typedef struct battsched_archive battsched_archive;
typedef struct battsched_trace battsched_trace;

/* ----------------------------------------------------------- environments */

/* Synthetic district from a full experiment config document. */
battsched_status battsched_env_create(const char* config_json,
                                      battsched_env** out);
battsched_status battsched_env_write_csv(const battsched_env* env,
                                         const char* buildings_csv,
                                         const char* district_csv);
void battsched_env_free(battsched_env* env);

/* number of hours covered / number of buildings */
battsched_status battsched_env_hours(const battsched_env* env, long long* out);
battsched_status battsched_env_buildings(const battsched_env* env, int* out);

/* ---------------------------------------------------------------- archives */

/* Rolling-origin archive generated from the config's forecast source with
 * revision interval v_f (scenario archive when the config enables
 * stochastic mode). */
battsched_status battsched_archive_generate(const battsched_env* env,
                                            const char* config_json,
                                            long long v_f,
                                            battsched_archive** out);
battsched_status battsched_archive_read_csv(const char* path, const char* kind,
                                            battsched_archive** out);
battsched_status battsched_archive_write_csv(const battsched_archive* archive,
                                             const char* path);
void battsched_archive_free(battsched_archive* archive);

/* Archive-level metric against the environment's district base load.
 * Metrics: "mae", "mac_v", "mac_h", "es", "emd_v", "emd_h". committed_span
 * restricts each window to the hours it is in force (0 = full window). */
battsched_status battsched_archive_metric(const battsched_archive* archive,
                                          const battsched_env* env,
                                          const char* metric,
                                          long long committed_span,
                                          double* out);

/* ------------------------------------------------------------------- runs */

/* Runs the configured policy over n_hours executed hours. */
battsched_status battsched_run_policy(const battsched_env* env,
                                      const battsched_archive* archive,
                                      const char* config_json,
                                      long long n_hours,
                                      battsched_trace** out);
battsched_status battsched_trace_write_csv(const battsched_trace* trace,
                                           const char* path);
/* KPI report as a JSON string; free with battsched_string_free. */
battsched_status battsched_trace_score(const battsched_trace* trace,
                                       const battsched_env* env,
                                       int include_grid, char** kpi_json);
battsched_status battsched_trace_realized_cost(const battsched_trace* trace,
                                               const battsched_env* env,
                                               double beta, double w_co2,
                                               double* out);
void battsched_trace_free(battsched_trace* trace);
void battsched_string_free(char* s);

/* ----------------------------------------------------------------- bounds */

/* params_json keys: T, beta, diam, g_lip, alpha, sigma, a, c, opt_cost. */
battsched_status battsched_bound_iid(const char* params_json, long long v,
                                     double* out);
battsched_status battsched_bound_expdecay(const char* params_json, long long v,
                                          double* out);
battsched_status battsched_fv_norm_expdecay(const char* params_json,
                                            long long v, double* out);

/* ------------------------------------------------------------- recipes */

battsched_status battsched_cmd_gen_data(const char* config_json,
                                        const char* out_dir);
battsched_status battsched_cmd_sweep(const char* config_json,
                                     const char* out_dir);
battsched_status battsched_cmd_curves(const char* config_json,
                                      const char* out_dir);
battsched_status battsched_cmd_correlate(const char* curves_csv,
                                         const char* out_path);
battsched_status battsched_cmd_bounds(const char* params_json, long long v_max,
                                      const char* out_path);
battsched_status battsched_cmd_simulate(const char* config_json,
                                        const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* BATTSCHED_H */
