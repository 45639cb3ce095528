#ifndef BPL_BPL_H
#define BPL_BPL_H

/*
 * C interface to the Boussinesq patch lab.
 *
 * All objects are opaque handles created by a *_create / *_execute / *_load
 * call and released with the matching *_free (which accepts NULL). Every
 * fallible call returns a bpl_status; on failure bpl_last_error() describes
 * the problem. The message is per thread and stays valid until the next
 * failing call on that thread. Handles are not synchronized: use one handle
 * from one thread at a time.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BPL_API __declspec(dllexport)
#else
#define BPL_API __attribute__((visibility("default")))
#endif

typedef enum bpl_status {
  BPL_OK = 0,
  BPL_ERR_INVALID_ARGUMENT = 1,
  BPL_ERR_CONFIG = 2,
  BPL_ERR_IO = 3,
  BPL_ERR_BAD_MAGIC = 4,
  BPL_ERR_VERSION_MISMATCH = 5,
  BPL_ERR_TRUNCATED = 6,
  BPL_ERR_MEAN_NOT_ZERO = 7,
  BPL_ERR_OUT_OF_BAND = 8,
  BPL_ERR_GRID_MISMATCH = 9,
  BPL_ERR_BLOWUP = 10,
  BPL_ERR_GEOMETRY = 11,
  BPL_ERR_DEGENERATE = 12,
  BPL_ERR_SAMPLER_TIME = 13,
  BPL_ERR_CFL = 14,
  BPL_ERR_INTERNAL = 99
} bpl_status;

/* Process exit codes used by the command-line front end. */
enum { BPL_EXIT_OK = 0, BPL_EXIT_USAGE = 1, BPL_EXIT_SCIENTIFIC = 2, BPL_EXIT_BLOWUP = 3 };

typedef enum bpl_kappa_kind { BPL_KAPPA_CONSTANT = 0, BPL_KAPPA_SIN = 1, BPL_KAPPA_TANH = 2 } bpl_kappa_kind;

typedef enum bpl_metric { BPL_METRIC_PI = 0, BPL_METRIC_OMEGA = 1, BPL_METRIC_FLOW = 2 } bpl_metric;

typedef struct bpl_config bpl_config;
typedef struct bpl_run bpl_run;
typedef struct bpl_pair bpl_pair;
typedef struct bpl_sweep bpl_sweep;
typedef struct bpl_state bpl_state;

BPL_API const char* bpl_version(void);
BPL_API const char* bpl_last_error(void);
/* Blowup time of the last failing call on this thread, or -1 if unknown. */
BPL_API double bpl_last_error_time(void);
BPL_API const char* bpl_status_name(bpl_status status);
/* Releases strings returned through char** out-parameters. */
BPL_API void bpl_string_free(char* s);

/* ---- configuration ---- */

BPL_API bpl_status bpl_config_create_default(bpl_config** out);
/* `required` is a comma-separated list of section names, or NULL. */
BPL_API bpl_status bpl_config_parse(const char* text, const char* required, bpl_config** out);
BPL_API bpl_status bpl_config_load(const char* path, const char* required, bpl_config** out);
BPL_API void bpl_config_free(bpl_config* cfg);

BPL_API bpl_status bpl_config_set_seed(bpl_config* cfg, uint64_t seed);
/* Viscosity of single runs (run subcommand). */
BPL_API bpl_status bpl_config_set_mu(bpl_config* cfg, double mu);
/* Evaluation time of pairs and sweeps. */
BPL_API bpl_status bpl_config_set_t_star(bpl_config* cfg, double t_star);
BPL_API bpl_status bpl_config_set_threads(bpl_config* cfg, int threads);
BPL_API bpl_status bpl_config_set_out_dir(bpl_config* cfg, const char* dir);
BPL_API const char* bpl_config_out_dir(const bpl_config* cfg);
BPL_API double bpl_config_t_star(const bpl_config* cfg);
/* Fully resolved document; release with bpl_string_free. */
BPL_API bpl_status bpl_config_to_text(const bpl_config* cfg, char** out_text);

/* ---- single run ---- */

typedef struct bpl_run_summary {
  int n;
  size_t snapshots;
  size_t steps;
  double t_end;
  double omega_linf;
  size_t monitor_channels;
  size_t violations;
  size_t probe_records;
} bpl_run_summary;

BPL_API bpl_status bpl_run_execute(const bpl_config* cfg, bpl_run** out);
BPL_API void bpl_run_free(bpl_run* run);
BPL_API bpl_status bpl_run_summarize(const bpl_run* run, bpl_run_summary* out);
/* Final state as a new handle. */
BPL_API bpl_status bpl_run_final_state(const bpl_run* run, bpl_state** out);
/* Writes the report files, the echoed config and (if enabled) the final
 * snapshot into out_dir; *exit_code receives BPL_EXIT_OK or
 * BPL_EXIT_SCIENTIFIC. */
BPL_API bpl_status bpl_run_write(const bpl_run* run, const bpl_config* cfg, const char* out_dir, int* exit_code);

/* ---- viscous/inviscid pair ---- */

typedef struct bpl_pair_row {
  double t;
  double mu;
  double p;
  double velocity;
  double theta;
  double pi;
  double omega;
  double flow;
} bpl_pair_row;

BPL_API bpl_status bpl_pair_execute(const bpl_config* cfg, double mu, bpl_pair** out);
BPL_API void bpl_pair_free(bpl_pair* pair);
BPL_API size_t bpl_pair_row_count(const bpl_pair* pair);
BPL_API bpl_status bpl_pair_row_at(const bpl_pair* pair, size_t index, bpl_pair_row* out);
BPL_API bpl_status bpl_pair_write(const bpl_pair* pair, const bpl_config* cfg, const char* out_dir, int* exit_code);

/* ---- rate sweep ---- */

typedef struct bpl_rate_summary {
  bpl_metric metric;
  double p; /* HUGE_VAL for the flow metric */
  double t_star;
  double slope;
  double theory;
  double residual;
  double floor;
  size_t points;
  size_t points_used;
  int monotone;
  int pass;
} bpl_rate_summary;

/* A failing run inside the sweep does not make this call fail: the returned
 * handle carries the partial results and bpl_sweep_failure reports why. */
BPL_API bpl_status bpl_sweep_execute(const bpl_config* cfg, bpl_sweep** out);
BPL_API void bpl_sweep_free(bpl_sweep* sweep);
BPL_API size_t bpl_sweep_report_count(const bpl_sweep* sweep);
BPL_API bpl_status bpl_sweep_report_at(const bpl_sweep* sweep, size_t index, bpl_rate_summary* out);
/* Rate report as a JSON object; release with bpl_string_free. */
BPL_API bpl_status bpl_sweep_report_json(const bpl_sweep* sweep, size_t index, char** out_json);
/* BPL_OK if every run finished, otherwise the failing run's status; the
 * message and blowup time are copied to the optional out-parameters. */
BPL_API bpl_status bpl_sweep_failure(const bpl_sweep* sweep, char** out_message, double* out_time);
BPL_API bpl_status bpl_sweep_write(const bpl_sweep* sweep, const bpl_config* cfg, const char* out_dir, int* exit_code);

/* ---- snapshots ---- */

BPL_API bpl_status bpl_snapshot_load(const char* path, bpl_kappa_kind kappa_hint, bpl_state** out);
BPL_API bpl_status bpl_snapshot_save(const bpl_state* state, const char* path);
BPL_API void bpl_state_free(bpl_state* state);
BPL_API bpl_status bpl_state_info(const bpl_state* state, int* n, double* t, double* mu, double* epsilon0);
/* Borrowed row-major views of n*n doubles, valid while the handle lives. */
BPL_API const double* bpl_state_omega(const bpl_state* state);
BPL_API const double* bpl_state_theta(const bpl_state* state);

/* Recomputes norms, monitors and probes from a time-ordered list of
 * snapshots and writes the report into out_dir. */
BPL_API bpl_status bpl_analyze(const char* const* paths, size_t count, const bpl_config* cfg, const char* out_dir,
                               int* exit_code);

/* ---- self test ---- */

typedef void (*bpl_selftest_callback)(const char* name, int pass, const char* detail, void* user);

BPL_API bpl_status bpl_selftest(const char* scratch_dir, bpl_selftest_callback callback, void* user, size_t* passed,
                                size_t* failed);

#ifdef __cplusplus
}
#endif

#endif /* BPL_BPL_H */
