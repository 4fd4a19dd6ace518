/* qpf: C interface to the quantized predictor-feedback simulation and
 * verification toolkit.
 *
 * Usage pattern: load a scenario (JSON text or file), then either run it
 * (qpf_run_simulate) and query the run, or evaluate the static verification
 * report. All returned strings are heap-allocated JSON documents; release
 * them with qpf_string_free. All functions return a qpf status code; on
 * failure qpf_last_error() describes the most recent error in the calling
 * thread. */
#ifndef QPF_H
#define QPF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QPF_OK 0
#define QPF_ERR_INTERNAL 1
#define QPF_ERR_CONFIG 2    /* invalid scenario / parameters */
#define QPF_ERR_DIVERGED 3  /* simulation tripped the divergence guard */
#define QPF_ERR_CONDITION 4 /* strict verification: a feasibility check failed */

typedef struct qpf_scenario qpf_scenario;
typedef struct qpf_run qpf_run;

const char* qpf_version(void);

/* thread-local message for the last failure in this thread */
const char* qpf_last_error(void);

void qpf_string_free(char* s);

int qpf_scenario_from_json(const char* json_text, qpf_scenario** out);
int qpf_scenario_from_file(const char* path, qpf_scenario** out);
void qpf_scenario_free(qpf_scenario* s);

/* canonical serialized form (round-trips through qpf_scenario_from_json) */
int qpf_scenario_to_json(const qpf_scenario* s, char** out_json);

/* design constants with provenance plus feasibility checks */
int qpf_scenario_constants_json(const qpf_scenario* s, char** out_json);

/* static verification report (small gain, feasibility conditions, quantizer
 * property scan). With strict != 0 the call returns QPF_ERR_CONDITION when
 * the aggregate verdict fails; the report is produced either way. */
int qpf_verify_json(const qpf_scenario* s, int strict, char** out_json);

/* run the scenario; returns QPF_ERR_DIVERGED if the divergence guard
 * tripped (the partial run is still returned) */
int qpf_run_simulate(const qpf_scenario* s, qpf_run** out);
/* as above, overriding the scenario's transport backend:
 * "exact" or "laxfriedrichs" */
int qpf_run_simulate_backend(const qpf_scenario* s, const char* backend,
                             qpf_run** out);
void qpf_run_free(qpf_run* r);

/* run manifest: scenario echo, constants, checks, classification, analysis */
int qpf_run_summary_json(const qpf_run* r, char** out_json);
/* trajectory trace (t, state, control, zoom, phase, norm, envelope) */
int qpf_run_write_csv(const qpf_run* r, const char* path);
/* plot columns (t, norm, envelope) */
int qpf_run_write_plot_csv(const qpf_run* r, const char* path);

/* one run per value of `param` (e.g. "delta", "delay_d_s", "fixed_mu"),
 * results merged in input order; workers > 1 uses a thread pool */
int qpf_sweep_json(const qpf_scenario* s, const char* param,
                   const double* values, size_t n_values, int workers,
                   char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* QPF_H */
