#ifndef RPT_H
#define RPT_H

/* C interface to the reduced-process-tomography simulation library.
 *
 * All functions returning rpt_status use 0 for success and the CLI's exit
 * code taxonomy for failures; rpt_last_error() describes the most recent
 * failure on the calling thread.  Objects returned through out-parameters
 * are owned by the caller and released with the matching *_free function.
 * Out-parameters are untouched on failure.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rpt_status {
    RPT_OK = 0,
    RPT_USAGE_ERROR = 2,   /* bad arguments, unknown names, dimension caps */
    RPT_DATA_ERROR = 3,    /* unreadable/ill-formed files, invalid input data */
    RPT_NUMERIC_ERROR = 4  /* solver failures, internal consistency violations */
} rpt_status;

/* Library version as "major.minor.patch". */
const char* rpt_version(void);

/* Message for the last failure on this thread; empty string if none.
 * The pointer stays valid until the next failing call on the same thread. */
const char* rpt_last_error(void);

/* ---- experiment configuration and batch runs ---------------------------- */

typedef struct rpt_config rpt_config;

rpt_config* rpt_config_new(void);
void rpt_config_free(rpt_config* cfg);

/* Set one key=value pair (same keys as the CLI flags / config files). */
rpt_status rpt_config_set(rpt_config* cfg, const char* key, const char* value);

/* Merge a flat key=value config file into cfg; file values overwrite. */
rpt_status rpt_config_load(rpt_config* cfg, const char* path);

/* Run one subcommand (converge, weights, scramble, tomography, fisher,
 * fidelity) and write its CSV document to out_path ("-" or NULL = stdout). */
rpt_status rpt_run(const rpt_config* cfg, const char* subcommand, const char* out_path);

/* ---- dense operators ----------------------------------------------------- */

typedef struct rpt_operator rpt_operator;

rpt_status rpt_operator_load(const char* path, rpt_operator** out);
rpt_status rpt_operator_identity(long dim, rpt_operator** out);
rpt_status rpt_operator_save(const rpt_operator* op, const char* path);
void rpt_operator_free(rpt_operator* op);

long rpt_operator_dim(const rpt_operator* op);
rpt_status rpt_operator_entry(const rpt_operator* op, long row, long col, double* re,
                              double* im);

/* ---- Choi matrices ------------------------------------------------------- */

typedef struct rpt_choi rpt_choi;

/* Choi matrix of conjugation by a unitary on n qubits (dim must be 2^n). */
rpt_status rpt_choi_from_unitary(const rpt_operator* u, rpt_choi** out);
rpt_status rpt_choi_load(const char* path, rpt_choi** out);
rpt_status rpt_choi_save(const rpt_choi* c, const char* path);
void rpt_choi_free(rpt_choi* c);

int rpt_choi_qubits(const rpt_choi* c);
rpt_status rpt_choi_entry(const rpt_choi* c, long row, long col, double* re, double* im);

/* Channel integrity check (Hermitian, PSD, trace-preserving). */
rpt_status rpt_choi_validate(const rpt_choi* c);

/* Reduced Choi matrix on the subset given as a bitmask (bit q-1 = qubit q). */
rpt_status rpt_choi_reduce(const rpt_choi* c, unsigned subset_mask, rpt_choi** out);

/* Apply the channel to a density operator. */
rpt_status rpt_choi_apply(const rpt_choi* c, const rpt_operator* rho, rpt_operator** out);

/* Uhlmann fidelity of the normalized Choi states and the implied average
 * channel fidelity. */
rpt_status rpt_choi_process_fidelity(const rpt_choi* a, const rpt_choi* b,
                                     double* state_fidelity, double* avg_fidelity);

#ifdef __cplusplus
}
#endif

#endif /* RPT_H */
