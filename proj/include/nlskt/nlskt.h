/* C interface to the nonlocal cross-diffusion simulation engine.
 *
 * All entry points are exception-free: failures surface as status codes
 * and a thread-local message retrievable via nlskt_last_error(). Handles
 * are opaque; every *_new/_load has a matching *_free.
 */
#ifndef NLSKT_H
#define NLSKT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlskt_status {
    NLSKT_OK = 0,
    NLSKT_ERR_CONFIG = 1,      /* parse/validation failure */
    NLSKT_ERR_KERNEL = 2,      /* degenerate kernel or rescaling */
    NLSKT_ERR_SOLVER = 3,      /* non-convergence, non-contraction, instability */
    NLSKT_ERR_LEDGER = 4,      /* inequality ledger violation */
    NLSKT_ERR_IO = 5,          /* file system / image format */
    NLSKT_ERR_RUN_FAILED = 6,  /* run finished with nonzero exit status */
    NLSKT_ERR_INVALID_ARG = 7, /* null handle or bad argument */
    NLSKT_ERR_INTERNAL = 8
} nlskt_status;

typedef struct nlskt_config nlskt_config;

const char* nlskt_version(void);

/* Message of the most recent failure on this thread; empty string if none. */
const char* nlskt_last_error(void);

/* Configuration lifecycle. A fresh default config is valid. */
nlskt_status nlskt_config_new(nlskt_config** out);
nlskt_status nlskt_config_load(const char* path, nlskt_config** out);
nlskt_status nlskt_config_from_string(const char* text, nlskt_config** out);
nlskt_status nlskt_config_override(nlskt_config* cfg, const char* key,
                                   const char* value);
void nlskt_config_free(nlskt_config* cfg);

/* Validation: returns NLSKT_OK or NLSKT_ERR_CONFIG with the itemized
 * violation list in nlskt_last_error(). */
nlskt_status nlskt_config_validate(const nlskt_config* cfg);

/* Emits the effective configuration into buf (NUL-terminated, truncated to
 * buflen). Returns the full length through *needed if non-null. */
nlskt_status nlskt_config_emit(const nlskt_config* cfg, char* buf,
                               unsigned long buflen, unsigned long* needed);

/* Subcommand runners; out_dir may be NULL to use the configured directory.
 * Artifacts (CSVs, snapshots, manifest.json) are written to the output
 * directory; the manifest marks incomplete runs. */
nlskt_status nlskt_run_simulate(const nlskt_config* cfg, const char* out_dir);
nlskt_status nlskt_run_sweep(const nlskt_config* cfg, const char* out_dir);
nlskt_status nlskt_run_verify(const nlskt_config* cfg, const char* out_dir);
nlskt_status nlskt_run_filter(const nlskt_config* cfg, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NLSKT_H */
