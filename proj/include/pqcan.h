/* C API for the CAN handshake simulator. All functions are
 * thread-compatible: distinct handles may be used from distinct threads,
 * one handle must not be shared without external locking. Strings returned
 * through out-parameters use the two-call pattern: pass NULL buf to get
 * the required size (including the NUL), then call again. */
#ifndef PQCAN_H
#define PQCAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pqcan_status {
  PQCAN_OK = 0,
  PQCAN_ERR_INVALID_ARG = 1,
  PQCAN_ERR_PARSE = 2,
  PQCAN_ERR_NOT_FOUND = 3,
  PQCAN_ERR_IO = 4,
  PQCAN_ERR_RUNTIME = 5,
  PQCAN_ERR_PARTIAL = 6, /* campaign aborted, partial results available */
  PQCAN_ERR_BUFFER_TOO_SMALL = 7
} pqcan_status;

typedef struct pqcan_profile_set pqcan_profile_set;
typedef struct pqcan_run_config pqcan_run_config;
typedef struct pqcan_results pqcan_results;

/* "major.minor.patch", static storage. */
const char* pqcan_version(void);

/* Message for the last failure on this thread; empty string if none. */
const char* pqcan_last_error(void);

/* ---- profiles ---- */

pqcan_status pqcan_profile_set_load(const char* path,
                                    pqcan_profile_set** out);
pqcan_status pqcan_profile_set_parse(const char* text, const char* origin,
                                     pqcan_profile_set** out);
void pqcan_profile_set_free(pqcan_profile_set* set);

pqcan_status pqcan_profile_count(const pqcan_profile_set* set,
                                 size_t* out_count);
/* One summary line per profile: "name<TAB>kind<TAB>level<TAB>pk<TAB>sk
 * <TAB>ct_or_sig" (sizes in bytes). */
pqcan_status pqcan_profile_line(const pqcan_profile_set* set, size_t index,
                                char* buf, size_t* len);

/* ---- run configuration ---- */

pqcan_status pqcan_run_config_load(const char* path, pqcan_run_config** out);
pqcan_status pqcan_run_config_parse(const char* text, const char* origin,
                                    pqcan_run_config** out);
void pqcan_run_config_free(pqcan_run_config* cfg);

/* Dotted key override, e.g. "campaign.seed". */
pqcan_status pqcan_run_config_set(pqcan_run_config* cfg, const char* key,
                                  const char* value);

/* ---- campaign ---- */

/* done/total cell counts; return nonzero to abort after the current cell. */
typedef int (*pqcan_progress_fn)(size_t done, size_t total, void* user);

/* Runs the campaign described by cfg against the profile set. jobs = 0
 * means one worker. On abort returns PQCAN_ERR_PARTIAL and *out holds the
 * cells finished so far. */
pqcan_status pqcan_campaign_run(const pqcan_run_config* cfg,
                                const pqcan_profile_set* profiles,
                                unsigned jobs, pqcan_progress_fn progress,
                                void* user, pqcan_results** out);

/* ---- results ---- */

pqcan_status pqcan_results_load_csv(const char* path, pqcan_results** out);
void pqcan_results_free(pqcan_results* res);

pqcan_status pqcan_results_rows(const pqcan_results* res, size_t* out_rows);
pqcan_status pqcan_results_csv_string(const pqcan_results* res, char* buf,
                                      size_t* len);
pqcan_status pqcan_results_markdown_string(const pqcan_results* res,
                                           char* buf, size_t* len);
pqcan_status pqcan_results_write_csv(const pqcan_results* res,
                                     const char* path);
pqcan_status pqcan_results_write_markdown(const pqcan_results* res,
                                          const char* path);
/* Per-session CSV (header + one line per session); empty if the campaign
 * was run without session capture or the results came from a CSV file. */
pqcan_status pqcan_results_sessions_string(const pqcan_results* res,
                                           char* buf, size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* PQCAN_H */
