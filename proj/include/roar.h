/* roar.h - C API for the ROAR micro-prediction engine.
 *
 * Opaque handles, integer status codes, no ownership surprises: every
 * *_free takes what the matching call handed out. Error details for the
 * calling thread are available via roar_last_error().
 */
#ifndef ROAR_H
#define ROAR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum roar_status {
  ROAR_OK = 0,
  ROAR_ERR_INVALID_ARGUMENT = 1, /* null handle, bad parameter */
  ROAR_ERR_PARSE = 2,            /* scenario/CSV parse or validation failure */
  ROAR_ERR_IO = 3,               /* file or socket trouble (incl. bind) */
  ROAR_ERR_RUNTIME = 4,          /* anything that went wrong mid-run */
} roar_status;

typedef struct roar_scenario roar_scenario;
typedef struct roar_report roar_report;
typedef struct roar_server roar_server;

/* Thread-local message for the most recent failure in this thread. */
const char* roar_last_error(void);
const char* roar_version(void);

/* ---- scenarios ---------------------------------------------------------- */

roar_status roar_scenario_load(const char* path, roar_scenario** out);
roar_status roar_scenario_parse(const char* json_text, roar_scenario** out);
void roar_scenario_set_seed(roar_scenario* sc, uint64_t seed);
void roar_scenario_free(roar_scenario* sc);

/* ---- simulation ---------------------------------------------------------- */

roar_status roar_simulate(const roar_scenario* sc, roar_report** out);

/* ---- reports ------------------------------------------------------------- */

/* Writes report.json, rounds.csv, epochs.csv into dir (created if needed). */
roar_status roar_report_write(const roar_report* rep, const char* dir);
/* Reads the summary back from a dir written by roar_report_write. */
roar_status roar_report_read(const char* dir, roar_report** out);

size_t roar_report_leaderboard_size(const roar_report* rep);
/* Leaderboard row i (descending payout, id breaking ties). The name pointer
 * stays valid until the report is freed. */
roar_status roar_report_leaderboard_entry(const roar_report* rep, size_t i,
                                          const char** name, double* payout);
uint64_t roar_report_settled_rounds(const roar_report* rep);
double roar_report_pot_charged_total(const roar_report* rep);
uint64_t roar_report_causality_violations(const roar_report* rep);
int roar_report_is_partial(const roar_report* rep);
void roar_report_free(roar_report* rep);

/* ---- leaderboard replay (independent verification fold) ------------------ */

/* Recomputes a leaderboard from a rounds.csv in one pass, checking every
 * logged payout against the scoring rule. variant: "inverse_squared_error"
 * or "rank_weighted". mismatches (if non-null) reports how many logged
 * payouts the rule failed to reproduce within 1e-9. */
roar_status roar_replay(const char* rounds_csv_path, const char* variant,
                        double epsilon, double rank_decay,
                        uint64_t* mismatches, roar_report** out);

/* ---- live service --------------------------------------------------------- */

/* Binds immediately (port 0 = ephemeral); run blocks until the scenario
 * horizon completes or roar_server_stop is called from another thread or a
 * signal handler. time_scale maps configured ms to wall ms; a non-zero
 * eager_rounds opens each round as soon as the previous one settles instead
 * of pacing by cadence (zero-latency replays). The final report must be
 * freed by the caller. */
roar_status roar_server_start(const roar_scenario* sc, uint16_t port,
                              double time_scale, int eager_rounds,
                              roar_server** out);
uint16_t roar_server_port(const roar_server* srv);
roar_status roar_server_run(roar_server* srv, roar_report** final_report);
void roar_server_stop(roar_server* srv);
void roar_server_free(roar_server* srv);

#ifdef __cplusplus
}
#endif

#endif /* ROAR_H */
