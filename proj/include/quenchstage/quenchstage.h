#ifndef QUENCHSTAGE_H
#define QUENCHSTAGE_H

#include <stddef.h>

#if defined(QUENCHSTAGE_BUILDING)
#define QS_API __attribute__((visibility("default")))
#else
#define QS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
    QS_OK = 0,
    QS_ERR_INVALID_ARGUMENT = 1,
    QS_ERR_CONFIG = 2,
    QS_ERR_NUMERICAL = 3,
    QS_ERR_INADMISSIBLE_TRANSFER = 4,
    QS_ERR_RUNAWAY_STAGE = 5,
    QS_ERR_IO = 6,
    QS_ERR_UNKNOWN_SUITE = 7,
    QS_ERR_INTERNAL = 8
} qs_status;

QS_API const char* qs_version(void);
QS_API const char* qs_status_string(qs_status status);
/* Message of the last failing call on this thread; "" if none. */
QS_API const char* qs_last_error(void);

/* ---- configuration ------------------------------------------------------ */

typedef struct qs_stagewise_config qs_stagewise_config;
typedef struct qs_direct_config qs_direct_config;

/* Keys: lambda u0_amplitude center_x center_y A0 k N0 ds max_stages
   trigger_threshold (read only) max_steps_per_stage */
QS_API qs_status qs_stagewise_config_default(qs_stagewise_config** out);
QS_API qs_status qs_stagewise_config_load(const char* path, qs_stagewise_config** out);
QS_API qs_status qs_stagewise_config_parse(const char* text, qs_stagewise_config** out);
QS_API qs_status qs_stagewise_config_set(qs_stagewise_config* cfg, const char* key, double value);
QS_API qs_status qs_stagewise_config_get(const qs_stagewise_config* cfg, const char* key, double* value);
QS_API void qs_stagewise_config_destroy(qs_stagewise_config* cfg);

/* Keys: lambda N dt T u0_amplitude */
QS_API qs_status qs_direct_config_default(qs_direct_config** out);
QS_API qs_status qs_direct_config_load(const char* path, qs_direct_config** out);
QS_API qs_status qs_direct_config_parse(const char* text, qs_direct_config** out);
QS_API qs_status qs_direct_config_set(qs_direct_config* cfg, const char* key, double value);
QS_API qs_status qs_direct_config_get(const qs_direct_config* cfg, const char* key, double* value);
QS_API void qs_direct_config_destroy(qs_direct_config* cfg);

/* ---- stagewise run ------------------------------------------------------ */

typedef struct qs_stage_record {
    int stage;
    double amplitude;
    int intervals;
    double mesh;
    double a2h2;
    long full_steps;
    double tau;
    double scaled_time;
    double min_at_trigger;
    double accumulated_time;
    double energy_start;
    double energy_end;
    double K_start;
    double K_end;
    double coeff_start;
    double coeff_end;
    double dissipation_sum;
    long energy_increases;
    int max_picard_iters;
    double min_dt_star;
} qs_stage_record;

typedef struct qs_transition_record {
    int from_stage;
    double amp_from;
    double amp_to;
    int intervals_from;
    int intervals_to;
    double energy_end;
    double energy_ideal;
    double energy_start;
    double signed_jump;
    double switch_defect;
    double outer_defect;
} qs_transition_record;

typedef struct qs_continuation {
    double q_star;
    double initial_energy;
    double budget;
    double threshold;
    int inequality_holds;
    int window_nongrowing;
    int hypothesis_applicable;
} qs_continuation;

typedef struct qs_stagewise_run qs_stagewise_run;

QS_API qs_status qs_stagewise_run_create(const qs_stagewise_config* cfg, qs_stagewise_run** out);
QS_API size_t qs_stagewise_run_stage_count(const qs_stagewise_run* run);
QS_API size_t qs_stagewise_run_transition_count(const qs_stagewise_run* run);
QS_API qs_status qs_stagewise_run_stage(const qs_stagewise_run* run, size_t index, qs_stage_record* out);
QS_API qs_status qs_stagewise_run_transition(const qs_stagewise_run* run, size_t index, qs_transition_record* out);
QS_API qs_status qs_stagewise_run_initial_energy(const qs_stagewise_run* run, double* out);
/* QS_ERR_INVALID_ARGUMENT when the run produced no continuation check. */
QS_API qs_status qs_stagewise_run_continuation(const qs_stagewise_run* run, qs_continuation* out);
/* Window area |Q_m| = h^2 (N+1)^2 and factor q_m of stage `index`. */
QS_API qs_status qs_stagewise_run_window(const qs_stagewise_run* run, size_t index, double* area, double* q);
/* Writes stages.csv, feedback.csv, transitions.csv, ledger.json, manifest_stagewise.json. */
QS_API qs_status qs_stagewise_run_write(const qs_stagewise_run* run, const char* out_dir, const char* command);
QS_API void qs_stagewise_run_destroy(qs_stagewise_run* run);

/* Window-factor check from externally supplied areas |Q_m|; window_bounded
   selects the bounded-window mode. */
QS_API qs_status qs_continuation_check(double initial_energy, double budget, const double* areas, size_t n_areas,
                                       double lambda, int window_bounded, qs_continuation* out);

/* ---- direct run --------------------------------------------------------- */

typedef struct qs_direct_result {
    long steps;
    double energy_start;
    double energy_end;
    double min_v;
    double max_u;
    long energy_increases;
    int max_picard_iters;
} qs_direct_result;

typedef struct qs_direct_run qs_direct_run;

QS_API qs_status qs_direct_run_create(const qs_direct_config* cfg, qs_direct_run** out);
QS_API qs_status qs_direct_run_result(const qs_direct_run* run, qs_direct_result* out);
/* Writes direct.json and manifest_direct.json. */
QS_API qs_status qs_direct_run_write(const qs_direct_run* run, const char* out_dir, const char* command);
QS_API void qs_direct_run_destroy(qs_direct_run* run);

/* ---- verification ------------------------------------------------------- */

typedef struct qs_verify_check {
    const char* suite;
    const char* name;
    double measured;
    double threshold;
    int passed;
    int informational;
    const char* detail;
} qs_verify_check;

typedef struct qs_verify_report qs_verify_report;

/* suite: green unisolvence edge laplace dissipation oracle changevar all */
QS_API qs_status qs_verify_run(const char* suite, qs_verify_report** out);
QS_API int qs_verify_passed(const qs_verify_report* report);
QS_API size_t qs_verify_check_count(const qs_verify_report* report);
/* Strings stay valid until the report is destroyed. */
QS_API qs_status qs_verify_check_at(const qs_verify_report* report, size_t index, qs_verify_check* out);
QS_API const char* qs_verify_json(const qs_verify_report* report);
QS_API void qs_verify_destroy(qs_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif
