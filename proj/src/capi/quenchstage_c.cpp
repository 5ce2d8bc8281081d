#include "quenchstage/quenchstage.h"

#include <exception>
#include <new>
#include <string>

#include "config.hpp"
#include "drivers.hpp"
#include "error.hpp"
#include "report_io.hpp"
#include "verify.hpp"

struct qs_stagewise_config {
    quenchstage::StagewiseConfig cfg;
};
struct qs_direct_config {
    quenchstage::DirectConfig cfg;
};
struct qs_stagewise_run {
    quenchstage::StagewiseReport report;
};
struct qs_direct_run {
    quenchstage::DirectReport report;
};
struct qs_verify_report {
    quenchstage::VerifyReport report;
    std::string json;
};

namespace {

thread_local std::string g_last_error;

qs_status to_status(quenchstage::ErrorCode code) {
    using quenchstage::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return QS_ERR_INVALID_ARGUMENT;
        case ErrorCode::Config: return QS_ERR_CONFIG;
        case ErrorCode::Numerical: return QS_ERR_NUMERICAL;
        case ErrorCode::InadmissibleTransfer: return QS_ERR_INADMISSIBLE_TRANSFER;
        case ErrorCode::RunawayStage: return QS_ERR_RUNAWAY_STAGE;
        case ErrorCode::Io: return QS_ERR_IO;
        case ErrorCode::Internal: return QS_ERR_INTERNAL;
    }
    return QS_ERR_INTERNAL;
}

qs_status fail_with(qs_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

// Runs f, mapping exceptions to status codes and recording the message.
template <class F>
qs_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return QS_OK;
    } catch (const quenchstage::Error& e) {
        return fail_with(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail_with(QS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail_with(QS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail_with(QS_ERR_INTERNAL, "unknown exception");
    }
}

#define QS_REQUIRE_ARG(cond, msg) \
    if (!(cond)) return fail_with(QS_ERR_INVALID_ARGUMENT, msg)

qs_continuation to_c(const quenchstage::ContinuationReport& c) {
    return {c.q_star,
            c.initial_energy,
            c.budget,
            c.threshold,
            c.inequality_holds ? 1 : 0,
            c.window_nongrowing ? 1 : 0,
            c.hypothesis_applicable ? 1 : 0};
}

}  // namespace

extern "C" {

QS_API const char* qs_version(void) { return quenchstage::kVersion; }

QS_API const char* qs_status_string(qs_status status) {
    switch (status) {
        case QS_OK: return "ok";
        case QS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case QS_ERR_CONFIG: return "configuration error";
        case QS_ERR_NUMERICAL: return "numerical failure";
        case QS_ERR_INADMISSIBLE_TRANSFER: return "inadmissible transfer";
        case QS_ERR_RUNAWAY_STAGE: return "runaway stage";
        case QS_ERR_IO: return "i/o error";
        case QS_ERR_UNKNOWN_SUITE: return "unknown verify suite";
        case QS_ERR_INTERNAL: return "internal error";
    }
    return "unrecognized status";
}

QS_API const char* qs_last_error(void) { return g_last_error.c_str(); }

// ---- configuration ----

QS_API qs_status qs_stagewise_config_default(qs_stagewise_config** out) {
    QS_REQUIRE_ARG(out, "null output pointer");
    return guarded([&] { *out = new qs_stagewise_config{}; });
}

QS_API qs_status qs_stagewise_config_load(const char* path, qs_stagewise_config** out) {
    QS_REQUIRE_ARG(path && out, "null argument");
    return guarded([&] { *out = new qs_stagewise_config{quenchstage::load_stagewise_config(path)}; });
}

QS_API qs_status qs_stagewise_config_parse(const char* text, qs_stagewise_config** out) {
    QS_REQUIRE_ARG(text && out, "null argument");
    return guarded([&] { *out = new qs_stagewise_config{quenchstage::parse_stagewise_config(text)}; });
}

QS_API qs_status qs_stagewise_config_set(qs_stagewise_config* cfg, const char* key, double value) {
    QS_REQUIRE_ARG(cfg && key, "null argument");
    return guarded([&] { quenchstage::set_config_value(cfg->cfg, key, value); });
}

QS_API qs_status qs_stagewise_config_get(const qs_stagewise_config* cfg, const char* key, double* value) {
    QS_REQUIRE_ARG(cfg && key && value, "null argument");
    return guarded([&] { *value = quenchstage::get_config_value(cfg->cfg, key); });
}

QS_API void qs_stagewise_config_destroy(qs_stagewise_config* cfg) { delete cfg; }

QS_API qs_status qs_direct_config_default(qs_direct_config** out) {
    QS_REQUIRE_ARG(out, "null output pointer");
    return guarded([&] { *out = new qs_direct_config{}; });
}

QS_API qs_status qs_direct_config_load(const char* path, qs_direct_config** out) {
    QS_REQUIRE_ARG(path && out, "null argument");
    return guarded([&] { *out = new qs_direct_config{quenchstage::load_direct_config(path)}; });
}

QS_API qs_status qs_direct_config_parse(const char* text, qs_direct_config** out) {
    QS_REQUIRE_ARG(text && out, "null argument");
    return guarded([&] { *out = new qs_direct_config{quenchstage::parse_direct_config(text)}; });
}

QS_API qs_status qs_direct_config_set(qs_direct_config* cfg, const char* key, double value) {
    QS_REQUIRE_ARG(cfg && key, "null argument");
    return guarded([&] { quenchstage::set_config_value(cfg->cfg, key, value); });
}

QS_API qs_status qs_direct_config_get(const qs_direct_config* cfg, const char* key, double* value) {
    QS_REQUIRE_ARG(cfg && key && value, "null argument");
    return guarded([&] { *value = quenchstage::get_config_value(cfg->cfg, key); });
}

QS_API void qs_direct_config_destroy(qs_direct_config* cfg) { delete cfg; }

// ---- stagewise ----

QS_API qs_status qs_stagewise_run_create(const qs_stagewise_config* cfg, qs_stagewise_run** out) {
    QS_REQUIRE_ARG(cfg && out, "null argument");
    return guarded([&] { *out = new qs_stagewise_run{quenchstage::run_stagewise(cfg->cfg)}; });
}

QS_API size_t qs_stagewise_run_stage_count(const qs_stagewise_run* run) {
    return run ? run->report.stages.size() : 0;
}

QS_API size_t qs_stagewise_run_transition_count(const qs_stagewise_run* run) {
    return run ? run->report.transitions.size() : 0;
}

QS_API qs_status qs_stagewise_run_stage(const qs_stagewise_run* run, size_t index, qs_stage_record* out) {
    QS_REQUIRE_ARG(run && out, "null argument");
    QS_REQUIRE_ARG(index < run->report.stages.size(), "stage index out of range");
    const auto& s = run->report.stages[index];
    *out = {s.stage,          s.amplitude,       s.intervals,        s.mesh,         s.a2h2,
            s.full_steps,     s.tau,             s.scaled_time,      s.min_at_trigger, s.accumulated_time,
            s.energy_start,   s.energy_end,      s.K_start,          s.K_end,        s.coeff_start,
            s.coeff_end,      s.dissipation_sum, s.energy_increases, s.max_picard_iters, s.min_dt_star};
    return QS_OK;
}

QS_API qs_status qs_stagewise_run_transition(const qs_stagewise_run* run, size_t index, qs_transition_record* out) {
    QS_REQUIRE_ARG(run && out, "null argument");
    QS_REQUIRE_ARG(index < run->report.transitions.size(), "transition index out of range");
    const auto& t = run->report.transitions[index];
    *out = {t.from_stage,   t.amp_from,     t.amp_to,      t.intervals_from, t.intervals_to, t.energy_end,
            t.energy_ideal, t.energy_start, t.signed_jump, t.switch_defect,  t.outer_defect};
    return QS_OK;
}

QS_API qs_status qs_stagewise_run_initial_energy(const qs_stagewise_run* run, double* out) {
    QS_REQUIRE_ARG(run && out, "null argument");
    *out = run->report.initial_energy;
    return QS_OK;
}

QS_API qs_status qs_stagewise_run_continuation(const qs_stagewise_run* run, qs_continuation* out) {
    QS_REQUIRE_ARG(run && out, "null argument");
    QS_REQUIRE_ARG(run->report.continuation.has_value(), "run has no continuation check");
    *out = to_c(*run->report.continuation);
    return QS_OK;
}

QS_API qs_status qs_stagewise_run_window(const qs_stagewise_run* run, size_t index, double* area, double* q) {
    QS_REQUIRE_ARG(run && area && q, "null argument");
    QS_REQUIRE_ARG(run->report.continuation.has_value(), "run has no continuation check");
    const auto& c = *run->report.continuation;
    QS_REQUIRE_ARG(index < c.areas.size(), "window index out of range");
    *area = c.areas[index];
    *q = c.q[index];
    return QS_OK;
}

QS_API qs_status qs_stagewise_run_write(const qs_stagewise_run* run, const char* out_dir, const char* command) {
    QS_REQUIRE_ARG(run && out_dir, "null argument");
    return guarded([&] { quenchstage::write_stagewise_outputs(run->report, out_dir, command ? command : ""); });
}

QS_API void qs_stagewise_run_destroy(qs_stagewise_run* run) { delete run; }

QS_API qs_status qs_continuation_check(double initial_energy, double budget, const double* areas, size_t n_areas,
                                       double lambda, int window_bounded, qs_continuation* out) {
    QS_REQUIRE_ARG(out && (areas || n_areas == 0), "null argument");
    return guarded([&] {
        const auto mode = window_bounded ? quenchstage::WindowMode::BoundedWindow : quenchstage::WindowMode::FullDomain;
        *out = to_c(quenchstage::continuation_check(initial_energy, budget, {areas, n_areas}, lambda, mode));
    });
}

// ---- direct ----

QS_API qs_status qs_direct_run_create(const qs_direct_config* cfg, qs_direct_run** out) {
    QS_REQUIRE_ARG(cfg && out, "null argument");
    return guarded([&] { *out = new qs_direct_run{quenchstage::run_direct(cfg->cfg)}; });
}

QS_API qs_status qs_direct_run_result(const qs_direct_run* run, qs_direct_result* out) {
    QS_REQUIRE_ARG(run && out, "null argument");
    const auto& d = run->report;
    *out = {d.steps, d.energy_start, d.energy_end, d.min_v, d.max_u, d.energy_increases, d.max_picard_iters};
    return QS_OK;
}

QS_API qs_status qs_direct_run_write(const qs_direct_run* run, const char* out_dir, const char* command) {
    QS_REQUIRE_ARG(run && out_dir, "null argument");
    return guarded([&] { quenchstage::write_direct_outputs(run->report, out_dir, command ? command : ""); });
}

QS_API void qs_direct_run_destroy(qs_direct_run* run) { delete run; }

// ---- verify ----

QS_API qs_status qs_verify_run(const char* suite, qs_verify_report** out) {
    QS_REQUIRE_ARG(suite && out, "null argument");
    if (!quenchstage::is_verify_suite(suite))
        return fail_with(QS_ERR_UNKNOWN_SUITE, std::string("unknown verify suite '") + suite + "'");
    return guarded([&] {
        auto* r = new qs_verify_report{quenchstage::run_verify(suite), {}};
        r->json = r->report.to_json();
        *out = r;
    });
}

QS_API int qs_verify_passed(const qs_verify_report* report) { return report && report->report.passed() ? 1 : 0; }

QS_API size_t qs_verify_check_count(const qs_verify_report* report) {
    return report ? report->report.checks.size() : 0;
}

QS_API qs_status qs_verify_check_at(const qs_verify_report* report, size_t index, qs_verify_check* out) {
    QS_REQUIRE_ARG(report && out, "null argument");
    QS_REQUIRE_ARG(index < report->report.checks.size(), "check index out of range");
    const auto& c = report->report.checks[index];
    *out = {c.suite.c_str(), c.name.c_str(), c.measured, c.threshold, c.passed ? 1 : 0, c.informational ? 1 : 0,
            c.detail.c_str()};
    return QS_OK;
}

QS_API const char* qs_verify_json(const qs_verify_report* report) { return report ? report->json.c_str() : ""; }

QS_API void qs_verify_destroy(qs_verify_report* report) { delete report; }

}  // extern "C"
