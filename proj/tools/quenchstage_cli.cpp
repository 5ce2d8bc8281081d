// quenchstage stagewise --config <path>
// quenchstage direct --config <path>
// quenchstage verify <suite>
//
// Output directory: $QUENCHSTAGE_OUT (default ".").
// Exit codes: 0 ok, 1 verify failure, 2 config/usage/unknown suite,
// 3 numerical failure, 4 i/o error, 5 internal.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "quenchstage/quenchstage.h"

namespace {

int exit_code(qs_status s) {
    switch (s) {
        case QS_OK: return 0;
        case QS_ERR_INVALID_ARGUMENT:
        case QS_ERR_CONFIG:
        case QS_ERR_UNKNOWN_SUITE: return 2;
        case QS_ERR_NUMERICAL:
        case QS_ERR_INADMISSIBLE_TRANSFER:
        case QS_ERR_RUNAWAY_STAGE: return 3;
        case QS_ERR_IO: return 4;
        case QS_ERR_INTERNAL: return 5;
    }
    return 5;
}

int report(qs_status s) {
    std::fprintf(stderr, "quenchstage: %s: %s\n", qs_status_string(s), qs_last_error());
    return exit_code(s);
}

std::string out_dir() {
    const char* env = std::getenv("QUENCHSTAGE_OUT");
    return env && *env ? env : ".";
}

int cmd_stagewise(const std::string& config, const std::string& command) {
    qs_stagewise_config* cfg = nullptr;
    if (qs_status s = qs_stagewise_config_load(config.c_str(), &cfg); s != QS_OK) return report(s);
    qs_stagewise_run* run = nullptr;
    qs_status s = qs_stagewise_run_create(cfg, &run);
    qs_stagewise_config_destroy(cfg);
    if (s != QS_OK) return report(s);

    const std::string dir = out_dir();
    s = qs_stagewise_run_write(run, dir.c_str(), command.c_str());
    if (s == QS_OK) {
        std::printf("%-5s %-9s %-4s %-16s %-16s %-16s %-16s\n", "stage", "A_m", "N_m", "s*", "t_acc", "E_start",
                    "E_end");
        for (size_t i = 0; i < qs_stagewise_run_stage_count(run); ++i) {
            qs_stage_record r;
            qs_stagewise_run_stage(run, i, &r);
            std::printf("%-5d %-9.6f %-4d %-16.10f %-16.10f %-16.10f %-16.10f\n", r.stage, r.amplitude, r.intervals,
                        r.scaled_time, r.accumulated_time, r.energy_start, r.energy_end);
        }
        qs_continuation c;
        if (qs_stagewise_run_continuation(run, &c) == QS_OK)
            std::printf("continuation: E0 + D* = %.10f, threshold lambda q*/2 = %.10f, inequality %s%s\n",
                        c.initial_energy + c.budget, c.threshold, c.inequality_holds ? "holds" : "fails",
                        c.hypothesis_applicable ? "" : " (outside the bounded-window hypothesis)");
        std::printf("wrote outputs to %s\n", dir.c_str());
    }
    qs_stagewise_run_destroy(run);
    return s == QS_OK ? 0 : report(s);
}

int cmd_direct(const std::string& config, const std::string& command) {
    qs_direct_config* cfg = nullptr;
    if (qs_status s = qs_direct_config_load(config.c_str(), &cfg); s != QS_OK) return report(s);
    qs_direct_run* run = nullptr;
    qs_status s = qs_direct_run_create(cfg, &run);
    qs_direct_config_destroy(cfg);
    if (s != QS_OK) return report(s);

    const std::string dir = out_dir();
    s = qs_direct_run_write(run, dir.c_str(), command.c_str());
    if (s == QS_OK) {
        qs_direct_result r;
        qs_direct_run_result(run, &r);
        std::printf("steps %ld  E_start %.12f  E_end %.12f  min_v %.12f  max_u %.12f\n", r.steps, r.energy_start,
                    r.energy_end, r.min_v, r.max_u);
        std::printf("wrote outputs to %s\n", dir.c_str());
    }
    qs_direct_run_destroy(run);
    return s == QS_OK ? 0 : report(s);
}

int cmd_verify(const std::string& suite) {
    qs_verify_report* rep = nullptr;
    if (qs_status s = qs_verify_run(suite.c_str(), &rep); s != QS_OK) return report(s);
    for (size_t i = 0; i < qs_verify_check_count(rep); ++i) {
        qs_verify_check c;
        qs_verify_check_at(rep, i, &c);
        std::fprintf(stderr, "%s  [%s] %s: %.3e (limit %.1e)\n",
                     c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL"), c.suite, c.name, c.measured,
                     c.threshold);
    }
    std::printf("%s\n", qs_verify_json(rep));
    const bool ok = qs_verify_passed(rep);
    qs_verify_destroy(rep);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stagewise rescaling solver for the nonlocal deficit equation"};
    app.set_version_flag("--version", qs_version());
    app.require_subcommand(1);

    std::string stage_cfg, direct_cfg, suite;
    auto* stagewise = app.add_subcommand("stagewise", "run the stagewise rescaled computation");
    stagewise->add_option("--config", stage_cfg, "config file")->required();
    auto* direct = app.add_subcommand("direct", "run the fixed-domain physical computation");
    direct->add_option("--config", direct_cfg, "config file")->required();
    auto* verify = app.add_subcommand("verify", "run a property suite");
    verify->add_option("suite", suite, "green|unisolvence|edge|laplace|dissipation|oracle|changevar|all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string command;
    for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

    if (*stagewise) return cmd_stagewise(stage_cfg, command);
    if (*direct) return cmd_direct(direct_cfg, command);
    return cmd_verify(suite);
}
