// One PASS/FAIL line per acceptance criterion. Links only the C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "quenchstage/quenchstage.h"

namespace {

struct RefStage {
    double A;
    int N;
    double h, a2h2, scaled, min_w, acc, e_start, e_end;
    double k_start, k_end, c_start, c_end;
};

// printed reference rows
const RefStage kRef[4] = {
    {6.000000e-1, 9, 2.39073046e-1, 2.05761317e-2, 0.139155092, 0.629960525, 0.0300574999, 10.3614604375,
     9.9453726799, 2.0058835332, 2.2215508842, 4.9707116366, 4.0524481366},
    {3.779763e-1, 18, 2.39073046e-1, 8.16564327e-3, 0.129075841, 0.629960525, 0.0370275953, 9.5551471290,
     9.4090656585, 2.3246248742, 2.4192042689, 3.7010438831, 3.4173142322},
    {2.381102e-1, 36, 2.39073046e-1, 3.24053768e-3, 0.182219797, 0.629960525, 0.0394875626, 9.2352717791,
     9.1292667294, 2.4728313793, 2.5409465219, 3.2707020972, 3.0976970784},
    {1.500000e-1, 72, 2.39073046e-1, 1.28600823e-3, 0.165448773, 0.629960525, 0.0400459522, 9.0483919516,
     8.9867082217, 2.5682440201, 2.6042191097, 3.0321970753, 2.9490012240},
};
const double kJumps[3] = {-0.39022555, -0.17379388, -0.08087478};

int failures = 0;

void line(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++failures;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    // ---- stagewise reference run ----
    qs_stagewise_config* cfg = nullptr;
    qs_stagewise_config_default(&cfg);
    qs_stagewise_run* run = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    const qs_status st = qs_stagewise_run_create(cfg, &run);
    const double stage_secs = seconds_since(t0);
    qs_stagewise_config_destroy(cfg);
    if (st != QS_OK) {
        std::printf("FAIL  stagewise run: %s\n", qs_last_error());
        return 1;
    }

    std::vector<qs_stage_record> stages(qs_stagewise_run_stage_count(run));
    for (size_t i = 0; i < stages.size(); ++i) qs_stagewise_run_stage(run, i, &stages[i]);
    std::vector<qs_transition_record> trans(qs_stagewise_run_transition_count(run));
    for (size_t i = 0; i < trans.size(); ++i) qs_stagewise_run_transition(run, i, &trans[i]);

    {
        bool ok = stages.size() == 4;
        double amp_closed = 0.0, amp_print = 0.0, h_abs = 0.0, a2h2_abs = 0.0, time_rel = 0.0, e_rel = 0.0,
               minw_abs = 0.0;
        for (size_t m = 0; ok && m < 4; ++m) {
            const auto& s = stages[m];
            const auto& r = kRef[m];
            ok = ok && s.intervals == r.N;
            amp_closed = std::max(amp_closed, rel(s.amplitude, 0.6 * std::pow(2.0, -2.0 * m / 3.0)));
            amp_print = std::max(amp_print, std::abs(s.amplitude - r.A));
            h_abs = std::max(h_abs, std::abs(s.mesh - r.h));
            a2h2_abs = std::max(a2h2_abs, std::abs(s.a2h2 - r.a2h2));
            time_rel = std::max({time_rel, rel(s.scaled_time, r.scaled), rel(s.accumulated_time, r.acc)});
            e_rel = std::max({e_rel, rel(s.energy_start, r.e_start), rel(s.energy_end, r.e_end)});
            minw_abs = std::max(minw_abs, std::abs(s.min_at_trigger - r.min_w));
        }
        ok = ok && amp_closed <= 1e-15 && amp_print <= 5e-7 && h_abs <= 1e-9 && a2h2_abs <= 1e-9 &&
             time_rel <= 1e-6 && e_rel <= 1e-6 && minw_abs <= 5e-10 && stage_secs <= 120.0;
        char d[512];
        std::snprintf(d, sizeof d,
                      "N_m exact; A_m vs A0 k^(-2m/3) rel %.1e, vs printed %.1e; h abs %.1e; A2h2 abs %.1e; "
                      "times rel %.1e; energies rel %.1e; min W abs %.1e; %.2f s",
                      amp_closed, amp_print, h_abs, a2h2_abs, time_rel, e_rel, minw_abs, stage_secs);
        line(ok, "stagewise reference rows", d);
    }

    {
        double worst = 0.0;
        for (size_t m = 0; m < std::min<size_t>(4, stages.size()); ++m) {
            const auto& s = stages[m];
            const auto& r = kRef[m];
            worst = std::max({worst, rel(s.K_start, r.k_start), rel(s.K_end, r.k_end), rel(s.coeff_start, r.c_start),
                              rel(s.coeff_end, r.c_end)});
        }
        line(stages.size() == 4 && worst <= 1e-6, "feedback reference rows",
             fmt("K and lambda K^-2 max rel error %.2e", worst));
    }

    {
        bool ok = trans.size() == 3;
        double worst = 0.0;
        for (size_t m = 0; ok && m < 3; ++m) {
            worst = std::max(worst, std::abs(trans[m].signed_jump - kJumps[m]));
            ok = ok && trans[m].signed_jump < 0.0 &&
                 std::abs(trans[m].signed_jump - (stages[m + 1].energy_start - stages[m].energy_end)) < 1e-14;
        }
        ok = ok && worst <= 1e-6;
        line(ok, "stage-to-stage energy jumps",
             fmt("%.8f %.8f %.8f", trans.size() > 2 ? trans[0].signed_jump : NAN,
                 trans.size() > 2 ? trans[1].signed_jump : NAN, trans.size() > 2 ? trans[2].signed_jump : NAN) +
                 fmt(", max abs error %.1e, all negative", worst));
    }

    // ---- direct run ----
    {
        qs_direct_config* dc = nullptr;
        qs_direct_config_default(&dc);
        qs_direct_run* dr = nullptr;
        const auto t1 = std::chrono::steady_clock::now();
        const qs_status ds = qs_direct_run_create(dc, &dr);
        const double secs = seconds_since(t1);
        qs_direct_config_destroy(dc);
        qs_direct_result r{};
        if (ds == QS_OK) qs_direct_run_result(dr, &r);
        const double e0 = rel(r.energy_start, 7.545273587988), e1 = rel(r.energy_end, 7.456582304139),
                     mv = rel(r.min_v, 0.362574574560);
        const bool ok = ds == QS_OK && r.steps == 160 && e0 <= 1e-6 && e1 <= 1e-6 && mv <= 1e-6 && secs <= 10.0;
        char d[256];
        std::snprintf(d, sizeof d, "E(0) %.12f, E(T) %.12f, min v %.12f; rel errors %.1e %.1e %.1e; %.3f s",
                      r.energy_start, r.energy_end, r.min_v, e0, e1, mv, secs);
        line(ok, "direct fixed-domain run", d);
        qs_direct_run_destroy(dr);
    }

    // ---- property suite ----
    {
        qs_verify_report* rep = nullptr;
        const qs_status vs = qs_verify_run("all", &rep);
        int failed = 0, counted = 0;
        if (vs == QS_OK) {
            for (size_t i = 0; i < qs_verify_check_count(rep); ++i) {
                qs_verify_check c;
                qs_verify_check_at(rep, i, &c);
                if (c.informational) {
                    std::printf("      info  [%s] %s: %.3e\n", c.suite, c.name, c.measured);
                    continue;
                }
                ++counted;
                failed += !c.passed;
                std::printf("      %s  [%s] %s: %.3e (limit %.1e)\n", c.passed ? "ok  " : "FAIL", c.suite, c.name,
                            c.measured, c.threshold);
            }
        }
        line(vs == QS_OK && qs_verify_passed(rep) && failed == 0, "property suite",
             fmt("%.0f of %.0f checks passed", counted - failed, counted));
        qs_verify_destroy(rep);
    }

    // ---- continuation diagnostics ----
    {
        qs_continuation c{};
        bool ok = qs_stagewise_run_continuation(run, &c) == QS_OK;
        double q_star = 1.0, budget = 0.0;
        for (size_t m = 0; ok && m < stages.size(); ++m) {
            double area = 0.0, q = 0.0;
            ok = qs_stagewise_run_window(run, m, &area, &q) == QS_OK;
            const double expect_area = stages[m].mesh * stages[m].mesh * (stages[m].intervals + 1.0) *
                                       (stages[m].intervals + 1.0);
            const double expect_q = expect_area <= 0.5 ? 1.0 : 1.0 / (2.0 * expect_area);
            ok = ok && rel(area, expect_area) < 1e-14 && rel(q, expect_q) < 1e-14;
            q_star = std::min(q_star, q);
        }
        for (const auto& t : trans) budget += t.switch_defect + 20.0 * t.outer_defect;
        ok = ok && c.budget == budget && std::abs(c.threshold - 10.0 * q_star) < 1e-15 && c.hypothesis_applicable == 0 &&
             c.window_nongrowing == 0;
        line(ok, "continuation diagnostics, full-domain run",
             fmt("q* %.6e, D* %.3g, threshold %.6e", q_star, budget, c.threshold) +
                 ", flagged outside the bounded-window hypothesis");

        const double small[] = {0.25};
        const double large[] = {2.0};
        qs_continuation a{}, b{};
        const bool sa = qs_continuation_check(1.0, 0.0, small, 1, 20.0, 1, &a) == QS_OK;
        const bool sb = qs_continuation_check(1.0, 0.0, large, 1, 20.0, 1, &b) == QS_OK;
        const bool ok2 = sa && sb && a.q_star == 1.0 && a.inequality_holds && a.threshold == 10.0 &&
                         b.q_star == 0.25 && b.inequality_holds && b.threshold == 2.5;
        line(ok2, "continuation diagnostics, synthetic bounded window",
             fmt("|Q|=0.25: q*=%g threshold %g verdict %g", a.q_star, a.threshold, a.inequality_holds) +
                 fmt("; q*=0.25 (|Q|=2): threshold %g verdict %g", b.threshold, b.inequality_holds));
    }
    qs_stagewise_run_destroy(run);

    std::printf("%s\n", failures == 0 ? "all acceptance criteria passed" : "acceptance criteria failed");
    return failures == 0 ? 0 : 1;
}
