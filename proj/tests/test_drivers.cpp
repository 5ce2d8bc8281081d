#include <doctest.h>

#include <cmath>

#include "drivers.hpp"
#include "energy.hpp"
#include "error.hpp"

using namespace quenchstage;

namespace {

const StagewiseReport& reference_run() {
    static const StagewiseReport r = run_stagewise(StagewiseConfig{});
    return r;
}

}  // namespace

TEST_SUITE("drivers") {

TEST_CASE("initial profile") {
    StagewiseConfig even;
    even.n0 = 8;  // puts a node on the center
    const Field w = initial_rescaled_profile(even);
    CHECK(w.at(4, 4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.min_interior() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.boundary == doctest::Approx(1.6666666667).epsilon(1e-10));

    const Field w9 = initial_rescaled_profile(StagewiseConfig{});
    CHECK(w9.min_interior() > 1.0);
    CHECK(w9.boundary == doctest::Approx(1.0 / 0.6));

    StagewiseConfig shifted;
    shifted.center_x = 0.4;
    CHECK_THROWS_AS(initial_rescaled_profile(shifted), Error);
}

TEST_CASE("trigger detection") {
    const Grid g = build_rescaled_grid(1.0, 4);
    Field prev(g, 0.9, 1.0), next(g, 0.9, 1.0);
    prev.interior[4] = 0.65;
    next.interior[4] = 0.60;
    const double thr = std::pow(2.0, -2.0 / 3.0);
    const auto t = detect_trigger(prev, next, thr);
    REQUIRE(t.has_value());
    CHECK(t->tau == doctest::Approx(0.4007895010512682).epsilon(1e-12));
    CHECK(t->event.interior[4] == doctest::Approx(thr).epsilon(1e-14));
    CHECK(t->event.boundary == 1.0);

    prev.interior[4] = 0.64;
    next.interior[4] = 0.64;
    CHECK_FALSE(detect_trigger(prev, next, thr).has_value());

    prev.interior[4] = 0.6;
    CHECK_THROWS_AS(detect_trigger(prev, next, thr), Error);
}

TEST_CASE("runaway cap without the source") {
    StagewiseConfig cfg;
    cfg.lambda = 0.0;
    cfg.max_steps_per_stage = 200;
    const StageState st{0, cfg.amp0, initial_rescaled_profile(cfg)};
    try {
        run_stage(st, cfg);
        FAIL("expected a runaway-stage error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RunawayStage);
    }
}

TEST_CASE("constant event transfers in closed form") {
    const double A = 0.6, lambda = 20.0;
    const TransferSpec spec = TransferSpec::make(A, 2);
    const Field event(build_rescaled_grid(A, 9), 1.0 / A, 1.0 / A);
    const auto [next, rec] = stage_transition(event, 0, spec, lambda);
    // constant fields: E = lambda / (1 + A^2 h^2 (N-1)^2 A) with 1/Y = A
    const double h = event.grid.mesh;
    const double e_from = lambda / (1.0 + A * A * h * h * 64.0 * A);
    const double a1 = spec.amp_to;
    const double e_to = lambda / (1.0 + a1 * a1 * h * h * 17.0 * 17.0 * a1);
    CHECK(rec.energy_end == doctest::Approx(e_from).epsilon(1e-13));
    CHECK(rec.energy_ideal == doctest::Approx(e_to).epsilon(1e-12));
    CHECK(rec.signed_jump == doctest::Approx(e_to - e_from).epsilon(1e-11));
    CHECK(rec.switch_defect == std::max(0.0, rec.signed_jump));
    CHECK(rec.intervals_to == 18);
}

TEST_CASE("inadmissible transfer lists the bad nodes") {
    const double A = 0.6;
    Field event(build_rescaled_grid(A, 6), 1.0, 1.0 / A);
    // a sharp spike drives cubic overshoot negative next to it
    event.at(3, 3) = 1e-3;
    event.at(3, 2) = 50.0;
    event.at(2, 3) = 50.0;
    try {
        stage_transition(event, 0, TransferSpec::make(A, 2), 20.0);
        FAIL("expected an inadmissible transfer");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InadmissibleTransfer);
        CHECK(std::string(e.what()).find("nonpositive prolonged values") != std::string::npos);
    }
}

TEST_CASE("zero stages") {
    StagewiseConfig cfg;
    cfg.max_stages = 0;
    const StagewiseReport r = run_stagewise(cfg);
    CHECK(r.stages.empty());
    CHECK(r.transitions.empty());
    CHECK(r.initial_energy == doctest::Approx(10.3614604375).epsilon(1e-9));
}

TEST_CASE("reference stagewise run") {
    const StagewiseReport& r = reference_run();
    REQUIRE(r.stages.size() == 4);
    REQUIRE(r.transitions.size() == 3);

    CHECK(r.stages[0].scaled_time == doctest::Approx(0.139155092).epsilon(1e-6));
    CHECK(r.stages[0].energy_start == doctest::Approx(10.3614604375).epsilon(1e-6));
    CHECK(r.stages[0].energy_end == doctest::Approx(9.9453726799).epsilon(1e-6));
    CHECK(r.stages[2].scaled_time == doctest::Approx(0.182219797).epsilon(1e-6));
    CHECK(r.stages[2].K_end == doctest::Approx(2.5409465219).epsilon(1e-6));
    CHECK(r.stages[3].amplitude == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(r.stages[1].amplitude == doctest::Approx(0.37797631).epsilon(1e-8));
    CHECK(r.stages[1].intervals == 18);
    CHECK(r.transitions[0].energy_start == doctest::Approx(9.5551471290).epsilon(1e-6));

    const double thr = std::pow(2.0, -2.0 / 3.0);
    const double a0c = 0.6 * 0.6 * 0.6;
    for (std::size_t m = 0; m < r.stages.size(); ++m) {
        const StageRecord& s = r.stages[m];
        CHECK(s.mesh == doctest::Approx(r.stages[0].mesh).epsilon(1e-14));
        CHECK(std::abs(s.min_at_trigger - thr) < 1e-9);
        CHECK(s.energy_end <= s.energy_start);
        CHECK(s.energy_increases == 0);
        CHECK(s.K_start >= 1.0);
        CHECK(s.coeff_end > 0.0);
        CHECK(s.coeff_end <= 20.0);
        CHECK(s.amplitude * s.amplitude * s.amplitude ==
              doctest::Approx(a0c * std::pow(2.0, -2.0 * static_cast<double>(m))).epsilon(1e-13));
    }
    for (std::size_t m = 0; m < r.transitions.size(); ++m) {
        CHECK(r.transitions[m].energy_ideal == r.transitions[m].energy_start);
        CHECK(r.transitions[m].outer_defect == 0.0);
        CHECK(r.balance_slack[m] <= 1e-12);
        CHECK(r.cumulative_slack[m] <= 1e-12);
    }
    REQUIRE(r.continuation.has_value());
    CHECK(r.continuation->mode == WindowMode::FullDomain);
    CHECK_FALSE(r.continuation->hypothesis_applicable);
    CHECK(r.continuation->budget == 0.0);
    CHECK(r.continuation->areas.size() == 4);
    CHECK(r.continuation->threshold == doctest::Approx(10.0 * r.continuation->q_star));
}

TEST_CASE("direct run") {
    const DirectReport d = run_direct(DirectConfig{});
    CHECK(d.steps == 160);
    CHECK(d.energy_start == doctest::Approx(7.545273587988).epsilon(1e-6));
    CHECK(d.energy_end == doctest::Approx(7.456582304139).epsilon(1e-6));
    CHECK(d.min_v == doctest::Approx(0.362574574560).epsilon(1e-6));
    CHECK(d.max_u == doctest::Approx(1.0 - d.min_v));

    DirectConfig heat;
    heat.lambda = 0.0;
    const DirectReport h = run_direct(heat);
    CHECK(h.energy_end < h.energy_start);
    CHECK(h.energy_increases == 0);

    DirectConfig none;
    none.final_time = 0.0;
    const DirectReport z = run_direct(none);
    CHECK(z.steps == 0);
    CHECK(z.energy_end == z.energy_start);

    DirectConfig bad;
    bad.final_time = 0.08025;  // not a multiple of dt
    CHECK_THROWS_AS(run_direct(bad), Error);
}

}  // TEST_SUITE
