#include "drivers.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <string>

#include "energy.hpp"
#include "error.hpp"

namespace quenchstage {

double StagewiseConfig::trigger_threshold() const { return std::pow(static_cast<double>(k), -2.0 / 3.0); }

StepperConfig StagewiseConfig::stepper() const {
    StepperConfig s;
    s.ds = ds;
    s.lambda = lambda;
    return s;
}

void StagewiseConfig::validate() const {
    require(lambda >= 0.0, "stagewise config: lambda must be nonnegative");
    require(u0_amplitude >= 0.0 && u0_amplitude < 1.0, "stagewise config: u0_amplitude must lie in [0, 1)");
    // The rescaled square [-L0, L0]^2 maps onto the unit square only about its center.
    require(center_x == 0.5 && center_y == 0.5, "stagewise config: the full-domain run is centered at (0.5, 0.5)");
    require(amp0 > 0.0, "stagewise config: A0 must be positive");
    require(k >= 2, "stagewise config: k must be at least 2");
    require(n0 >= 2, "stagewise config: N0 must be at least 2");
    require(ds > 0.0, "stagewise config: ds must be positive");
    require(max_stages >= 0, "stagewise config: max_stages must be nonnegative");
    require(max_steps_per_stage > 0, "stagewise config: max_steps_per_stage must be positive");
}

long DirectConfig::step_count() const {
    const double ratio = final_time / dt;
    const long steps = std::lround(ratio);
    require(std::abs(ratio - static_cast<double>(steps)) <= 1e-9 * std::max(1.0, ratio),
            "direct config: T/dt must be an integer");
    return steps;
}

void DirectConfig::validate() const {
    require(lambda >= 0.0, "direct config: lambda must be nonnegative");
    require(n >= 2, "direct config: N must be at least 2");
    require(dt > 0.0, "direct config: dt must be positive");
    require(final_time >= 0.0, "direct config: T must be nonnegative");
    require(u0_amplitude >= 0.0 && u0_amplitude < 1.0, "direct config: u0_amplitude must lie in [0, 1)");
    (void)step_count();
}

Field initial_rescaled_profile(const StagewiseConfig& cfg) {
    cfg.validate();
    const Grid grid = build_rescaled_grid(cfg.amp0, cfg.n0);
    const double stretch = std::pow(cfg.amp0, 1.5);
    const double pi = std::numbers::pi;
    Field w(grid, 0.0, 1.0 / cfg.amp0);
    for (int i = 1; i < grid.intervals; ++i) {
        for (int j = 1; j < grid.intervals; ++j) {
            const double x = cfg.center_x + stretch * grid.coord(i);
            const double y = cfg.center_y + stretch * grid.coord(j);
            if (x < -1e-12 || x > 1.0 + 1e-12 || y < -1e-12 || y > 1.0 + 1e-12)
                fail(ErrorCode::Internal, fmt::format("initial profile: node ({}, {}) maps outside the unit square", i, j));
            w.at(i, j) = (1.0 - cfg.u0_amplitude * std::sin(pi * x) * std::sin(pi * y)) / cfg.amp0;
        }
    }
    return w;
}

std::optional<Trigger> detect_trigger(const Field& prev, const Field& next, double threshold) {
    require(prev.interior.size() == next.interior.size(), "detect_trigger: shape mismatch");
    const double lo_prev = prev.min_interior();
    const double lo_next = next.min_interior();
    require(lo_prev >= threshold, "detect_trigger: previous state already below the threshold");
    if (!(lo_next < threshold)) return std::nullopt;

    Trigger t;
    t.tau = (lo_prev - threshold) / (lo_prev - lo_next);
    t.event = prev;
    for (std::size_t p = 0; p < prev.interior.size(); ++p)
        t.event.interior[p] = (1.0 - t.tau) * prev.interior[p] + t.tau * next.interior[p];
    return t;
}

namespace {

double sq_distance(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.interior.size(); ++p) {
        const double d = a.interior[p] - b.interior[p];
        s += d * d;
    }
    return a.grid.mesh * a.grid.mesh * s;
}

}  // namespace

StageResult run_stage(const StageState& state, const StagewiseConfig& cfg) {
    const StepperConfig scfg = cfg.stepper();
    const double A = state.amplitude;
    const double thr = cfg.trigger_threshold();
    require(state.z.min_interior() > thr,
            fmt::format("stage {}: initial minimum {} is not above the trigger threshold", state.stage,
                        state.z.min_interior()));

    const ImplicitOperator op(state.z.grid, scfg.ds);

    StageRecord rec;
    rec.stage = state.stage;
    rec.amplitude = A;
    rec.intervals = state.z.grid.intervals;
    rec.mesh = state.z.grid.mesh;
    rec.a2h2 = A * A * rec.mesh * rec.mesh;
    const EnergyBreakdown e0 = discrete_energy(state.z, A, cfg.lambda);
    const FeedbackSample f0 = feedback(state.z, A, cfg.lambda);
    rec.energy_start = e0.total;
    rec.K_start = f0.K.value;
    rec.coeff_start = f0.coeff;
    rec.min_dt_star = std::numeric_limits<double>::infinity();

    Field z = state.z;
    double energy = e0.total;
    for (long step = 0;; ++step) {
        if (step >= cfg.max_steps_per_stage)
            fail(ErrorCode::RunawayStage,
                 fmt::format("stage {}: no trigger within {} steps (min W = {})", state.stage, step, z.min_interior()));

        const double ds_star = dt_star(z, A, z.min_interior(), cfg.lambda, energy);
        rec.min_dt_star = std::min(rec.min_dt_star, ds_star);
        if (scfg.ds >= ds_star) ++rec.steps_above_dt_star;

        StepReport rep = picard_implicit_step(z, scfg, A, op);
        if (!rep.converged)
            fail(ErrorCode::Numerical, fmt::format("stage {}, step {}: Picard iteration did not converge in {} sweeps",
                                                   state.stage, step + 1, scfg.picard_max));
        rec.max_picard_iters = std::max(rec.max_picard_iters, rep.picard_iters);
        if (rep.energy_next > rep.energy_prev) {
            ++rec.energy_increases;
            rec.max_energy_increase = std::max(rec.max_energy_increase, rep.energy_next - rep.energy_prev);
        }

        if (auto trig = detect_trigger(z, rep.next, thr)) {
            rec.dissipation_sum += A * A / (2.0 * scfg.ds) * sq_distance(trig->event, z);
            rec.full_steps = step;
            rec.tau = trig->tau;
            rec.scaled_time = (static_cast<double>(step) + trig->tau) * scfg.ds;
            rec.min_at_trigger = trig->event.min_interior();
            const EnergyBreakdown e1 = discrete_energy(trig->event, A, cfg.lambda);
            const FeedbackSample f1 = feedback(trig->event, A, cfg.lambda);
            rec.energy_end = e1.total;
            rec.K_end = f1.K.value;
            rec.coeff_end = f1.coeff;
            return {rec, std::move(trig->event)};
        }
        rec.dissipation_sum += rep.distance_term;
        energy = rep.energy_next;
        z = std::move(rep.next);
    }
}

std::pair<Field, TransitionRecord> stage_transition(const Field& event, int from_stage, const TransferSpec& spec,
                                                    double lambda) {
    spec.validate();
    require(event.min_interior() > 0.0, "stage_transition: event state is not admissible");
    Field next = prolong_stage(event, spec);

    std::vector<std::string> bad;
    for (int i = 1; i < next.grid.intervals && bad.size() < 8; ++i)
        for (int j = 1; j < next.grid.intervals && bad.size() < 8; ++j)
            if (!(next.at(i, j) > 0.0)) bad.push_back(fmt::format("({},{})={}", i, j, next.at(i, j)));
    if (!bad.empty())
        fail(ErrorCode::InadmissibleTransfer,
             fmt::format("transition {}->{}: nonpositive prolonged values at {}", from_stage, from_stage + 1,
                         fmt::join(bad, " ")));

    TransitionRecord t;
    t.from_stage = from_stage;
    t.amp_from = spec.amp_from;
    t.amp_to = spec.amp_to;
    t.intervals_from = event.grid.intervals;
    t.intervals_to = next.grid.intervals;
    t.energy_end = discrete_energy(event, spec.amp_from, lambda).total;
    // Full-domain mode: ideal and actual outer updates are both zero.
    const double ideal_outer = 0.0;
    const double actual_outer = 0.0;
    t.energy_ideal = discrete_energy(next, spec.amp_to, lambda, ideal_outer).total;
    t.energy_start = discrete_energy(next, spec.amp_to, lambda, actual_outer).total;
    const SwitchJump jump = switch_jump(t.energy_end, t.energy_ideal);
    t.signed_jump = jump.signed_jump;
    t.switch_defect = jump.defect;
    t.outer_defect = std::abs(actual_outer - ideal_outer);
    t.min_prolonged = next.min_interior();
    return {std::move(next), t};
}

StagewiseReport run_stagewise(const StagewiseConfig& cfg) {
    cfg.validate();
    StagewiseReport rep;
    rep.config = cfg;
    rep.ledger = DefectLedger(cfg.lambda);

    StageState state;
    state.stage = 0;
    state.amplitude = cfg.amp0;
    state.z = initial_rescaled_profile(cfg);
    rep.initial_energy = discrete_energy(state.z, cfg.amp0, cfg.lambda).total;
    if (cfg.max_stages == 0) return rep;

    std::vector<double> areas;
    for (int m = 0; m < cfg.max_stages; ++m) {
        StageResult res = run_stage(state, cfg);
        areas.push_back(state.z.grid.node_area());
        rep.stages.push_back(res.record);
        if (m + 1 == cfg.max_stages) break;

        const TransferSpec spec = TransferSpec::make(state.amplitude, cfg.k);
        auto [next, trans] = stage_transition(res.event, m, spec, cfg.lambda);
        rep.transitions.push_back(trans);
        DefectRow row;
        row.from_stage = m;
        row.energy_end = trans.energy_end;
        row.energy_ideal = trans.energy_ideal;
        row.energy_start = trans.energy_start;
        row.signed_jump = trans.signed_jump;
        row.switch_defect = trans.switch_defect;
        row.outer_defect = trans.outer_defect;
        rep.ledger.append(row);

        state.stage = m + 1;
        state.amplitude = spec.amp_to;
        state.z = std::move(next);
    }

    std::vector<double> durations, amps;
    for (const auto& s : rep.stages) {
        durations.push_back(s.scaled_time);
        amps.push_back(s.amplitude);
    }
    const std::vector<double> times = accumulate_time(durations, amps);
    for (std::size_t m = 0; m < rep.stages.size(); ++m) rep.stages[m].accumulated_time = times[m];

    double dissipated = 0.0;
    double budget = 0.0;
    for (std::size_t m = 0; m < rep.transitions.size(); ++m) {
        const auto& row = rep.ledger.rows()[m];
        const double allowance = row.switch_defect + cfg.lambda * row.outer_defect;
        rep.balance_slack.push_back(row.energy_start - (row.energy_end + allowance));
        dissipated += rep.stages[m].dissipation_sum;
        budget += allowance;
        rep.cumulative_slack.push_back(rep.stages[m + 1].energy_start + dissipated -
                                       (rep.stages[0].energy_start + budget));
    }

    rep.continuation =
        continuation_check(rep.initial_energy, rep.ledger, areas, cfg.lambda, WindowMode::FullDomain);
    return rep;
}

DirectReport run_direct(const DirectConfig& cfg) {
    cfg.validate();
    DirectReport rep;
    rep.config = cfg;
    rep.steps = cfg.step_count();

    const Grid grid = build_physical_grid(cfg.n);
    const double pi = std::numbers::pi;
    Field v(grid, 0.0, 1.0);
    for (int i = 1; i < grid.intervals; ++i)
        for (int j = 1; j < grid.intervals; ++j)
            v.at(i, j) = 1.0 - cfg.u0_amplitude * std::sin(pi * grid.coord(i)) * std::sin(pi * grid.coord(j));

    StepperConfig scfg;
    scfg.ds = cfg.dt;
    scfg.lambda = cfg.lambda;
    rep.energy_start = discrete_energy(v, 1.0, cfg.lambda).total;

    if (rep.steps > 0) {
        const ImplicitOperator op(grid, cfg.dt);
        for (long s = 0; s < rep.steps; ++s) {
            StepReport st = picard_implicit_step(v, scfg, 1.0, op);
            if (!st.converged)
                fail(ErrorCode::Numerical,
                     fmt::format("direct run, step {}: Picard iteration did not converge", s + 1));
            if (st.energy_next > st.energy_prev) ++rep.energy_increases;
            rep.max_picard_iters = std::max(rep.max_picard_iters, st.picard_iters);
            v = std::move(st.next);
        }
    }
    rep.energy_end = discrete_energy(v, 1.0, cfg.lambda).total;
    rep.min_v = v.min_interior();
    rep.max_u = 1.0 - rep.min_v;
    return rep;
}

}  // namespace quenchstage
