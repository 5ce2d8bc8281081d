#pragma once

#include <optional>
#include <vector>

#include "grid.hpp"
#include "ledger.hpp"
#include "prolongation.hpp"
#include "stepper.hpp"

namespace quenchstage {

struct StagewiseConfig {
    double lambda = 20.0;
    double u0_amplitude = 0.4;
    double center_x = 0.5;
    double center_y = 0.5;
    double amp0 = 0.6;
    int k = 2;
    int n0 = 9;
    double ds = 1e-3;
    int max_stages = 4;
    long max_steps_per_stage = 1'000'000;

    /// k^{-2/3}
    double trigger_threshold() const;
    StepperConfig stepper() const;
    void validate() const;
};

struct DirectConfig {
    double lambda = 15.0;
    int n = 15;
    double dt = 5e-4;
    double final_time = 0.08;
    double u0_amplitude = 0.45;

    /// T/dt, checked to be integral.
    long step_count() const;
    void validate() const;
};

struct StageRecord {
    int stage = 0;
    double amplitude = 0.0;
    int intervals = 0;
    double mesh = 0.0;
    double a2h2 = 0.0;
    long full_steps = 0;       // completed steps before the crossing step
    double tau = 0.0;          // event fraction of the crossing step
    double scaled_time = 0.0;  // (full_steps + tau) ds
    double min_at_trigger = 0.0;
    double accumulated_time = 0.0;
    double energy_start = 0.0;
    double energy_end = 0.0;
    double K_start = 0.0;
    double K_end = 0.0;
    double coeff_start = 0.0;  // lambda K_start^-2
    double coeff_end = 0.0;
    double dissipation_sum = 0.0;  // sum A^2/(2 ds) ||dZ||^2 up to the event state
    long energy_increases = 0;     // steps with E(next) > E(prev)
    double max_energy_increase = 0.0;
    int max_picard_iters = 0;
    double min_dt_star = 0.0;
    long steps_above_dt_star = 0;  // steps taken with ds >= dt_star
};

struct TransitionRecord {
    int from_stage = 0;
    double amp_from = 0.0;
    double amp_to = 0.0;
    int intervals_from = 0;
    int intervals_to = 0;
    double energy_end = 0.0;
    double energy_ideal = 0.0;
    double energy_start = 0.0;
    double signed_jump = 0.0;
    double switch_defect = 0.0;
    double outer_defect = 0.0;
    double min_prolonged = 0.0;
};

struct StageState {
    int stage = 0;
    double amplitude = 0.0;
    Field z;
};

struct Trigger {
    double tau = 0.0;
    Field event;
};

struct StageResult {
    StageRecord record;
    Field event;
};

struct StagewiseReport {
    StagewiseConfig config;
    double initial_energy = 0.0;
    std::vector<StageRecord> stages;
    std::vector<TransitionRecord> transitions;
    DefectLedger ledger;
    std::optional<ContinuationReport> continuation;
    /// Row-by-row E_start^{m+1} - (E_end^m + eps^sw + lambda eps^out); nonpositive when the balance holds.
    std::vector<double> balance_slack;
    /// For each n >= 1: E_start^n + dissipation over stages < n - (E_start^0 + D*_n).
    std::vector<double> cumulative_slack;
};

struct DirectReport {
    DirectConfig config;
    long steps = 0;
    double energy_start = 0.0;
    double energy_end = 0.0;
    double min_v = 0.0;
    double max_u = 0.0;
    long energy_increases = 0;
    int max_picard_iters = 0;
};

/// W(xi) = (1 - a sin(pi x) sin(pi y)) / A0 with (x, y) = center + A0^{3/2} xi.
Field initial_rescaled_profile(const StagewiseConfig& cfg);

std::optional<Trigger> detect_trigger(const Field& prev, const Field& next, double threshold);

StageResult run_stage(const StageState& state, const StagewiseConfig& cfg);

std::pair<Field, TransitionRecord> stage_transition(const Field& event, int from_stage,
                                                    const TransferSpec& spec, double lambda);

StagewiseReport run_stagewise(const StagewiseConfig& cfg);

DirectReport run_direct(const DirectConfig& cfg);

}  // namespace quenchstage
