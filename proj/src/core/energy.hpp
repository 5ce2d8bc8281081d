#pragma once

#include <span>
#include <vector>

#include "grid.hpp"

namespace quenchstage {

/// Value in [0, inf] with an explicit infinity flag. K takes the infinite
/// value on the vanishing branch (some interior value <= 0).
struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal finite(double v) { return {v, false}; }
    static ExtendedReal infinity() { return {0.0, true}; }
};

struct EnergyBreakdown {
    double dirichlet = 0.0;   // A^2/2 * grad_norm_sq
    ExtendedReal K;
    double reciprocal = 0.0;  // lambda/K, 0 on the vanishing branch
    double total = 0.0;
};

struct FeedbackSample {
    ExtendedReal K;
    double coeff = 0.0;  // lambda * K^-2
};

/// 1 + I_out + A^2 h^2 sum 1/Y over interior nodes, or +inf unless every
/// interior value is positive.
ExtendedReal reciprocal_K(const Field& y, double amplitude, double outer = 0.0);

EnergyBreakdown discrete_energy(const Field& y, double amplitude, double lambda, double outer = 0.0);

FeedbackSample feedback(const Field& y, double amplitude, double lambda);

struct SwitchJump {
    double signed_jump = 0.0;  // delta^sw
    double defect = 0.0;       // max(delta, 0)
};

SwitchJump switch_jump(double energy_prev_end, double energy_next_start_ideal);

/// h^2 sum (1 - A Z)^2 over interior nodes.
double physical_mass(const Field& z, double amplitude);

/// Running sums of s*_l A_l^3. Lengths must match.
std::vector<double> accumulate_time(std::span<const double> durations, std::span<const double> amplitudes);

}  // namespace quenchstage
