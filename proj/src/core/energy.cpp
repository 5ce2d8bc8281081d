#include "energy.hpp"

#include "error.hpp"

namespace quenchstage {

ExtendedReal reciprocal_K(const Field& y, double amplitude, double outer) {
    require(outer >= 0.0, "reciprocal_K: outer contribution must be nonnegative");
    double sum = 0.0;
    for (double v : y.interior) {
        if (!(v > 0.0)) return ExtendedReal::infinity();
        sum += 1.0 / v;
    }
    const double h = y.grid.mesh;
    return ExtendedReal::finite(1.0 + outer + amplitude * amplitude * h * h * sum);
}

EnergyBreakdown discrete_energy(const Field& y, double amplitude, double lambda, double outer) {
    EnergyBreakdown e;
    e.dirichlet = 0.5 * amplitude * amplitude * grad_norm_sq(y);
    e.K = reciprocal_K(y, amplitude, outer);
    e.reciprocal = e.K.infinite ? 0.0 : lambda / e.K.value;
    e.total = e.dirichlet + e.reciprocal;
    return e;
}

FeedbackSample feedback(const Field& y, double amplitude, double lambda) {
    FeedbackSample f;
    f.K = reciprocal_K(y, amplitude, 0.0);
    f.coeff = f.K.infinite ? 0.0 : lambda / (f.K.value * f.K.value);
    return f;
}

SwitchJump switch_jump(double energy_prev_end, double energy_next_start_ideal) {
    const double d = energy_next_start_ideal - energy_prev_end;
    return {d, d > 0.0 ? d : 0.0};
}

double physical_mass(const Field& z, double amplitude) {
    double sum = 0.0;
    for (double v : z.interior) {
        const double u = 1.0 - amplitude * v;
        sum += u * u;
    }
    return z.grid.mesh * z.grid.mesh * sum;
}

std::vector<double> accumulate_time(std::span<const double> durations, std::span<const double> amplitudes) {
    require(durations.size() == amplitudes.size(), "accumulate_time: length mismatch");
    std::vector<double> out;
    out.reserve(durations.size());
    double t = 0.0;
    for (std::size_t l = 0; l < durations.size(); ++l) {
        const double a = amplitudes[l];
        t += durations[l] * a * a * a;
        out.push_back(t);
    }
    return out;
}

}  // namespace quenchstage
