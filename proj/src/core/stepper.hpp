#pragma once

#include <memory>
#include <span>
#include <vector>

#include "grid.hpp"

namespace quenchstage {

struct StepperConfig {
    double ds = 1e-3;
    double lambda = 20.0;
    double picard_tol = 1e-10;
    int picard_max = 50;
    double clip = 1e-12;

    void validate() const;
};

struct StepReport {
    Field next;
    int picard_iters = 0;
    bool converged = false;
    double energy_prev = 0.0;
    double energy_next = 0.0;
    double distance_term = 0.0;    // A^2/(2 ds) * ||next - prev||^2_{2,h}
    double dissipation_lhs = 0.0;  // energy_next + distance_term
    double dissipation_rhs = 0.0;  // energy_prev
};

/// Sparse Cholesky factorization of (1/ds) I - Laplacian_h on the interior of
/// a grid. Built once per (grid, ds) and reused for every Picard sweep.
class ImplicitOperator {
public:
    ImplicitOperator(const Grid& grid, double ds);
    ~ImplicitOperator();
    ImplicitOperator(ImplicitOperator&&) noexcept;
    ImplicitOperator& operator=(ImplicitOperator&&) noexcept;

    const Grid& grid() const { return grid_; }
    double ds() const { return ds_; }
    bool matches(const Grid& g, double ds) const;

    /// Solves (1/ds) Y - Lap_h Y = rhs with boundary value g folded into the right-hand side.
    std::vector<double> solve(std::span<const double> rhs, double boundary) const;

private:
    struct Impl;
    Grid grid_;
    double ds_;
    std::unique_ptr<Impl> impl_;
};

/// min{A^2 h^2 eta^2 / (8E), eta^3 / (16 lambda)}; the lambda branch drops out when lambda = 0.
double dt_star(const Field& z, double amplitude, double eta, double lambda, double energy);

/// Backward Euler for diffusion with Picard iteration on the nonlocal source.
/// `seed` overrides the initial iterate (defaults to z).
StepReport picard_implicit_step(const Field& z, const StepperConfig& cfg, double amplitude,
                                const ImplicitOperator& op, std::span<const double> seed = {});
StepReport picard_implicit_step(const Field& z, const StepperConfig& cfg, double amplitude);

/// ||(Y - Z)/ds - Lap_h Y + lambda/(Y^2 K(Y)^2)||_inf
double euler_lagrange_residual(const Field& next, const Field& prev, double ds, double lambda, double amplitude);

struct OracleResult {
    Field minimizer;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Minimizing-movement step by projected steepest descent on
/// E(Y) + A^2/(2 ds) ||Y - Z||^2 over Y >= 0. Verification scale only.
OracleResult mm_oracle_step(const Field& z, const StepperConfig& cfg, double amplitude, double tol = 1e-10);

/// The minimizing-movement functional itself.
double mm_functional(const Field& y, const Field& z, double ds, double lambda, double amplitude);

}  // namespace quenchstage
