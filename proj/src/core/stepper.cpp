#include "stepper.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "energy.hpp"
#include "error.hpp"

namespace quenchstage {

void StepperConfig::validate() const {
    require(ds > 0.0, "StepperConfig: ds must be positive");
    require(lambda >= 0.0, "StepperConfig: lambda must be nonnegative");
    require(picard_tol > 0.0, "StepperConfig: picard_tol must be positive");
    require(picard_max > 0, "StepperConfig: picard_max must be positive");
    require(clip > 0.0, "StepperConfig: clip must be positive");
}

struct ImplicitOperator::Impl {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

ImplicitOperator::ImplicitOperator(const Grid& grid, double ds)
    : grid_(grid), ds_(ds), impl_(std::make_unique<Impl>()) {
    require(ds > 0.0, "ImplicitOperator: ds must be positive");
    const int n = grid.interior_per_side();
    const double inv_h2 = 1.0 / (grid.mesh * grid.mesh);
    const auto idx = [n](int i, int j) { return (i - 1) * n + (j - 1); };

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(5 * n * n));
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const int p = idx(i, j);
            trips.emplace_back(p, p, 1.0 / ds + 4.0 * inv_h2);
            if (i > 1) trips.emplace_back(p, idx(i - 1, j), -inv_h2);
            if (i < n) trips.emplace_back(p, idx(i + 1, j), -inv_h2);
            if (j > 1) trips.emplace_back(p, idx(i, j - 1), -inv_h2);
            if (j < n) trips.emplace_back(p, idx(i, j + 1), -inv_h2);
        }
    }
    Eigen::SparseMatrix<double> m(n * n, n * n);
    m.setFromTriplets(trips.begin(), trips.end());
    impl_->llt.compute(m);
    if (impl_->llt.info() != Eigen::Success) fail(ErrorCode::Numerical, "ImplicitOperator: factorization failed");
}

ImplicitOperator::~ImplicitOperator() = default;
ImplicitOperator::ImplicitOperator(ImplicitOperator&&) noexcept = default;
ImplicitOperator& ImplicitOperator::operator=(ImplicitOperator&&) noexcept = default;

bool ImplicitOperator::matches(const Grid& g, double ds) const {
    return g.intervals == grid_.intervals && g.mesh == grid_.mesh && ds == ds_;
}

std::vector<double> ImplicitOperator::solve(std::span<const double> rhs, double boundary) const {
    const int n = grid_.interior_per_side();
    require(rhs.size() == static_cast<std::size_t>(n) * n, "ImplicitOperator::solve: shape mismatch");
    const double g_h2 = boundary / (grid_.mesh * grid_.mesh);
    Eigen::VectorXd b(n * n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const int p = (i - 1) * n + (j - 1);
            double v = rhs[static_cast<std::size_t>(p)];
            if (i == 1) v += g_h2;
            if (i == n) v += g_h2;
            if (j == 1) v += g_h2;
            if (j == n) v += g_h2;
            b[p] = v;
        }
    }
    const Eigen::VectorXd x = impl_->llt.solve(b);
    return {x.data(), x.data() + x.size()};
}

double dt_star(const Field& z, double amplitude, double eta, double lambda, double energy) {
    require(amplitude > 0.0 && eta > 0.0 && energy > 0.0 && lambda >= 0.0,
            "dt_star: amplitude, eta and energy must be positive");
    const double h = z.grid.mesh;
    const double first = amplitude * amplitude * h * h * eta * eta / (8.0 * energy);
    if (lambda == 0.0) return first;
    return std::min(first, eta * eta * eta / (16.0 * lambda));
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

StepReport picard_implicit_step(const Field& z, const StepperConfig& cfg, double amplitude,
                                const ImplicitOperator& op, std::span<const double> seed) {
    cfg.validate();
    require(amplitude > 0.0, "picard_implicit_step: amplitude must be positive");
    require(op.matches(z.grid, cfg.ds), "picard_implicit_step: operator built for a different grid or step");
    require(seed.empty() || seed.size() == z.interior.size(), "picard_implicit_step: seed shape mismatch");

    const double h = z.grid.mesh;
    const double a2h2 = amplitude * amplitude * h * h;
    const std::size_t size = z.interior.size();

    std::vector<double> y = seed.empty() ? z.interior : std::vector<double>(seed.begin(), seed.end());
    std::vector<double> rhs(size);

    StepReport rep;
    for (int r = 0; r < cfg.picard_max; ++r) {
        double recip = 0.0;
        for (double v : y) recip += 1.0 / std::max(v, cfg.clip);
        const double K = 1.0 + a2h2 * recip;
        const double coef = cfg.lambda / (K * K);
        for (std::size_t p = 0; p < size; ++p) {
            const double yc = std::max(y[p], cfg.clip);
            rhs[p] = z.interior[p] / cfg.ds - coef / (yc * yc);
        }
        std::vector<double> next = op.solve(rhs, z.boundary);

        double diff = 0.0;
        for (std::size_t p = 0; p < size; ++p) diff = std::max(diff, std::abs(next[p] - y[p]));
        y = std::move(next);
        rep.picard_iters = r + 1;
        // A source independent of the iterate is resolved by the first solve.
        if (cfg.lambda == 0.0 || diff < cfg.picard_tol * std::max(1.0, linf_norm(y))) {
            rep.converged = true;
            break;
        }
    }

    rep.next = Field(z.grid, std::move(y), z.boundary);
    rep.energy_prev = discrete_energy(z, amplitude, cfg.lambda).total;
    rep.energy_next = discrete_energy(rep.next, amplitude, cfg.lambda).total;
    rep.distance_term = amplitude * amplitude / (2.0 * cfg.ds) * sq_distance(rep.next, z);
    rep.dissipation_lhs = rep.energy_next + rep.distance_term;
    rep.dissipation_rhs = rep.energy_prev;
    return rep;
}

StepReport picard_implicit_step(const Field& z, const StepperConfig& cfg, double amplitude) {
    const ImplicitOperator op(z.grid, cfg.ds);
    return picard_implicit_step(z, cfg, amplitude, op);
}

double euler_lagrange_residual(const Field& next, const Field& prev, double ds, double lambda, double amplitude) {
    const ExtendedReal K = reciprocal_K(next, amplitude);
    if (K.infinite) fail(ErrorCode::Numerical, "euler_lagrange_residual: state is not positive");
    const std::vector<double> lap = laplacian_5pt(next);
    const double coef = lambda / (K.value * K.value);
    double res = 0.0;
    for (std::size_t p = 0; p < next.interior.size(); ++p) {
        const double y = next.interior[p];
        res = std::max(res, std::abs((y - prev.interior[p]) / ds - lap[p] + coef / (y * y)));
    }
    return res;
}

double mm_functional(const Field& y, const Field& z, double ds, double lambda, double amplitude) {
    return discrete_energy(y, amplitude, lambda).total + amplitude * amplitude / (2.0 * ds) * sq_distance(y, z);
}

namespace {

// Gradient of the functional divided by A^2 h^2; at an interior minimizer it is the
// Euler-Lagrange residual.
std::vector<double> mm_gradient(const Field& y, const Field& z, double ds, double lambda, double amplitude) {
    const ExtendedReal K = reciprocal_K(y, amplitude);
    const std::vector<double> lap = laplacian_5pt(y);
    const double coef = K.infinite ? 0.0 : lambda / (K.value * K.value);
    std::vector<double> g(y.interior.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double v = y.interior[p];
        const double source = v > 0.0 ? coef / (v * v) : 0.0;
        g[p] = -lap[p] + source + (v - z.interior[p]) / ds;
    }
    return g;
}

}  // namespace

OracleResult mm_oracle_step(const Field& z, const StepperConfig& cfg, double amplitude, double tol) {
    cfg.validate();
    require(z.interior.size() <= 16, "mm_oracle_step: at most 16 interior nodes");
    require(amplitude > 0.0, "mm_oracle_step: amplitude must be positive");

    const double h = z.grid.mesh;
    const double curvature = 1.0 / cfg.ds + 8.0 / (h * h);
    double step = 1.0 / curvature;

    Field y = z;
    double J = mm_functional(y, z, cfg.ds, cfg.lambda, amplitude);
    std::vector<double> g = mm_gradient(y, z, cfg.ds, cfg.lambda, amplitude);
    double gnorm = linf_norm(g);

    OracleResult out;
    const int max_iter = 200000;
    int it = 0;
    for (; it < max_iter && gnorm >= tol; ++it) {
        bool accepted = false;
        for (int halvings = 0; halvings < 60 && !accepted; ++halvings) {
            Field trial = y;
            double moved = 0.0;
            for (std::size_t p = 0; p < g.size(); ++p) {
                const double v = std::max(y.interior[p] - step * g[p], 0.0);
                moved += g[p] * (y.interior[p] - v);
                trial.interior[p] = v;
            }
            const double Jt = mm_functional(trial, z, cfg.ds, cfg.lambda, amplitude);
            std::vector<double> gt = mm_gradient(trial, z, cfg.ds, cfg.lambda, amplitude);
            const double gt_norm = linf_norm(gt);
            // Sufficient decrease while it is resolvable in floating point; past
            // that, require J not to increase and the residual to shrink.
            const double predicted = 1e-4 * amplitude * amplitude * h * h * moved;
            const bool resolvable = predicted > 1e-13 * std::abs(J);
            const bool ok = resolvable ? (Jt <= J - predicted) : (Jt <= J && gt_norm < gnorm);
            if (ok) {
                y = std::move(trial);
                J = Jt;
                g = std::move(gt);
                gnorm = gt_norm;
                accepted = true;
                step = std::min(step * 2.0, 4.0 / curvature);
            } else {
                step *= 0.5;
            }
        }
        if (!accepted) break;
    }
    // Descent stalls once J differences drop below round-off. Finish with
    // Newton on the stationarity condition, finite-difference Hessian, kept
    // only while the residual shrinks.
    const int n = static_cast<int>(g.size());
    for (int polish = 0; polish < 20 && gnorm >= tol; ++polish, ++it) {
        Eigen::MatrixXd H(n, n);
        for (int q = 0; q < n; ++q) {
            const double e = 1e-6 * std::max(1.0, std::abs(y.interior[q]));
            Field yp = y, ym = y;
            yp.interior[q] += e;
            ym.interior[q] -= e;
            const std::vector<double> gp = mm_gradient(yp, z, cfg.ds, cfg.lambda, amplitude);
            const std::vector<double> gm = mm_gradient(ym, z, cfg.ds, cfg.lambda, amplitude);
            for (int p = 0; p < n; ++p) H(p, q) = (gp[p] - gm[p]) / (2.0 * e);
        }
        const Eigen::VectorXd dy = H.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(g.data(), n));
        Field trial = y;
        bool positive = true;
        for (int p = 0; p < n; ++p) {
            trial.interior[p] -= dy[p];
            positive = positive && trial.interior[p] > 0.0;
        }
        if (!positive) break;
        std::vector<double> gt = mm_gradient(trial, z, cfg.ds, cfg.lambda, amplitude);
        const double gt_norm = linf_norm(gt);
        if (!(gt_norm < gnorm)) break;
        y = std::move(trial);
        g = std::move(gt);
        gnorm = gt_norm;
    }
    out.minimizer = std::move(y);
    out.residual = gnorm;
    out.iterations = it;
    out.converged = gnorm < tol;
    return out;
}

}  // namespace quenchstage
