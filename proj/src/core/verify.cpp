#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>
#include <numbers>
#include <random>

#include "drivers.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "prolongation.hpp"
#include "stepper.hpp"

namespace quenchstage {

namespace {

using Checks = std::vector<VerifyCheck>;

void add(Checks& out, std::string suite, std::string name, double measured, double threshold,
         std::string detail = {}) {
    out.push_back({std::move(suite), std::move(name), measured, threshold, measured <= threshold, false,
                   std::move(detail)});
}

void add_at_least(Checks& out, std::string suite, std::string name, double measured, double threshold,
                  std::string detail = {}) {
    out.push_back({std::move(suite), std::move(name), measured, threshold, measured >= threshold, false,
                   std::move(detail)});
}

void add_info(Checks& out, std::string suite, std::string name, double measured, std::string detail) {
    out.push_back({std::move(suite), std::move(name), measured, 0.0, true, true, std::move(detail)});
}

Field random_field(std::mt19937_64& rng, const Grid& grid, double lo, double hi, double boundary) {
    std::uniform_real_distribution<double> u(lo, hi);
    Field f(grid, 0.0, boundary);
    for (double& v : f.interior) v = u(rng);
    return f;
}

// --- green -------------------------------------------------------------------

void suite_green(Checks& out) {
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<int> nn(2, 12);
    std::uniform_real_distribution<double> amp(0.15, 1.0), g(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Grid grid = build_rescaled_grid(amp(rng), nn(rng));
        const Field y = random_field(rng, grid, -3.0, 3.0, g(rng));
        const Field phi = random_field(rng, grid, -1.0, 1.0, 0.0);
        const std::vector<double> lap = laplacian_5pt(y);
        double lhs = 0.0, scale = 0.0;
        for (std::size_t p = 0; p < lap.size(); ++p) {
            lhs -= lap[p] * phi.interior[p];
            scale += std::abs(lap[p] * phi.interior[p]);
        }
        lhs *= grid.mesh * grid.mesh;
        scale *= grid.mesh * grid.mesh;
        const double rhs = grad_bilinear(y, phi.interior);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-300));
    }
    add(out, "green", "discrete Green identity, 20 random fields (relative)", worst, 1e-12);
}

// --- unisolvence -------------------------------------------------------------

void suite_unisolvence(Checks& out) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::array<double, 12> data{};
        for (double& d : data) d = u(rng);
        const CellCoeffs c = fit_cell(data);
        for (int s = 0; s < 12; ++s)
            worst = std::max(worst, std::abs(eval_cell(c, kStencil12[s][0], kStencil12[s][1]) - data[s]));
    }
    add(out, "unisolvence", "fit/eval round trip on the 12-point stencil, 200 random data sets", worst, 1e-11);

    std::uniform_real_distribution<double> pt(-1.0, 2.0);
    double mono = 0.0;
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; a + b <= 3; ++b) {
            std::array<double, 12> data{};
            for (int s = 0; s < 12; ++s) data[s] = std::pow(kStencil12[s][0], a) * std::pow(kStencil12[s][1], b);
            const CellCoeffs c = fit_cell(data);
            for (int q = 0; q < 50; ++q) {
                const double t = pt(rng), z = pt(rng);
                mono = std::max(mono, std::abs(eval_cell(c, t, z) - std::pow(t, a) * std::pow(z, b)));
            }
        }
    }
    add(out, "unisolvence", "reproduction of the 10 monomials of total degree <= 3, off-stencil", mono, 1e-11);

    double constant = 0.0;
    for (double amp : {0.6, 0.37797631496846196, 0.15}) {
        for (int k : {2, 3}) {
            const TransferSpec spec = TransferSpec::make(amp, k);
            const Grid grid = build_rescaled_grid(amp, 6);
            const Field flat(grid, 1.0 / amp, 1.0 / amp);
            const Field fine = prolong_stage(flat, spec);
            const double target = 1.0 / spec.amp_to;
            for (double v : fine.interior) constant = std::max(constant, std::abs(v - target) / target);
            constant = std::max(constant, std::abs(fine.boundary - target) / target);
        }
    }
    add(out, "unisolvence", "constant state 1/A_m prolongs to 1/A_m+1 (relative)", constant, 1e-12);
}

// --- edge --------------------------------------------------------------------

void suite_edge(Checks& out) {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double amp = 0.2 + 0.08 * trial;
        const Grid grid = build_rescaled_grid(amp, 5 + trial);
        const Field f = random_field(rng, grid, 0.5, 3.0, 1.0 / amp);
        for (int k : {2, 3, 4}) worst = std::max(worst, edge_consistency_check(f, TransferSpec::make(amp, k)));
    }
    add(out, "edge", "interface mismatch, random fields, k = 2, 3, 4", worst, 1e-11);

    const StagewiseConfig cfg;
    StageState st{0, cfg.amp0, initial_rescaled_profile(cfg)};
    const StageResult stage0 = run_stage(st, cfg);
    add(out, "edge", "interface mismatch, reference stage-0 end state",
        edge_consistency_check(stage0.event, TransferSpec::make(cfg.amp0, cfg.k)), 1e-11);
}

// --- laplace -----------------------------------------------------------------

void suite_laplace(Checks& out) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coef(-2.0, 2.0), ph(0.0, 2.0 * std::numbers::pi);
    double worst = 0.0;
    std::size_t nodes = 0;
    for (int trial = 0; trial < 6; ++trial) {
        const double amp = 0.3 + 0.1 * trial;
        const Grid grid = build_rescaled_grid(amp, 6 + trial);
        // smooth random samples: a few low Fourier modes around the boundary value
        const double c1 = coef(rng), c2 = coef(rng), p1 = ph(rng), p2 = ph(rng);
        Field f(grid, 0.0, 1.0 / amp);
        for (int i = 1; i < grid.intervals; ++i)
            for (int j = 1; j < grid.intervals; ++j) {
                const double x = grid.coord(i) / grid.half_width, y = grid.coord(j) / grid.half_width;
                f.at(i, j) = 1.0 / amp + 0.3 * c1 * std::sin(2.0 * x + p1) * std::cos(1.5 * y) +
                             0.2 * c2 * std::cos(3.0 * x * y + p2);
            }
        for (int k : {2, 4}) {
            const LaplaceCompat lc = laplace_compat_check(f, TransferSpec::make(amp, k));
            worst = std::max(worst, lc.max_residual);
            nodes += lc.nodes_checked;
        }
    }
    add(out, "laplace", "local Laplace compatibility at single-cell fine stencils, k = 2, 4", worst, 1e-10,
        fmt::format("{} fine nodes checked", nodes));

    double fd = 0.0;
    std::uniform_real_distribution<double> pt(0.0, 1.0);
    const double step = 1e-4;
    for (int trial = 0; trial < 100; ++trial) {
        CellCoeffs c;
        for (double& a : c.a) a = coef(rng);
        const double t = pt(rng), z = pt(rng);
        const double ptt = (eval_cell(c, t + step, z) - 2.0 * eval_cell(c, t, z) + eval_cell(c, t - step, z)) /
                           (step * step);
        const double pzz = (eval_cell(c, t, z + step) - 2.0 * eval_cell(c, t, z) + eval_cell(c, t, z - step)) /
                           (step * step);
        fd = std::max(fd, std::abs(laplacian_cell(c, t, z, 1.0) - (ptt + pzz)));
    }
    add(out, "laplace", "patch Laplacian formula vs centered differences (step 1e-4)", fd, 1e-6);
}

// --- dissipation -------------------------------------------------------------

void suite_dissipation(Checks& out) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> amp(0.3, 1.0), lam(0.0, 20.0), val(0.8, 2.0);
    double worst = -1e300;
    int unconverged = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double A = amp(rng);
        const Grid grid = build_rescaled_grid(A, 4);
        const Field z = random_field(rng, grid, 0.8, 2.0, 1.0 / A);
        StepperConfig cfg;
        cfg.lambda = lam(rng);
        const OracleResult r = mm_oracle_step(z, cfg, A);
        if (!r.converged) ++unconverged;
        const double lhs = mm_functional(r.minimizer, z, cfg.ds, cfg.lambda, A);
        const double rhs = discrete_energy(z, A, cfg.lambda).total;
        worst = std::max(worst, lhs - rhs);
    }
    add(out, "dissipation", "minimizing-movement dissipation inequality, 50 random 3x3 cases (excess)",
        std::max(worst, 0.0), 1e-12, fmt::format("max E(out)+dist-E(in) = {:.3e}", worst));
    add(out, "dissipation", "minimizing-movement oracle unconverged cases", unconverged, 0.0);

    const StagewiseReport run = run_stagewise(StagewiseConfig{});
    double balance = -1e300, cumulative = -1e300;
    for (double s : run.balance_slack) balance = std::max(balance, s);
    for (double s : run.cumulative_slack) cumulative = std::max(cumulative, s);
    add(out, "dissipation", "defect balance E_start(m+1) <= E_end(m) + eps_sw + lambda eps_out (excess)",
        std::max(balance, 0.0), 1e-12, fmt::format("max slack {:.6e}", balance));
    add(out, "dissipation", "cumulative defect balance with within-stage dissipation (excess)",
        std::max(cumulative, 0.0), 1e-12, fmt::format("max slack {:.6e}", cumulative));
    long increases = 0;
    for (const auto& s : run.stages) increases += s.energy_increases;
    add_info(out, "dissipation", "Picard steps with energy increase in the reference run", increases,
             "monitored; Picard is not variational");
}

// --- oracle ------------------------------------------------------------------

void suite_oracle(Checks& out) {
    std::mt19937_64 rng(19);
    double gap = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double A = 0.6;
        const Grid grid = build_rescaled_grid(A, 4);
        const Field z = random_field(rng, grid, 0.9, 1.8, 1.0 / A);
        StepperConfig cfg;
        cfg.lambda = 20.0;
        const StepReport pic = picard_implicit_step(z, cfg, A);
        const OracleResult mm = mm_oracle_step(z, cfg, A);
        for (std::size_t p = 0; p < z.interior.size(); ++p)
            gap = std::max(gap, std::abs(pic.next.interior[p] - mm.minimizer.interior[p]));
    }
    add(out, "oracle", "Picard vs minimizing-movement oracle, 3x3 grids (max abs)", gap, 1e-6);

    double seed_gap = 0.0;
    std::vector<Field> cases;
    const StagewiseConfig ref;
    cases.push_back(initial_rescaled_profile(ref));
    for (int trial = 0; trial < 5; ++trial) {
        const double A = 0.4 + 0.1 * trial;
        cases.push_back(random_field(rng, build_rescaled_grid(A, 5 + trial), 1.0, 2.0, 1.0 / A));
    }
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const Field& z = cases[c];
        const double A = c == 0 ? ref.amp0 : 1.0 / z.boundary;
        StepperConfig cfg;
        cfg.lambda = 20.0;
        const double eta = z.min_interior();
        if (!(cfg.ds < eta * eta * eta / (16.0 * cfg.lambda))) fail(ErrorCode::Internal, "uniqueness case outside regime");
        const ImplicitOperator op(z.grid, cfg.ds);
        std::vector<double> seed = z.interior;
        for (double& v : seed) v *= 1.05;
        const StepReport a = picard_implicit_step(z, cfg, A, op);
        const StepReport b = picard_implicit_step(z, cfg, A, op, seed);
        for (std::size_t p = 0; p < z.interior.size(); ++p)
            seed_gap = std::max(seed_gap, std::abs(a.next.interior[p] - b.next.interior[p]));
    }
    add(out, "oracle", "two-seed Picard local uniqueness for ds < eta^3/(16 lambda)", seed_gap, 1e-8);
}

// --- changevar ---------------------------------------------------------------

void suite_changevar(Checks& out) {
    const StagewiseConfig cfg;
    const Field w = initial_rescaled_profile(cfg);
    const Grid phys = build_physical_grid(cfg.n0);
    Field v(phys, 0.0, cfg.amp0 * w.boundary);
    for (std::size_t p = 0; p < v.interior.size(); ++p) v.interior[p] = cfg.amp0 * w.interior[p];
    const double e_rescaled = discrete_energy(w, cfg.amp0, cfg.lambda).total;
    const double e_physical = discrete_energy(v, 1.0, cfg.lambda).total;
    add(out, "changevar", "stage-0 rescaled energy equals physical energy of A0 W", std::abs(e_rescaled - e_physical),
        1e-12, fmt::format("E = {:.13f}", e_rescaled));

    const RefinementStudy rs = ideal_transfer_refinement({18, 36, 72});
    add_at_least(out, "changevar", "ideal-transfer energy consistency, observed order (levels 18/36/72)",
                 rs.observed_order, 2.0,
                 fmt::format("dirichlet gaps {:.3e} {:.3e} {:.3e}; reciprocal gaps {:.3e} {:.3e} {:.3e}",
                             rs.dirichlet_gap[0], rs.dirichlet_gap[1], rs.dirichlet_gap[2], rs.reciprocal_gap[0],
                             rs.reciprocal_gap[1], rs.reciprocal_gap[2]));
    add_info(out, "changevar", "coarse-vs-prolonged full energy gap, observed order", rs.literal_order,
             "limited by the interior rectangle rule near the boundary");
}

double pair_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        arr.push_back({{"suite", c.suite},
                       {"name", c.name},
                       {"measured", c.measured},
                       {"threshold", c.threshold},
                       {"passed", c.passed},
                       {"informational", c.informational},
                       {"detail", c.detail}});
    j["checks"] = arr;
    return j.dump(2);
}

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {"green",       "unisolvence", "edge",      "laplace",
                                                   "dissipation", "oracle",      "changevar", "all"};
    return names;
}

bool is_verify_suite(std::string_view name) {
    const auto& names = verify_suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

VerifyReport run_verify(std::string_view suite) {
    require(is_verify_suite(suite), fmt::format("unknown verify suite '{}'", suite));
    VerifyReport r;
    r.suite = std::string(suite);
    const bool all = suite == "all";
    if (all || suite == "green") suite_green(r.checks);
    if (all || suite == "unisolvence") suite_unisolvence(r.checks);
    if (all || suite == "edge") suite_edge(r.checks);
    if (all || suite == "laplace") suite_laplace(r.checks);
    if (all || suite == "dissipation") suite_dissipation(r.checks);
    if (all || suite == "oracle") suite_oracle(r.checks);
    if (all || suite == "changevar") suite_changevar(r.checks);
    return r;
}

Field smooth_rescaled_profile(const Grid& grid, double amplitude, double a, int power) {
    const double stretch = std::pow(amplitude, 1.5);
    const double pi = std::numbers::pi;
    Field w(grid, 0.0, 1.0 / amplitude);
    for (int i = 1; i < grid.intervals; ++i)
        for (int j = 1; j < grid.intervals; ++j) {
            const double x = 0.5 + stretch * grid.coord(i);
            const double y = 0.5 + stretch * grid.coord(j);
            w.at(i, j) = (1.0 - a * std::pow(std::sin(pi * x) * std::sin(pi * y), power)) / amplitude;
        }
    return w;
}

RefinementStudy ideal_transfer_refinement(std::vector<int> levels, int power) {
    require(levels.size() >= 2, "ideal_transfer_refinement: need at least two levels");
    const double A0 = 0.6;
    const int k = 2;
    const double lambda = 20.0;
    RefinementStudy rs;
    rs.levels = levels;
    for (int n : levels) {
        const TransferSpec spec = TransferSpec::make(A0, k);
        const Field coarse = smooth_rescaled_profile(build_rescaled_grid(A0, n), A0, 0.4, power);
        const Field fine = prolong_stage(coarse, spec);
        const Field ideal = smooth_rescaled_profile(fine.grid, spec.amp_to, 0.4, power);
        const double a2 = spec.amp_to * spec.amp_to;
        const double h2 = fine.grid.mesh * fine.grid.mesh;
        double rf = 0.0, ri = 0.0;
        for (std::size_t p = 0; p < fine.interior.size(); ++p) {
            rf += 1.0 / fine.interior[p];
            ri += 1.0 / ideal.interior[p];
        }
        rs.dirichlet_gap.push_back(std::abs(0.5 * a2 * (grad_norm_sq(fine) - grad_norm_sq(ideal))));
        rs.reciprocal_gap.push_back(std::abs(a2 * h2 * (rf - ri)));
        rs.literal_gap.push_back(std::abs(discrete_energy(fine, spec.amp_to, lambda).total -
                                          discrete_energy(coarse, A0, lambda).total));
    }
    rs.observed_order = std::numeric_limits<double>::infinity();
    rs.literal_order = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
        rs.observed_order = std::min({rs.observed_order, pair_order(rs.dirichlet_gap[l], rs.dirichlet_gap[l + 1]),
                                      pair_order(rs.reciprocal_gap[l], rs.reciprocal_gap[l + 1])});
        rs.literal_order = std::min(rs.literal_order, pair_order(rs.literal_gap[l], rs.literal_gap[l + 1]));
    }
    return rs;
}

}  // namespace quenchstage
