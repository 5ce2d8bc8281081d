#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "prolongation.hpp"

using namespace quenchstage;

namespace {

// Plain Gauss-Jordan with partial pivoting, solving M a = data for the
// monomial coefficients directly from the stencil.
std::array<double, 12> gauss_jordan_fit(const std::array<double, 12>& data) {
    double m[12][13];
    for (int r = 0; r < 12; ++r) {
        const double t = kStencil12[r][0], z = kStencil12[r][1];
        const double row[12] = {1, t, z, t * t, t * z, z * z, t * t * t, t * t * z, t * z * z, z * z * z,
                                t * t * t * z, t * z * z * z};
        for (int c = 0; c < 12; ++c) m[r][c] = row[c];
        m[r][12] = data[r];
    }
    for (int c = 0; c < 12; ++c) {
        int piv = c;
        for (int r = c + 1; r < 12; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        for (int q = 0; q < 13; ++q) std::swap(m[c][q], m[piv][q]);
        const double d = m[c][c];
        for (int q = 0; q < 13; ++q) m[c][q] /= d;
        for (int r = 0; r < 12; ++r) {
            if (r == c) continue;
            const double f = m[r][c];
            for (int q = 0; q < 13; ++q) m[r][q] -= f * m[c][q];
        }
    }
    std::array<double, 12> a{};
    for (int r = 0; r < 12; ++r) a[r] = m[r][12];
    return a;
}

}  // namespace

TEST_SUITE("prolongation") {

TEST_CASE("constant and monomial fits") {
    std::array<double, 12> ones;
    ones.fill(1.0);
    const CellCoeffs c = fit_cell(ones);
    CHECK(c.a[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 1; i < 12; ++i) CHECK(std::abs(c.a[i]) < 1e-13);
    CHECK(eval_cell(c, 0.37, -0.2) == doctest::Approx(1.0).epsilon(1e-13));

    std::array<double, 12> t3z;
    for (int s = 0; s < 12; ++s) t3z[s] = std::pow(kStencil12[s][0], 3) * kStencil12[s][1];
    const CellCoeffs m = fit_cell(t3z);
    for (int i = 0; i < 12; ++i) CHECK(std::abs(m.a[i] - (i == 10 ? 1.0 : 0.0)) < 1e-12);

    std::array<double, 12> lin;
    for (int s = 0; s < 12; ++s) lin[s] = kStencil12[s][0];
    CHECK(eval_cell(fit_cell(lin), 0.5, 0.3) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("fit matches an independent dense solve") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<double, 12> data;
        for (double& d : data) d = u(rng);
        const CellCoeffs c = fit_cell(data);
        const auto ref = gauss_jordan_fit(data);
        for (int i = 0; i < 12; ++i) CHECK(std::abs(c.a[i] - ref[i]) < 1e-11);
        for (int s = 0; s < 12; ++s)
            CHECK(std::abs(eval_cell(c, kStencil12[s][0], kStencil12[s][1]) - data[s]) <= 1e-11);
    }
}

TEST_CASE("cubic polynomials are reproduced off the stencil") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pt(-1.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        double b[10];
        for (double& v : b) v = u(rng);
        const auto p = [&](double t, double z) {
            return b[0] + b[1] * t + b[2] * z + b[3] * t * t + b[4] * t * z + b[5] * z * z + b[6] * t * t * t +
                   b[7] * t * t * z + b[8] * t * z * z + b[9] * z * z * z;
        };
        std::array<double, 12> data;
        for (int s = 0; s < 12; ++s) data[s] = p(kStencil12[s][0], kStencil12[s][1]);
        const CellCoeffs c = fit_cell(data);
        for (int q = 0; q < 10; ++q) {
            const double t = pt(rng), z = pt(rng);
            CHECK(std::abs(eval_cell(c, t, z) - p(t, z)) < 1e-11);
        }
    }
}

TEST_CASE("patch Laplacian") {
    CellCoeffs c;
    c.a[3] = 1.0;
    CHECK(laplacian_cell(c, 0.3, 0.8, 1.0) == 2.0);
    std::array<double, 12> ones;
    ones.fill(1.0);
    CHECK(std::abs(laplacian_cell(fit_cell(ones), 0.4, 0.1, 0.7)) < 1e-12);

    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-2.0, 2.0), pt(0.0, 1.0);
    const double e = 1e-4;
    for (int trial = 0; trial < 50; ++trial) {
        CellCoeffs r;
        for (double& a : r.a) a = u(rng);
        const double t = pt(rng), z = pt(rng);
        const double fd = (eval_cell(r, t + e, z) + eval_cell(r, t - e, z) + eval_cell(r, t, z + e) +
                           eval_cell(r, t, z - e) - 4.0 * eval_cell(r, t, z)) /
                          (e * e);
        CHECK(std::abs(laplacian_cell(r, t, z, 1.0) - fd) <= 1e-6);
    }
}

TEST_CASE("transfer parameters") {
    const TransferSpec s = TransferSpec::make(0.6, 2);
    CHECK(s.amp_to == doctest::Approx(0.37797631).epsilon(1e-8));
    CHECK(s.fill == doctest::Approx(1.0 / 0.6));
    CHECK(std::abs(std::pow(2.0, 2.0 / 3.0) * s.fill - 1.0 / s.amp_to) < 1e-12);
    TransferSpec bad = s;
    bad.amp_to *= 1.01;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = s;
    bad.fill = 1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = s;
    bad.k = 1;
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(prolong_stage(Field(build_rescaled_grid(0.6, 4), 1.0, 1.0 / 0.6), bad), Error);
}

TEST_CASE("constant state prolongs to the next constant state") {
    for (int k : {2, 3}) {
        const double A = 0.6;
        const TransferSpec s = TransferSpec::make(A, k);
        const Field end(build_rescaled_grid(A, 9), 1.0 / A, 1.0 / A);
        const Field next = prolong_stage(end, s);
        CHECK(next.grid.intervals == 9 * k);
        CHECK(next.grid.mesh == end.grid.mesh);
        CHECK(next.boundary == doctest::Approx(1.0 / s.amp_to).epsilon(1e-15));
        for (double v : next.interior) CHECK(v == doctest::Approx(1.0 / s.amp_to).epsilon(1e-13));
        CHECK(edge_consistency_check(end, s) < 1e-13);
        CHECK(laplace_compat_check(end, s).max_residual < 1e-11);
    }
}

TEST_CASE("affine data on interior cells scales by k^(-1/3)") {
    const int N = 10, k = 2;
    const double A = 0.5;
    const Grid g = build_rescaled_grid(A, N);
    Field end(g, 0.0, 1.0 / A);
    for (int i = 1; i < N; ++i)
        for (int j = 1; j < N; ++j) end.at(i, j) = g.coord(i);
    const TransferSpec s = TransferSpec::make(A, k);
    const Field next = prolong_stage(end, s);
    // cells whose whole stencil avoids the boundary ring: 2 <= ci, cj <= N-3
    for (int ci = 2; ci <= N - 3; ++ci)
        for (int cj = 2; cj <= N - 3; ++cj)
            for (int l = 0; l < k; ++l)
                for (int r = 0; r < k; ++r) {
                    const int I = ci * k + l, J = cj * k + r;
                    const double xi = next.grid.coord(I);
                    CHECK(next.at(I, J) == doctest::Approx(std::pow(k, -1.0 / 3.0) * xi).epsilon(1e-12));
                }
}

TEST_CASE("interface and Laplace compatibility on random data") {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(0.5, 2.5);
    for (int trial = 0; trial < 5; ++trial) {
        const double A = 0.3 + 0.1 * trial;
        Field f(build_rescaled_grid(A, 6 + trial), 0.0, 1.0 / A);
        for (double& v : f.interior) v = u(rng);
        for (int k : {2, 3, 4}) {
            const TransferSpec s = TransferSpec::make(A, k);
            CHECK(edge_consistency_check(f, s) <= 1e-11);
            const LaplaceCompat lc = laplace_compat_check(f, s);
            CHECK(lc.nodes_checked > 0);
            CHECK(lc.max_residual <= 1e-10 * std::max(1.0, 1.0 / (f.grid.mesh * f.grid.mesh)));
        }
    }
}

TEST_CASE("cell coefficients use the fill value outside the node set") {
    const Grid g = build_rescaled_grid(1.0, 3);
    const Field f(g, 5.0, 5.0);
    // corner cell stencil reaches index -1; fill 5 keeps it constant
    const CellCoeffs c = cell_coeffs(f, 0, 0, 5.0);
    CHECK(eval_cell(c, 0.5, 0.5) == doctest::Approx(5.0).epsilon(1e-13));
    const CellCoeffs d = cell_coeffs(f, 0, 0, 1.0);
    CHECK(eval_cell(d, 0.5, 0.5) != doctest::Approx(5.0));
    CHECK_THROWS_AS(cell_coeffs(f, 3, 0, 1.0), Error);
}

}  // TEST_SUITE
