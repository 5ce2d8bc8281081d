#pragma once

#include <array>

#include "grid.hpp"

namespace quenchstage {

/// Offsets (a, b) of the 12-point stencil: the 4x4 block {-1,0,1,2}^2 minus corners.
inline constexpr std::array<std::array<int, 2>, 12> kStencil12 = {{
    {-1, 0}, {-1, 1}, {0, -1}, {0, 0}, {0, 1}, {0, 2},
    {1, -1}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1},
}};

/// Basis monomials 1, t, z, t^2, tz, z^2, t^3, t^2 z, t z^2, z^3, t^3 z, t z^3.
std::array<double, 12> cell_basis(double theta, double zeta);

struct CellCoeffs {
    std::array<double, 12> a{};
};

/// Fits the cell polynomial to data given in kStencil12 order.
CellCoeffs fit_cell(const std::array<double, 12>& data);

double eval_cell(const CellCoeffs& c, double theta, double zeta);

/// Physical Laplacian of the cell polynomial; theta, zeta are local coordinates in units of h.
double laplacian_cell(const CellCoeffs& c, double theta, double zeta, double mesh);

struct TransferSpec {
    int k = 2;
    double amp_from = 0.0;
    double amp_to = 0.0;
    double fill = 0.0;

    /// A_to = k^{-2/3} A_from, fill = 1/A_from.
    static TransferSpec make(double amp_from, int k);
    void validate() const;
};

/// Coefficients of coarse cell (ci, cj), 0 <= ci, cj < N, with out-of-domain
/// stencil entries replaced by `fill`.
CellCoeffs cell_coeffs(const Field& coarse, int ci, int cj, double fill);

/// Coarse-to-fine stage transfer onto the kN grid with unchanged mesh width.
/// Fine nodes are owned half-open by cells; the new boundary ring is 1/A_to.
Field prolong_stage(const Field& end, const TransferSpec& spec);

/// Max |P_left - P_right| on the k+1 shared points of every interior cell edge.
double edge_consistency_check(const Field& end, const TransferSpec& spec);

struct LaplaceCompat {
    double max_residual = 0.0;
    std::size_t nodes_checked = 0;
};

/// Compares the five-point Laplacian of the prolonged field against
/// k^{-4/3} times the patch Laplacian at fine nodes whose stencil stays inside
/// one coarse cell and off the fine boundary ring.
LaplaceCompat laplace_compat_check(const Field& end, const TransferSpec& spec);

}  // namespace quenchstage
