#include "prolongation.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "error.hpp"

namespace quenchstage {

std::array<double, 12> cell_basis(double t, double z) {
    return {1.0, t, z, t * t, t * z, z * z, t * t * t, t * t * z, t * z * z, z * z * z, t * t * t * z, t * z * z * z};
}

namespace {

const Eigen::Matrix<double, 12, 12>& reference_inverse() {
    static const Eigen::Matrix<double, 12, 12> inv = [] {
        Eigen::Matrix<double, 12, 12> m;
        for (int r = 0; r < 12; ++r) {
            const auto row = cell_basis(kStencil12[r][0], kStencil12[r][1]);
            for (int c = 0; c < 12; ++c) m(r, c) = row[c];
        }
        Eigen::FullPivLU<Eigen::Matrix<double, 12, 12>> lu(m);
        if (!lu.isInvertible()) fail(ErrorCode::Internal, "12-point reference matrix is singular");
        return Eigen::Matrix<double, 12, 12>(lu.inverse());
    }();
    return inv;
}

}  // namespace

CellCoeffs fit_cell(const std::array<double, 12>& data) {
    const auto& inv = reference_inverse();
    CellCoeffs c;
    for (int r = 0; r < 12; ++r) {
        double s = 0.0;
        for (int q = 0; q < 12; ++q) s += inv(r, q) * data[q];
        c.a[r] = s;
    }
    return c;
}

double eval_cell(const CellCoeffs& c, double theta, double zeta) {
    const auto b = cell_basis(theta, zeta);
    double s = 0.0;
    for (int r = 0; r < 12; ++r) s += c.a[r] * b[r];
    return s;
}

double laplacian_cell(const CellCoeffs& c, double t, double z, double mesh) {
    const auto& a = c.a;
    const double lap = 2.0 * (a[3] + a[5]) + (6.0 * a[6] + 2.0 * a[8]) * t + (2.0 * a[7] + 6.0 * a[9]) * z +
                       6.0 * (a[10] + a[11]) * t * z;
    return lap / (mesh * mesh);
}

TransferSpec TransferSpec::make(double amp_from, int k) {
    require(amp_from > 0.0, "TransferSpec: amplitude must be positive");
    require(k >= 2, "TransferSpec: stage factor must be at least 2");
    TransferSpec s;
    s.k = k;
    s.amp_from = amp_from;
    s.amp_to = amp_from * std::pow(static_cast<double>(k), -2.0 / 3.0);
    s.fill = 1.0 / amp_from;
    return s;
}

void TransferSpec::validate() const {
    require(k >= 2, "TransferSpec: stage factor must be at least 2");
    require(amp_from > 0.0 && amp_to > 0.0 && fill > 0.0, "TransferSpec: amplitudes and fill must be positive");
    const double kp = std::pow(static_cast<double>(k), 2.0 / 3.0);
    require(std::abs(amp_to / amp_from * kp - 1.0) <= 1e-12, "TransferSpec: A_to must equal k^{-2/3} A_from");
    require(std::abs(kp * fill * amp_to - 1.0) <= 1e-12, "TransferSpec: k^{2/3} fill must equal 1/A_to");
}

CellCoeffs cell_coeffs(const Field& coarse, int ci, int cj, double fill) {
    const int N = coarse.grid.intervals;
    require(ci >= 0 && cj >= 0 && ci < N && cj < N, "cell_coeffs: cell index out of range");
    std::array<double, 12> data{};
    for (int s = 0; s < 12; ++s) {
        const int i = ci + kStencil12[s][0];
        const int j = cj + kStencil12[s][1];
        data[s] = (i < 0 || j < 0 || i > N || j > N) ? fill : coarse.ext(i, j);
    }
    return fit_cell(data);
}

Field prolong_stage(const Field& end, const TransferSpec& spec) {
    spec.validate();
    const int N = end.grid.intervals;
    const int k = spec.k;
    const double scale = std::pow(static_cast<double>(k), 2.0 / 3.0);

    Grid fine = end.grid;
    fine.intervals = k * N;
    fine.half_width = end.grid.half_width * k;
    Field out(fine, 0.0, 1.0 / spec.amp_to);

    const int Nf = fine.intervals;
    for (int ci = 0; ci < N; ++ci) {
        for (int cj = 0; cj < N; ++cj) {
            const CellCoeffs c = cell_coeffs(end, ci, cj, spec.fill);
            const int l_end = ci == N - 1 ? k : k - 1;
            const int r_end = cj == N - 1 ? k : k - 1;
            for (int l = 0; l <= l_end; ++l) {
                const int I = ci * k + l;
                if (I <= 0 || I >= Nf) continue;
                for (int r = 0; r <= r_end; ++r) {
                    const int J = cj * k + r;
                    if (J <= 0 || J >= Nf) continue;
                    out.at(I, J) = scale * eval_cell(c, static_cast<double>(l) / k, static_cast<double>(r) / k);
                }
            }
        }
    }
    return out;
}

double edge_consistency_check(const Field& end, const TransferSpec& spec) {
    const int N = end.grid.intervals;
    const int k = spec.k;
    double worst = 0.0;
    for (int ci = 0; ci < N; ++ci) {
        for (int cj = 0; cj < N; ++cj) {
            const CellCoeffs here = cell_coeffs(end, ci, cj, spec.fill);
            if (ci + 1 < N) {
                const CellCoeffs right = cell_coeffs(end, ci + 1, cj, spec.fill);
                for (int r = 0; r <= k; ++r) {
                    const double z = static_cast<double>(r) / k;
                    worst = std::max(worst, std::abs(eval_cell(here, 1.0, z) - eval_cell(right, 0.0, z)));
                }
            }
            if (cj + 1 < N) {
                const CellCoeffs up = cell_coeffs(end, ci, cj + 1, spec.fill);
                for (int l = 0; l <= k; ++l) {
                    const double t = static_cast<double>(l) / k;
                    worst = std::max(worst, std::abs(eval_cell(here, t, 1.0) - eval_cell(up, t, 0.0)));
                }
            }
        }
    }
    return worst;
}

LaplaceCompat laplace_compat_check(const Field& end, const TransferSpec& spec) {
    const Field fine = prolong_stage(end, spec);
    const int N = end.grid.intervals;
    const int k = spec.k;
    const int Nf = fine.grid.intervals;
    const double h = end.grid.mesh;
    const double inv_h2 = 1.0 / (h * h);
    const double factor = std::pow(static_cast<double>(k), -4.0 / 3.0);

    LaplaceCompat out;
    for (int ci = 0; ci < N; ++ci) {
        for (int cj = 0; cj < N; ++cj) {
            const CellCoeffs c = cell_coeffs(end, ci, cj, spec.fill);
            for (int l = 1; l < k; ++l) {
                for (int r = 1; r < k; ++r) {
                    const int I = ci * k + l;
                    const int J = cj * k + r;
                    if (I - 1 <= 0 || J - 1 <= 0 || I + 1 >= Nf || J + 1 >= Nf) continue;
                    const double lap = (fine.at(I + 1, J) + fine.at(I - 1, J) + fine.at(I, J + 1) +
                                        fine.at(I, J - 1) - 4.0 * fine.at(I, J)) *
                                       inv_h2;
                    const double expect =
                        factor * laplacian_cell(c, static_cast<double>(l) / k, static_cast<double>(r) / k, h);
                    out.max_residual = std::max(out.max_residual, std::abs(lap - expect));
                    ++out.nodes_checked;
                }
            }
        }
    }
    return out;
}

}  // namespace quenchstage
