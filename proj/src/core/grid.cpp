#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "error.hpp"

namespace quenchstage {

double Grid::node_area() const {
    const double nodes = static_cast<double>(intervals + 1);
    return mesh * mesh * nodes * nodes;
}

Grid build_rescaled_grid(double amplitude, int intervals) {
    require(amplitude > 0.0 && std::isfinite(amplitude), "build_rescaled_grid: amplitude must be positive");
    require(intervals >= 2, "build_rescaled_grid: need at least 2 intervals");
    Grid g;
    g.kind = GridKind::Rescaled;
    g.half_width = 1.0 / (2.0 * std::pow(amplitude, 1.5));
    g.intervals = intervals;
    g.mesh = 2.0 * g.half_width / intervals;
    return g;
}

Grid build_physical_grid(int intervals) {
    require(intervals >= 2, "build_physical_grid: need at least 2 intervals");
    Grid g;
    g.kind = GridKind::Physical;
    g.half_width = 0.5;
    g.intervals = intervals;
    g.mesh = 1.0 / intervals;
    return g;
}

Field::Field(const Grid& g, double fill, double boundary_value)
    : grid(g), interior(g.interior_size(), fill), boundary(boundary_value) {}

Field::Field(const Grid& g, std::vector<double> values, double boundary_value)
    : grid(g), interior(std::move(values)), boundary(boundary_value) {
    require(interior.size() == g.interior_size(),
            "Field: interior has " + std::to_string(interior.size()) + " values, grid needs " +
                std::to_string(g.interior_size()));
}

double Field::min_interior() const {
    return interior.empty() ? boundary : *std::min_element(interior.begin(), interior.end());
}

double Field::max_interior() const {
    return interior.empty() ? boundary : *std::max_element(interior.begin(), interior.end());
}

std::vector<double> flat_extend(const Field& y) {
    const int N = y.grid.intervals;
    std::vector<double> out(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(N + 1));
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) out[static_cast<std::size_t>(i) * (N + 1) + j] = y.ext(i, j);
    return out;
}

double grad_norm_sq(const Field& y) {
    // h^2 * |(a-b)/h|^2 = (a-b)^2
    const int N = y.grid.intervals;
    double sum = 0.0;
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            const double c = y.ext(i, j);
            if (i < N) {
                const double d = y.ext(i + 1, j) - c;
                sum += d * d;
            }
            if (j < N) {
                const double d = y.ext(i, j + 1) - c;
                sum += d * d;
            }
        }
    }
    return sum;
}

double grad_bilinear(const Field& y, std::span<const double> phi) {
    require(phi.size() == y.interior.size(), "grad_bilinear: shape mismatch");
    const int N = y.grid.intervals;
    const Field p(y.grid, std::vector<double>(phi.begin(), phi.end()), 0.0);
    double sum = 0.0;
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            if (i < N) sum += (y.ext(i + 1, j) - y.ext(i, j)) * (p.ext(i + 1, j) - p.ext(i, j));
            if (j < N) sum += (y.ext(i, j + 1) - y.ext(i, j)) * (p.ext(i, j + 1) - p.ext(i, j));
        }
    }
    return sum;
}

std::vector<double> laplacian_5pt(const Field& y) {
    const int n = y.n();
    const double inv_h2 = 1.0 / (y.grid.mesh * y.grid.mesh);
    std::vector<double> out(y.interior.size());
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            out[y.index(i, j)] =
                (y.ext(i + 1, j) + y.ext(i - 1, j) + y.ext(i, j + 1) + y.ext(i, j - 1) - 4.0 * y.at(i, j)) *
                inv_h2;
    return out;
}

double inner_product(std::span<const double> a, std::span<const double> b, double mesh) {
    require(a.size() == b.size(), "inner_product: shape mismatch");
    double s = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) s += a[p] * b[p];
    return mesh * mesh * s;
}

double l2_norm(std::span<const double> a, double mesh) { return std::sqrt(inner_product(a, a, mesh)); }

double linf_norm(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace quenchstage
