#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace quenchstage {

enum class GridKind { Rescaled, Physical };

/// Square lattice with N intervals per direction. Rescaled grids cover
/// [-L, L]^2; physical grids cover [0, 1]^2.
struct Grid {
    GridKind kind = GridKind::Rescaled;
    double half_width = 0.5;  // L for rescaled grids; 0.5 for the unit square
    int intervals = 2;        // N
    double mesh = 0.5;        // h

    int interior_per_side() const { return intervals - 1; }
    std::size_t interior_size() const {
        return static_cast<std::size_t>(intervals - 1) * static_cast<std::size_t>(intervals - 1);
    }
    /// Coordinate of node index i (0..N) along either axis.
    double coord(int i) const {
        return kind == GridKind::Rescaled ? i * mesh - half_width : i * mesh;
    }
    /// h^2 times the total node count, (N+1)^2 nodes.
    double node_area() const;
};

Grid build_rescaled_grid(double amplitude, int intervals);
Grid build_physical_grid(int intervals);

/// Interior nodal values plus one constant Dirichlet value. Interior storage is
/// row-major in (i, j) with i the x-index: value(i, j) = interior[(i-1)*(N-1) + (j-1)].
struct Field {
    Grid grid;
    std::vector<double> interior;
    double boundary = 0.0;

    Field() = default;
    Field(const Grid& g, double fill, double boundary_value);
    Field(const Grid& g, std::vector<double> values, double boundary_value);

    int n() const { return grid.interior_per_side(); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n()) + static_cast<std::size_t>(j - 1);
    }
    double& at(int i, int j) { return interior[index(i, j)]; }
    double at(int i, int j) const { return interior[index(i, j)]; }
    /// Flat-extended value at node (i, j), 0 <= i, j <= N.
    double ext(int i, int j) const {
        const int N = grid.intervals;
        if (i <= 0 || j <= 0 || i >= N || j >= N) return boundary;
        return at(i, j);
    }
    double min_interior() const;
    double max_interior() const;
};

/// Full (N+1)x(N+1) nodal array, row-major in i.
std::vector<double> flat_extend(const Field& y);

/// Forward-difference Dirichlet sum h^2 * sum |D+ Y|^2 over all node pairs.
double grad_norm_sq(const Field& y);

/// Forward-difference bilinear form (grad Y, grad Phi)_{2,h}; phi is an
/// interior array extended by zero.
double grad_bilinear(const Field& y, std::span<const double> phi);

std::vector<double> laplacian_5pt(const Field& y);

double inner_product(std::span<const double> a, std::span<const double> b, double mesh);
double l2_norm(std::span<const double> a, double mesh);
double linf_norm(std::span<const double> a);

}  // namespace quenchstage
