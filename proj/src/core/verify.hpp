#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "grid.hpp"

namespace quenchstage {

struct VerifyCheck {
    std::string suite;
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool informational = false;  // reported, never fails the suite
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;

    bool passed() const;
    std::string to_json() const;
};

/// green, unisolvence, edge, laplace, dissipation, oracle, changevar, all
const std::vector<std::string>& verify_suite_names();
bool is_verify_suite(std::string_view name);

/// Throws invalid-argument for an unknown suite name.
VerifyReport run_verify(std::string_view suite);

/// W = (1 - a (sin(pi x) sin(pi y))^p) / A with (x, y) = (1/2, 1/2) + A^{3/2} xi,
/// sampled on `grid`; the boundary value is 1/A.
Field smooth_rescaled_profile(const Grid& grid, double amplitude, double a, int power);

struct RefinementStudy {
    std::vector<int> levels;
    std::vector<double> dirichlet_gap;   // prolonged vs ideal transfer
    std::vector<double> reciprocal_gap;
    std::vector<double> literal_gap;     // prolonged vs coarse original, full energy
    double observed_order = 0.0;         // min pairwise order over the two gap sequences
    double literal_order = 0.0;
};

RefinementStudy ideal_transfer_refinement(std::vector<int> levels, int power = 4);

}  // namespace quenchstage
