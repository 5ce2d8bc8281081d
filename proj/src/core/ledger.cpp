#include "ledger.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace quenchstage {

void DefectLedger::append(const DefectRow& row) {
    require(row.switch_defect >= 0.0 && row.outer_defect >= 0.0, "DefectLedger: defects must be nonnegative");
    rows_.push_back(row);
    budget_ += row.switch_defect + lambda_ * row.outer_defect;
}

double window_factor(double area) { return area <= 0.5 ? 1.0 : 1.0 / (2.0 * area); }

ContinuationReport continuation_check(double initial_energy, const DefectLedger& ledger,
                                      std::span<const double> areas, double lambda, WindowMode mode) {
    return continuation_check(initial_energy, ledger.budget(), areas, lambda, mode);
}

ContinuationReport continuation_check(double initial_energy, double budget, std::span<const double> areas,
                                      double lambda, WindowMode mode) {
    require(budget >= 0.0, "continuation_check: defect budget must be nonnegative");
    require(!areas.empty(), "continuation_check: need at least one window area");
    ContinuationReport r;
    r.areas.assign(areas.begin(), areas.end());
    for (double a : areas) {
        require(a > 0.0, "continuation_check: window areas must be positive");
        r.q.push_back(window_factor(a));
    }
    r.q_star = *std::min_element(r.q.begin(), r.q.end());
    r.initial_energy = initial_energy;
    r.budget = budget;
    r.threshold = 0.5 * lambda * r.q_star;
    r.inequality_holds = initial_energy + r.budget < r.threshold;

    // A finite record cannot prove sup |Q| < inf; the proxy is that no stage
    // enlarges the window.
    r.window_nongrowing = true;
    for (std::size_t m = 1; m < areas.size(); ++m)
        if (areas[m] > areas[0] * (1.0 + 1e-12)) r.window_nongrowing = false;

    r.mode = mode;
    r.hypothesis_applicable = mode == WindowMode::BoundedWindow && r.window_nongrowing;
    if (mode == WindowMode::FullDomain) {
        r.note = "full-domain run: the energy window grows with every stage, outside the bounded-window "
                 "hypothesis; the criterion is reported as a diagnostic only";
    } else if (!r.window_nongrowing) {
        r.note = "bounded-window run but window area grows across stages; hypothesis not established";
    } else {
        r.note = r.inequality_holds ? "criterion satisfied: no global admissible continuation"
                                    : "criterion not satisfied";
    }
    return r;
}

}  // namespace quenchstage
