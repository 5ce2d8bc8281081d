#pragma once

#include <span>
#include <string>
#include <vector>

namespace quenchstage {

struct DefectRow {
    int from_stage = 0;
    double energy_end = 0.0;       // E_{h_m,m}(Z_m^{J_m})
    double energy_ideal = 0.0;     // E^id_{h_{m+1},m+1}(Z_{m+1}^0)
    double energy_start = 0.0;     // E_{h_{m+1},m+1}(Z_{m+1}^0), actual outer update
    double signed_jump = 0.0;      // delta^sw
    double switch_defect = 0.0;    // eps^sw
    double outer_defect = 0.0;     // eps^out
};

/// Append-only record of stage switches and the running defect budget.
class DefectLedger {
public:
    explicit DefectLedger(double lambda = 0.0) : lambda_(lambda) {}

    void append(const DefectRow& row);

    std::span<const DefectRow> rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    double lambda() const { return lambda_; }
    /// D* = sum(eps^sw + lambda eps^out)
    double budget() const { return budget_; }

private:
    double lambda_;
    double budget_ = 0.0;
    std::vector<DefectRow> rows_;
};

enum class WindowMode { FullDomain, BoundedWindow };

struct ContinuationReport {
    std::vector<double> areas;
    std::vector<double> q;
    double q_star = 0.0;
    double initial_energy = 0.0;
    double budget = 0.0;
    double threshold = 0.0;  // lambda q* / 2
    bool inequality_holds = false;  // E0 + D* < lambda q* / 2
    bool window_nongrowing = false;
    WindowMode mode = WindowMode::FullDomain;
    bool hypothesis_applicable = false;
    std::string note;
};

/// q = 1 for |Q| <= 1/2, else 1/(2|Q|).
double window_factor(double area);

ContinuationReport continuation_check(double initial_energy, const DefectLedger& ledger,
                                      std::span<const double> areas, double lambda, WindowMode mode);
ContinuationReport continuation_check(double initial_energy, double budget, std::span<const double> areas,
                                      double lambda, WindowMode mode);

}  // namespace quenchstage
