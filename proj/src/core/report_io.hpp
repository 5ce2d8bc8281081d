#pragma once

#include <string>
#include <vector>

#include "drivers.hpp"

namespace quenchstage {

inline constexpr const char* kVersion = "0.1.0";

/// Algorithmic conventions left open by the reference values; echoed in every manifest.
struct Conventions {
    std::string picard_seed = "previous_state";
    std::string k_update = "recomputed_every_sweep";
    std::string event_energy = "interpolated_event_state";
    std::string partial_step_dissipation = "A^2/(2 ds) ||event - last_full_step||^2";
    std::string direct_scheme = "backward_euler_picard";
    std::string transfer_boundary = "boundary ring reset to 1/A_to";
};

std::string stages_csv(const StagewiseReport& r);
std::string feedback_csv(const StagewiseReport& r);
std::string transitions_csv(const StagewiseReport& r);
std::string ledger_json(const StagewiseReport& r);
std::string direct_json(const DirectReport& r);

std::string manifest_json(const std::string& command, const std::string& config_echo,
                          const std::vector<std::string>& files, const std::string& timestamp);

/// Writes to `<path>.tmp` then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// Data files plus `manifest_stagewise.json`; returns the data file names.
std::vector<std::string> write_stagewise_outputs(const StagewiseReport& r, const std::string& dir,
                                                 const std::string& command);
std::vector<std::string> write_direct_outputs(const DirectReport& r, const std::string& dir,
                                              const std::string& command);

std::string utc_timestamp();

}  // namespace quenchstage
