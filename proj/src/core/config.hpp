#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drivers.hpp"

namespace quenchstage {

/// Flat `key = value` text. Blank lines and `#` comments are ignored;
/// duplicate keys and malformed lines are config errors.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

std::string read_text_file(const std::string& path);

StagewiseConfig parse_stagewise_config(std::string_view text);
DirectConfig parse_direct_config(std::string_view text);
StagewiseConfig load_stagewise_config(const std::string& path);
DirectConfig load_direct_config(const std::string& path);

/// Canonical key = value rendering; parse(render(c)) == c.
std::string render_config(const StagewiseConfig& cfg);
std::string render_config(const DirectConfig& cfg);

/// Key-addressed access used by the C API. Unknown keys are invalid-argument errors.
void set_config_value(StagewiseConfig& cfg, std::string_view key, double value);
double get_config_value(const StagewiseConfig& cfg, std::string_view key);
void set_config_value(DirectConfig& cfg, std::string_view key, double value);
double get_config_value(const DirectConfig& cfg, std::string_view key);

}  // namespace quenchstage
