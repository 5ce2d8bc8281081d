#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace quenchstage {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        fail(ErrorCode::Config, fmt::format("config key '{}': '{}' is not a finite number", key, text));
    return v;
}

long to_integer(std::string_view key, std::string_view text) {
    const double v = to_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e15)
        fail(ErrorCode::Config, fmt::format("config key '{}': '{}' is not an integer", key, text));
    return static_cast<long>(v);
}

int to_int(std::string_view key, double v) {
    if (v != std::floor(v) || std::abs(v) > 2e9) fail(ErrorCode::InvalidArgument, fmt::format("'{}' must be an integer", key));
    return static_cast<int>(v);
}

// Required keys come first; every key not listed here is rejected.
struct KeySet {
    std::vector<std::string_view> required;
    std::vector<std::string_view> optional;
};

const KeySet kStagewiseKeys{
    {"lambda", "u0_amplitude", "center_x", "center_y", "A0", "k", "N0", "ds", "max_stages"},
    {"trigger_threshold", "max_steps_per_stage"},
};

const KeySet kDirectKeys{{"lambda", "N", "dt", "T", "u0_amplitude"}, {}};

std::map<std::string, std::string, std::less<>> checked_map(std::string_view text, const KeySet& keys) {
    std::map<std::string, std::string, std::less<>> out;
    for (auto& [k, v] : parse_key_values(text)) {
        bool known = false;
        for (auto name : keys.required) known = known || name == k;
        for (auto name : keys.optional) known = known || name == k;
        if (!known) fail(ErrorCode::Config, fmt::format("unknown config key '{}'", k));
        out.emplace(k, v);
    }
    for (auto name : keys.required)
        if (!out.contains(name)) fail(ErrorCode::Config, fmt::format("missing config key '{}'", name));
    return out;
}

template <class Fn>
auto as_config_error(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) fail(ErrorCode::Config, e.what());
        throw;
    }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorCode::Config, fmt::format("config line {}: expected 'key = value'", line_no));
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            fail(ErrorCode::Config, fmt::format("config line {}: empty key or value", line_no));
        for (const auto& kv : out)
            if (kv.first == key) fail(ErrorCode::Config, fmt::format("config line {}: duplicate key '{}'", line_no, key));
        out.emplace_back(key, value);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Config, fmt::format("cannot read config file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StagewiseConfig parse_stagewise_config(std::string_view text) {
    const auto kv = checked_map(text, kStagewiseKeys);
    const auto num = [&](std::string_view k) { return to_double(k, kv.find(k)->second); };
    const auto integer = [&](std::string_view k) { return to_integer(k, kv.find(k)->second); };

    StagewiseConfig c;
    c.lambda = num("lambda");
    c.u0_amplitude = num("u0_amplitude");
    c.center_x = num("center_x");
    c.center_y = num("center_y");
    c.amp0 = num("A0");
    c.k = static_cast<int>(integer("k"));
    c.n0 = static_cast<int>(integer("N0"));
    c.ds = num("ds");
    c.max_stages = static_cast<int>(integer("max_stages"));
    if (kv.contains("max_steps_per_stage")) c.max_steps_per_stage = integer("max_steps_per_stage");
    as_config_error([&] {
        c.validate();
        return 0;
    });
    if (kv.contains("trigger_threshold")) {
        const double thr = num("trigger_threshold");
        if (std::abs(thr - c.trigger_threshold()) > 1e-12)
            fail(ErrorCode::Config, fmt::format("config key 'trigger_threshold': {} differs from k^(-2/3) = {:.12f}",
                                                thr, c.trigger_threshold()));
    }
    return c;
}

DirectConfig parse_direct_config(std::string_view text) {
    const auto kv = checked_map(text, kDirectKeys);
    const auto num = [&](std::string_view k) { return to_double(k, kv.find(k)->second); };
    DirectConfig c;
    c.lambda = num("lambda");
    c.n = static_cast<int>(to_integer("N", kv.find("N")->second));
    c.dt = num("dt");
    c.final_time = num("T");
    c.u0_amplitude = num("u0_amplitude");
    as_config_error([&] {
        c.validate();
        return 0;
    });
    return c;
}

StagewiseConfig load_stagewise_config(const std::string& path) { return parse_stagewise_config(read_text_file(path)); }

DirectConfig load_direct_config(const std::string& path) { return parse_direct_config(read_text_file(path)); }

std::string render_config(const StagewiseConfig& c) {
    return fmt::format(
        "lambda = {}\nu0_amplitude = {}\ncenter_x = {}\ncenter_y = {}\nA0 = {}\nk = {}\nN0 = {}\nds = {}\n"
        "max_stages = {}\nmax_steps_per_stage = {}\n",
        c.lambda, c.u0_amplitude, c.center_x, c.center_y, c.amp0, c.k, c.n0, c.ds, c.max_stages,
        c.max_steps_per_stage);
}

std::string render_config(const DirectConfig& c) {
    return fmt::format("lambda = {}\nN = {}\ndt = {}\nT = {}\nu0_amplitude = {}\n", c.lambda, c.n, c.dt,
                       c.final_time, c.u0_amplitude);
}

void set_config_value(StagewiseConfig& c, std::string_view key, double v) {
    if (key == "lambda") c.lambda = v;
    else if (key == "u0_amplitude") c.u0_amplitude = v;
    else if (key == "center_x") c.center_x = v;
    else if (key == "center_y") c.center_y = v;
    else if (key == "A0") c.amp0 = v;
    else if (key == "k") c.k = to_int(key, v);
    else if (key == "N0") c.n0 = to_int(key, v);
    else if (key == "ds") c.ds = v;
    else if (key == "max_stages") c.max_stages = to_int(key, v);
    else if (key == "max_steps_per_stage") c.max_steps_per_stage = to_int(key, v);
    else fail(ErrorCode::InvalidArgument, fmt::format("unknown stagewise config key '{}'", key));
}

double get_config_value(const StagewiseConfig& c, std::string_view key) {
    if (key == "lambda") return c.lambda;
    if (key == "u0_amplitude") return c.u0_amplitude;
    if (key == "center_x") return c.center_x;
    if (key == "center_y") return c.center_y;
    if (key == "A0") return c.amp0;
    if (key == "k") return c.k;
    if (key == "N0") return c.n0;
    if (key == "ds") return c.ds;
    if (key == "max_stages") return c.max_stages;
    if (key == "max_steps_per_stage") return static_cast<double>(c.max_steps_per_stage);
    if (key == "trigger_threshold") return c.trigger_threshold();
    fail(ErrorCode::InvalidArgument, fmt::format("unknown stagewise config key '{}'", key));
}

void set_config_value(DirectConfig& c, std::string_view key, double v) {
    if (key == "lambda") c.lambda = v;
    else if (key == "N") c.n = to_int(key, v);
    else if (key == "dt") c.dt = v;
    else if (key == "T") c.final_time = v;
    else if (key == "u0_amplitude") c.u0_amplitude = v;
    else fail(ErrorCode::InvalidArgument, fmt::format("unknown direct config key '{}'", key));
}

double get_config_value(const DirectConfig& c, std::string_view key) {
    if (key == "lambda") return c.lambda;
    if (key == "N") return c.n;
    if (key == "dt") return c.dt;
    if (key == "T") return c.final_time;
    if (key == "u0_amplitude") return c.u0_amplitude;
    fail(ErrorCode::InvalidArgument, fmt::format("unknown direct config key '{}'", key));
}

}  // namespace quenchstage
