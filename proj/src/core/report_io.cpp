#include "report_io.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>

#include "config.hpp"
#include "error.hpp"

namespace quenchstage {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) { return fmt::format("{:.15g}", v); }

json stage_json(const StageRecord& s) {
    return {
        {"stage", s.stage},
        {"A_m", s.amplitude},
        {"N_m", s.intervals},
        {"h_m", s.mesh},
        {"A2h2", s.a2h2},
        {"scaled_time", s.scaled_time},
        {"min_W", s.min_at_trigger},
        {"accumulated_time", s.accumulated_time},
        {"E_start", s.energy_start},
        {"E_end", s.energy_end},
        {"K_start", s.K_start},
        {"K_end", s.K_end},
        {"lambda_K_start_inv2", s.coeff_start},
        {"lambda_K_end_inv2", s.coeff_end},
        {"full_steps", s.full_steps},
        {"tau", s.tau},
        {"dissipation_sum", s.dissipation_sum},
        {"energy_increases", s.energy_increases},
        {"max_energy_increase", s.max_energy_increase},
        {"max_picard_iters", s.max_picard_iters},
        {"min_dt_star", s.min_dt_star},
        {"steps_above_dt_star", s.steps_above_dt_star},
    };
}

json conventions_json() {
    const Conventions c;
    return {
        {"picard_seed", c.picard_seed},
        {"K_update", c.k_update},
        {"event_energy", c.event_energy},
        {"partial_step_dissipation", c.partial_step_dissipation},
        {"direct_scheme", c.direct_scheme},
        {"transfer_boundary", c.transfer_boundary},
    };
}

}  // namespace

std::string stages_csv(const StagewiseReport& r) {
    std::string out =
        "stage,A_m,N_m,h_m,A2h2,scaled_time,min_W,accumulated_time,E_start,E_end,"
        "full_steps,tau,dissipation_sum,energy_increases,max_picard_iters,min_dt_star\n";
    for (const auto& s : r.stages)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.stage, num(s.amplitude),
                           s.intervals, num(s.mesh), num(s.a2h2), num(s.scaled_time), num(s.min_at_trigger),
                           num(s.accumulated_time), num(s.energy_start), num(s.energy_end), s.full_steps,
                           num(s.tau), num(s.dissipation_sum), s.energy_increases, s.max_picard_iters,
                           num(s.min_dt_star));
    return out;
}

std::string feedback_csv(const StagewiseReport& r) {
    std::string out = "stage,K_start,K_end,lambda_K_start_inv2,lambda_K_end_inv2\n";
    for (const auto& s : r.stages)
        out += fmt::format("{},{},{},{},{}\n", s.stage, num(s.K_start), num(s.K_end), num(s.coeff_start),
                           num(s.coeff_end));
    return out;
}

std::string transitions_csv(const StagewiseReport& r) {
    std::string out = "from_stage,to_stage,A_from,A_to,N_from,N_to,E_end,E_id,E_start,delta_sw,eps_sw,eps_out\n";
    for (const auto& t : r.transitions)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", t.from_stage, t.from_stage + 1, num(t.amp_from),
                           num(t.amp_to), t.intervals_from, t.intervals_to, num(t.energy_end),
                           num(t.energy_ideal), num(t.energy_start), num(t.signed_jump), num(t.switch_defect),
                           num(t.outer_defect));
    return out;
}

std::string ledger_json(const StagewiseReport& r) {
    json rows = json::array();
    for (const auto& row : r.ledger.rows())
        rows.push_back({
            {"from_stage", row.from_stage},
            {"E_end", row.energy_end},
            {"E_id", row.energy_ideal},
            {"E_start", row.energy_start},
            {"delta_sw", row.signed_jump},
            {"eps_sw", row.switch_defect},
            {"eps_out", row.outer_defect},
        });
    json stages = json::array();
    for (const auto& s : r.stages) stages.push_back(stage_json(s));

    json j;
    j["manifest"] = "manifest_stagewise.json";
    j["mode"] = "full_domain";
    j["lambda"] = r.config.lambda;
    j["initial_energy"] = r.initial_energy;
    j["stages"] = stages;
    j["transitions"] = rows;
    j["defect_budget"] = r.ledger.budget();
    j["balance_slack"] = r.balance_slack;
    j["cumulative_slack"] = r.cumulative_slack;
    if (r.continuation) {
        const auto& c = *r.continuation;
        j["continuation"] = {
            {"areas", c.areas},
            {"q", c.q},
            {"q_star", c.q_star},
            {"E0", c.initial_energy},
            {"D_star", c.budget},
            {"threshold", c.threshold},
            {"inequality_holds", c.inequality_holds},
            {"window_nongrowing", c.window_nongrowing},
            {"hypothesis_applicable", c.hypothesis_applicable},
            {"note", c.note},
        };
    } else {
        j["continuation"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string direct_json(const DirectReport& r) {
    json j;
    j["manifest"] = "manifest_direct.json";
    j["lambda"] = r.config.lambda;
    j["N"] = r.config.n;
    j["dt"] = r.config.dt;
    j["T"] = r.config.final_time;
    j["steps"] = r.steps;
    j["E_start"] = r.energy_start;
    j["E_end"] = r.energy_end;
    j["min_v"] = r.min_v;
    j["max_u"] = r.max_u;
    j["energy_increases"] = r.energy_increases;
    j["max_picard_iters"] = r.max_picard_iters;
    return j.dump(2) + "\n";
}

std::string manifest_json(const std::string& command, const std::string& config_echo,
                          const std::vector<std::string>& files, const std::string& timestamp) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["timestamp"] = timestamp;
    j["config"] = config_echo;
    j["conventions"] = conventions_json();
    j["files"] = files;
    return j.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::Io, fmt::format("cannot open '{}' for writing", tmp));
        out << content;
        out.flush();
        if (!out) fail(ErrorCode::Io, fmt::format("write to '{}' failed", tmp));
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fail(ErrorCode::Io, fmt::format("cannot rename '{}' to '{}': {}", tmp, path, ec.message()));
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
}

}  // namespace

std::vector<std::string> write_stagewise_outputs(const StagewiseReport& r, const std::string& dir,
                                                 const std::string& command) {
    ensure_dir(dir);
    const fs::path base(dir);
    const std::vector<std::pair<std::string, std::string>> files = {
        {"stages.csv", stages_csv(r)},
        {"feedback.csv", feedback_csv(r)},
        {"transitions.csv", transitions_csv(r)},
        {"ledger.json", ledger_json(r)},
    };
    std::vector<std::string> names;
    for (const auto& [name, body] : files) {
        write_atomic((base / name).string(), body);
        names.push_back(name);
    }
    write_atomic((base / "manifest_stagewise.json").string(),
                 manifest_json(command, render_config(r.config), names, utc_timestamp()));
    return names;
}

std::vector<std::string> write_direct_outputs(const DirectReport& r, const std::string& dir,
                                              const std::string& command) {
    ensure_dir(dir);
    const fs::path base(dir);
    write_atomic((base / "direct.json").string(), direct_json(r));
    const std::vector<std::string> names = {"direct.json"};
    write_atomic((base / "manifest_direct.json").string(),
                 manifest_json(command, render_config(r.config), names, utc_timestamp()));
    return names;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace quenchstage
