#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ulmc/config.hpp"
#include "ulmc/engine.hpp"
#include "ulmc/experiment.hpp"
#include "ulmc/metrics.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace ulmc;

std::pair<std::string, std::string> split_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::runtime_error("--set expects key=value, got '" + kv + "'");
    return {kv.substr(0, eq), kv.substr(eq + 1)};
}

json summary_json(const RunSummary& s) {
    json j;
    j["seed"] = s.seed;
    j["n_scells"] = s.n_scells;
    j["n_ues"] = s.n_ues;
    j["n_samples"] = s.n_samples;
    j["mean_rate_bps"] = s.mean_rate_bps;
    j["rvar"] = s.rvar;
    j["jain_rc"] = s.jain_rc;
    j["n_ue_rc"] = s.n_ue_rc;
    json per_ue = json::object();
    for (const auto& [id, r] : s.per_ue_mean_rate_bps)
        per_ue[std::to_string(id)] = r;
    j["per_ue_mean_rate_bps"] = per_ue;
    json loads = json::object();
    for (const auto& [id, n] : s.load_by_scell) loads[std::to_string(id)] = n;
    j["load_by_scell"] = loads;
    j["actions"] = {{"noop", s.n_noop},
                    {"beam_switch", s.n_beam_switch},
                    {"handover", s.n_handover},
                    {"fallback_lte", s.n_fallback},
                    {"reconnect", s.n_reconnect}};
    j["n_rlf"] = s.n_rlf;
    j["n_blockage"] = s.n_blockage;
    long connected = 0, errors = 0;
    for (const IaSession& ia : s.ia) {
        if (ia.state == IaState::Connected) ++connected;
        errors += ia.protocol_errors;
    }
    j["ia"] = {{"connected", connected}, {"protocol_errors", errors}};
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int run_free_form(const ScenarioConfig& cfg, int n_seeds, bool trace,
                  const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_file(dir / "config.txt", cfg.to_kv_text());

    if (n_seeds > 1) {
        const auto runs = run_montecarlo(cfg, n_seeds);
        json rep;
        rep["schema_version"] = 1;
        rep["experiment"] = "run";
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(cfg.config_hash()));
        rep["config_hash"] = hash;
        json seeds = json::array();
        for (std::uint64_t s : derive_run_seeds(cfg.seed, n_seeds))
            seeds.push_back(s);
        rep["seeds"] = seeds;

        std::vector<double> rates, rvars;
        json jruns = json::array();
        for (const RunSummary& r : runs) {
            if (std::isfinite(r.mean_rate_bps)) rates.push_back(r.mean_rate_bps);
            if (std::isfinite(r.rvar)) rvars.push_back(r.rvar);
            jruns.push_back(summary_json(r));
        }
        const MeanStderr mr = mean_stderr(rates);
        const MeanStderr mv = mean_stderr(rvars);
        rep["aggregate"] = {{"mean_rate_bps", mr.mean},
                            {"mean_rate_stderr_bps", mr.stderr_},
                            {"rvar_mean", mv.mean},
                            {"rvar_stderr", mv.stderr_}};
        rep["runs"] = jruns;
        write_file(dir / "runs.json", rep.dump(2) + "\n");
        std::cout << "mean rate " << format_double(mr.mean / 1e6) << " Mbps over "
                  << runs.size() << " seeds, wrote " << (dir / "runs.json").string()
                  << "\n";
        return 0;
    }

    Simulation sim(cfg);
    MetricsTrace mt;
    mt.keep_samples = trace;
    mt.keep_rt = trace;
    mt.keep_channel = trace;
    const RunSummary sum = sim.run(trace ? &mt : nullptr);
    write_file(dir / "summary.json", summary_json(sum).dump(2) + "\n");
    if (trace) {
        write_file(dir / "samples.csv", samples_csv(mt.samples));
        write_file(dir / "decisions.csv", decisions_csv(mt.decisions));
        write_file(dir / "rt.csv", rt_csv(mt.rt_rows));
        write_file(dir / "channel.csv", channel_csv(mt.channel_rows));
    }
    std::cout << "mean rate " << format_double(sum.mean_rate_bps / 1e6)
              << " Mbps over " << sum.n_samples << " samples, wrote "
              << (dir / "summary.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Uplink measurement and control simulator for dense millimetre-wave "
        "cells under a coordinating macro cell"};

    std::string preset, config_path, mode_str, out_dir = "out";
    std::vector<std::string> set_args;
    std::uint64_t seed = 0;
    int n_seeds = 1;
    bool list_presets = false, validate_only = false, trace = false;

    app.add_option("--preset", preset, "Named experiment to run")
        ->check(CLI::IsMember(preset_names()));
    app.add_flag("--list-presets", list_presets, "Print preset names and exit");
    app.add_option("--config", config_path, "Scenario file (key=value lines)")
        ->check(CLI::ExistingFile);
    app.add_option("--set", set_args,
                   "Override one scenario key, key=value (repeatable)");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--seeds", n_seeds, "Number of independent drops")
        ->check(CLI::PositiveNumber);
    app.add_option("--mode", mode_str, "Connectivity mode")
        ->check(CLI::IsMember({"mc", "sa"}));
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--trace", trace,
                 "Also write per-slot sample, decision, report-table and "
                 "channel CSVs (single free-form run only)");
    app.add_flag("--validate", validate_only,
                 "Check the assembled configuration and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const std::string& name : preset_names()) std::cout << name << "\n";
        return 0;
    }

    try {
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const std::string& kv : set_args)
            overrides.push_back(split_override(kv));
        if (!mode_str.empty()) overrides.emplace_back("mode", mode_str);

        if (validate_only) {
            ScenarioConfig cfg = config_path.empty()
                                     ? ScenarioConfig{}
                                     : ScenarioConfig::load_file(config_path);
            for (const auto& [k, v] : overrides) cfg.set_key(k, v);
            if (app.count("--seed")) cfg.seed = seed;
            const auto problems = cfg.validate();
            if (problems.empty()) {
                char hash[32];
                std::snprintf(hash, sizeof(hash), "%016llx",
                              static_cast<unsigned long long>(cfg.config_hash()));
                std::cout << "configuration ok, hash " << hash << "\n";
                return 0;
            }
            for (const std::string& p : problems)
                std::cerr << "invalid: " << p << "\n";
            return 1;
        }

        if (!preset.empty()) {
            PresetOptions opts;
            if (!config_path.empty())
                opts.base = ScenarioConfig::load_file(config_path);
            opts.overrides = overrides;
            if (app.count("--seed")) opts.seed = seed;
            if (app.count("--seeds")) opts.n_seeds = n_seeds;

            const PresetResult result = run_preset(preset, opts);
            write_result(result, out_dir);
            for (const auto& [name, ok] : result.checks)
                std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
            std::cout << result.name << ": "
                      << (result.all_passed ? "all checks passed"
                                            : "CHECKS FAILED")
                      << ", " << result.files.size() << " files in " << out_dir
                      << "\n";
            return result.all_passed ? 0 : 1;
        }

        ScenarioConfig cfg = config_path.empty()
                                 ? ScenarioConfig{}
                                 : ScenarioConfig::load_file(config_path);
        for (const auto& [k, v] : overrides) cfg.set_key(k, v);
        if (app.count("--seed")) cfg.seed = seed;
        const auto problems = cfg.validate();
        if (!problems.empty()) {
            for (const std::string& p : problems)
                std::cerr << "invalid: " << p << "\n";
            return 1;
        }
        return run_free_form(cfg, n_seeds, trace, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
