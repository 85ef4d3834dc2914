#ifndef ULMC_EXPERIMENT_HPP
#define ULMC_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulmc/config.hpp"

namespace ulmc {

// How a preset invocation was customized from the command line. Overrides
// apply on top of the preset's pinned scenario, so a user can probe a
// preset off its defaults (and the pinned values win over a base file).
struct PresetOptions {
    std::optional<ScenarioConfig> base;  // from --config, else defaults
    std::vector<std::pair<std::string, std::string>> overrides;  // --set
    std::optional<std::uint64_t> seed;
    std::optional<int> n_seeds;
};

struct PresetResult {
    std::string name;
    bool all_passed = true;
    std::map<std::string, bool> checks;
    // filename -> content; includes the CSV table, the JSON report and the
    // config echo. Contents are byte-stable for a fixed seed.
    std::vector<std::pair<std::string, std::string>> files;
    std::string json_text;  // same as the .json file, for callers
};

const std::vector<std::string>& preset_names();

PresetResult run_preset(const std::string& name, const PresetOptions& opts);

// Write every file of a result under out_dir (created if missing).
void write_result(const PresetResult& result, const std::string& out_dir);

}  // namespace ulmc

#endif
