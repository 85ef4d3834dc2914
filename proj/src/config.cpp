#include "ulmc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ulmc {

std::string format_double(double v) {
    // Shortest representation that round-trips exactly.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error("trailing characters in number '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::runtime_error("trailing characters in integer '" + s + "'");
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::runtime_error("trailing characters in integer '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::runtime_error("expected true/false, got '" + s + "'");
}

struct Field {
    const char* key;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

#define ULMC_F_DOUBLE(key, member)                                          \
    Field{key, [](const ScenarioConfig& c) { return format_double(c.member); }, \
          [](ScenarioConfig& c, const std::string& v) { c.member = parse_double(v); }}
#define ULMC_F_INT(key, member)                                             \
    Field{key, [](const ScenarioConfig& c) { return std::to_string(c.member); }, \
          [](ScenarioConfig& c, const std::string& v) { c.member = parse_int(v); }}
#define ULMC_F_BOOL(key, member)                                            \
    Field{key, [](const ScenarioConfig& c) { return c.member ? "true" : "false"; }, \
          [](ScenarioConfig& c, const std::string& v) { c.member = parse_bool(v); }}

const std::vector<Field>& field_table() {
    static const std::vector<Field> table = {
        Field{"seed", [](const ScenarioConfig& c) { return std::to_string(c.seed); },
              [](ScenarioConfig& c, const std::string& v) { c.seed = parse_u64(v); }},
        Field{"mode", [](const ScenarioConfig& c) { return to_string(c.mode); },
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "mc") c.mode = ConnectivityMode::Mc;
                  else if (v == "sa") c.mode = ConnectivityMode::Sa;
                  else throw std::runtime_error("mode must be mc or sa, got '" + v + "'");
              }},
        Field{"attach_policy", [](const ScenarioConfig& c) { return to_string(c.policy); },
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "max_sinr") c.policy = AttachPolicy::MaxSinr;
                  else if (v == "max_rate") c.policy = AttachPolicy::MaxRate;
                  else throw std::runtime_error("attach_policy must be max_sinr or max_rate");
              }},
        ULMC_F_DOUBLE("w_mmw_hz", w_mmw_hz),
        ULMC_F_DOUBLE("fc_mmw_hz", fc_mmw_hz),
        ULMC_F_DOUBLE("ptx_mmw_dbm", ptx_mmw_dbm),
        ULMC_F_DOUBLE("w_lte_hz", w_lte_hz),
        ULMC_F_DOUBLE("fc_lte_hz", fc_lte_hz),
        ULMC_F_DOUBLE("ptx_lte_dbm", ptx_lte_dbm),
        ULMC_F_DOUBLE("w_sig_hz", w_sig_hz),
        ULMC_F_DOUBLE("noise_psd_dbm_hz", noise_psd_dbm_hz),
        ULMC_F_DOUBLE("noise_figure_db", noise_figure_db),
        ULMC_F_DOUBLE("gamma_out_db", gamma_out_db),
        ULMC_F_INT("scell_rows", scell_rows),
        ULMC_F_INT("scell_cols", scell_cols),
        ULMC_F_INT("ue_rows", ue_rows),
        ULMC_F_INT("ue_cols", ue_cols),
        ULMC_F_INT("n_scell_dirs", n_scell_dirs),
        ULMC_F_INT("n_ue_dirs", n_ue_dirs),
        Field{"scell_bf", [](const ScenarioConfig& c) { return to_string(c.scell_bf); },
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "digital") c.scell_bf = BfArchitecture::Digital;
                  else if (v == "analog") c.scell_bf = BfArchitecture::Analog;
                  else throw std::runtime_error("scell_bf must be digital or analog");
              }},
        Field{"ue_bf", [](const ScenarioConfig& c) { return to_string(c.ue_bf); },
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "digital") c.ue_bf = BfArchitecture::Digital;
                  else if (v == "analog") c.ue_bf = BfArchitecture::Analog;
                  else throw std::runtime_error("ue_bf must be digital or analog");
              }},
        ULMC_F_DOUBLE("t_sim_s", t_sim_s),
        ULMC_F_DOUBLE("slot_s", slot_s),
        ULMC_F_DOUBLE("t_h_s", t_h_s),
        ULMC_F_DOUBLE("t_rt_s", t_rt_s),
        ULMC_F_DOUBLE("t_sig_s", t_sig_s),
        ULMC_F_DOUBLE("t_per_s", t_per_s),
        ULMC_F_DOUBLE("phi_ov", phi_ov),
        ULMC_F_DOUBLE("area_radius_m", area_radius_m),
        ULMC_F_DOUBLE("scell_density_per_km2", scell_density_per_km2),
        ULMC_F_DOUBLE("ues_per_scell", ues_per_scell),
        ULMC_F_DOUBLE("ue_speed_mps", ue_speed_mps),
        ULMC_F_DOUBLE("hysteresis_db", hysteresis_db),
        ULMC_F_BOOL("rlf_backup", rlf_backup),
        ULMC_F_BOOL("rlf_backup_cross_cell", rlf_backup_cross_cell),
        ULMC_F_BOOL("rlf_lte_fallback", rlf_lte_fallback),
        ULMC_F_INT("rt_history_k", rt_history_k),
        ULMC_F_DOUBLE("subopt_penalty_db", subopt_penalty_db),
        Field{"rate_share",
              [](const ScenarioConfig& c) {
                  return c.rate_share == RateShareMode::ActualLoad ? "actual_load" : "sole_user";
              },
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "actual_load") c.rate_share = RateShareMode::ActualLoad;
                  else if (v == "sole_user") c.rate_share = RateShareMode::SoleUser;
                  else throw std::runtime_error("rate_share must be actual_load or sole_user");
              }},
        ULMC_F_BOOL("data_interference", data_interference),
        ULMC_F_BOOL("control_interference", control_interference),
        ULMC_F_BOOL("sweep_smear", sweep_smear),
        ULMC_F_DOUBLE("rc_radius_m", rc_radius_m),
        ULMC_F_BOOL("auto_blockage", auto_blockage),
        ULMC_F_DOUBLE("blockage_t_b_s", blockage_t_b_s),
        ULMC_F_DOUBLE("p_dbf_scell_w", p_dbf_scell_w),
        ULMC_F_DOUBLE("p_abf_scell_w", p_abf_scell_w),
        ULMC_F_DOUBLE("p_dbf_ue_w", p_dbf_ue_w),
        ULMC_F_DOUBLE("p_abf_ue_w", p_abf_ue_w),
        ULMC_F_DOUBLE("ch_alpha_los_db", channel.alpha_los_db),
        ULMC_F_DOUBLE("ch_beta_los", channel.beta_los),
        ULMC_F_DOUBLE("ch_alpha_nlos_db", channel.alpha_nlos_db),
        ULMC_F_DOUBLE("ch_beta_nlos", channel.beta_nlos),
        ULMC_F_DOUBLE("ch_a_out_per_m", channel.a_out_per_m),
        ULMC_F_DOUBLE("ch_b_out", channel.b_out),
        ULMC_F_DOUBLE("ch_a_los_per_m", channel.a_los_per_m),
        ULMC_F_DOUBLE("ch_cluster_mean", channel.cluster_mean),
        ULMC_F_INT("ch_subpaths", channel.subpaths_per_cluster),
        ULMC_F_DOUBLE("ch_angular_spread_deg", channel.angular_spread_deg),
        Field{"ch_power_fraction_law",
              [](const ScenarioConfig& c) {
                  return c.channel.power_fraction_law == PowerFractionLaw::Exponential
                             ? "exp" : "uniform";
              },
              [](ScenarioConfig& c, const std::string& v) {
                  if (v == "exp") c.channel.power_fraction_law = PowerFractionLaw::Exponential;
                  else if (v == "uniform") c.channel.power_fraction_law = PowerFractionLaw::Uniform;
                  else throw std::runtime_error("ch_power_fraction_law must be exp or uniform");
              }},
    };
    return table;
}

#undef ULMC_F_DOUBLE
#undef ULMC_F_INT
#undef ULMC_F_BOOL

bool nearly_divides(double small, double big) {
    if (small <= 0.0 || big <= 0.0) return false;
    const double ratio = big / small;
    return std::fabs(ratio - std::round(ratio)) < 1e-6;
}

}  // namespace

std::string to_string(ConnectivityMode m) { return m == ConnectivityMode::Mc ? "mc" : "sa"; }
std::string to_string(AttachPolicy p) {
    return p == AttachPolicy::MaxSinr ? "max_sinr" : "max_rate";
}
std::string to_string(BfArchitecture b) {
    return b == BfArchitecture::Digital ? "digital" : "analog";
}

std::vector<std::string> ScenarioConfig::validate() const {
    std::vector<std::string> v;
    auto positive = [&](double value, const char* name) {
        if (!(value > 0.0)) v.push_back(std::string(name) + " must be > 0");
    };
    positive(w_mmw_hz, "w_mmw_hz");
    positive(fc_mmw_hz, "fc_mmw_hz");
    positive(w_lte_hz, "w_lte_hz");
    positive(fc_lte_hz, "fc_lte_hz");
    positive(w_sig_hz, "w_sig_hz");
    positive(t_sim_s, "t_sim_s");
    positive(slot_s, "slot_s");
    positive(t_h_s, "t_h_s");
    positive(t_rt_s, "t_rt_s");
    positive(t_sig_s, "t_sig_s");
    positive(t_per_s, "t_per_s");
    positive(area_radius_m, "area_radius_m");
    if (ue_speed_mps < 0.0) v.push_back("ue_speed_mps must be >= 0");
    if (scell_density_per_km2 < 0.0) v.push_back("scell_density_per_km2 must be >= 0");
    if (ues_per_scell < 0.0) v.push_back("ues_per_scell must be >= 0");

    if (t_sig_s > t_per_s) v.push_back("t_sig_s must not exceed t_per_s");
    if (t_per_s > 0.0 && std::fabs(phi_ov - t_sig_s / t_per_s) > 1e-12)
        v.push_back("phi_ov must equal t_sig_s / t_per_s");

    if (scell_rows < 1 || scell_cols < 1 || ue_rows < 1 || ue_cols < 1)
        v.push_back("array dimensions must be >= 1");
    if (n_scell_dirs < 1 || n_scell_dirs > scell_rows * scell_cols)
        v.push_back("n_scell_dirs must be in [1, scell_rows*scell_cols]");
    if (n_ue_dirs < 1 || n_ue_dirs > ue_rows * ue_cols)
        v.push_back("n_ue_dirs must be in [1, ue_rows*ue_cols]");

    if (!nearly_divides(slot_s, t_h_s)) v.push_back("slot_s must divide t_h_s");
    if (!nearly_divides(slot_s, t_rt_s)) v.push_back("slot_s must divide t_rt_s");
    if (t_rt_s + 1e-12 < t_h_s)
        v.push_back("t_rt_s must be >= t_h_s (reports cannot outpace the channel)");

    if (rt_history_k < 1) v.push_back("rt_history_k must be >= 1");
    if (rlf_backup && rt_history_k < 2)
        v.push_back("rt_history_k must be >= 2 when rlf_backup is enabled");
    if (subopt_penalty_db < 0.0) v.push_back("subopt_penalty_db must be >= 0");
    if (hysteresis_db < 0.0) v.push_back("hysteresis_db must be >= 0");
    if (rc_radius_m <= 0.0) v.push_back("rc_radius_m must be > 0");
    if (blockage_t_b_s < 0.0) v.push_back("blockage_t_b_s must be >= 0");
    if (auto_blockage && blockage_t_b_s > 0.0 && t_rt_s < 2.0 * blockage_t_b_s)
        v.push_back("auto blockage requires t_rt_s >= 2 * blockage_t_b_s");

    if (channel.subpaths_per_cluster < 1) v.push_back("ch_subpaths must be >= 1");
    if (channel.cluster_mean < 0.0) v.push_back("ch_cluster_mean must be >= 0");
    if (channel.angular_spread_deg < 0.0) v.push_back("ch_angular_spread_deg must be >= 0");
    if (channel.a_out_per_m < 0.0 || channel.a_los_per_m < 0.0)
        v.push_back("channel state decay constants must be >= 0");
    return v;
}

std::string ScenarioConfig::to_kv_text() const {
    std::ostringstream out;
    for (const Field& f : field_table()) out << f.key << " = " << f.get(*this) << "\n";
    return out.str();
}

std::uint64_t ScenarioConfig::config_hash() const {
    const std::string text = to_kv_text();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ScenarioConfig ScenarioConfig::from_kv_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            cfg.set_key(key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_kv_text(buf.str());
}

void ScenarioConfig::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config file '" + path + "'");
    out << to_kv_text();
}

void ScenarioConfig::set_key(const std::string& key, const std::string& value) {
    for (const Field& f : field_table()) {
        if (key == f.key) {
            f.set(*this, value);
            return;
        }
    }
    throw std::runtime_error("unknown config key '" + key + "'");
}

}  // namespace ulmc
