#ifndef ULMC_CONFIG_HPP
#define ULMC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ulmc {

enum class ConnectivityMode { Mc, Sa };
enum class AttachPolicy { MaxSinr, MaxRate };
enum class BfArchitecture { Analog, Digital };
enum class PowerFractionLaw { Exponential, Uniform };
enum class RateShareMode { ActualLoad, SoleUser };

// Statistical channel constants: pathloss laws, state probabilities and the
// cluster/subpath generation knobs.
struct ChannelConstants {
    double alpha_los_db = 61.4;
    double beta_los = 2.0;
    double alpha_nlos_db = 72.0;
    double beta_nlos = 2.92;

    // State probabilities at distance d (meters):
    //   p_out(d)  = max(0, 1 - exp(-a_out * d + b_out))
    //   p_los(d)  = (1 - p_out(d)) * exp(-a_los * d)
    //   p_nlos(d) = 1 - p_out(d) - p_los(d)
    double a_out_per_m = 1.0 / 30.0;
    double b_out = 5.2;
    double a_los_per_m = 1.0 / 67.1;

    // Cluster count is max(1, Poisson(cluster_mean)).
    double cluster_mean = 1.9;
    int subpaths_per_cluster = 10;
    double angular_spread_deg = 10.0;
    PowerFractionLaw power_fraction_law = PowerFractionLaw::Exponential;
};

// Full experiment configuration. Defaults describe the reference scenario:
// 28 GHz small cells with 1 GHz of bandwidth overlaid on a 2 GHz LTE macro
// cell, users at 20 m/s, 1 ms slots.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    ConnectivityMode mode = ConnectivityMode::Mc;
    AttachPolicy policy = AttachPolicy::MaxSinr;

    // Radio parameters.
    double w_mmw_hz = 1e9;
    double fc_mmw_hz = 28e9;
    double ptx_mmw_dbm = 30.0;
    double w_lte_hz = 20e6;
    double fc_lte_hz = 2e9;
    double ptx_lte_dbm = 46.0;
    double w_sig_hz = 10e6;     // bandwidth of one sweep reference signal
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 0.0;
    double gamma_out_db = -5.0;  // minimum usable SINR

    // Arrays and codebooks.
    int scell_rows = 8, scell_cols = 8;
    int ue_rows = 4, ue_cols = 4;
    int n_scell_dirs = 16;
    int n_ue_dirs = 8;
    BfArchitecture scell_bf = BfArchitecture::Digital;
    BfArchitecture ue_bf = BfArchitecture::Analog;

    // Timing.
    double t_sim_s = 10.0;
    double slot_s = 1e-3;
    double t_h_s = 0.2;    // large-scale channel coherence interval
    double t_rt_s = 1.0;   // report/decision period
    double t_sig_s = 10e-6;
    double t_per_s = 200e-6;
    double phi_ov = 0.05;  // signalling overhead fraction = t_sig / t_per

    // Deployment.
    double area_radius_m = 564.0;
    double scell_density_per_km2 = 70.0;
    double ues_per_scell = 10.0;
    double ue_speed_mps = 20.0;

    // Control behaviour.
    double hysteresis_db = 0.0;
    bool rlf_backup = false;          // steer to a stored fallback beam on failure
    bool rlf_backup_cross_cell = true;
    bool rlf_lte_fallback = true;     // drop to LTE when the serving beam dies (Mc only)
    int rt_history_k = 2;
    double subopt_penalty_db = 10.0;  // extra loss on non-optimal paths during blockage
    RateShareMode rate_share = RateShareMode::ActualLoad;
    bool data_interference = true;
    bool control_interference = false;
    bool sweep_smear = false;         // advance fading between scan steps of one sweep
    double rc_radius_m = 70.0;        // fairness evaluation radius

    // Blockage generation. Explicit schedules can always be injected; with
    // auto_blockage every user draws one obstruction per report window with
    // arrival uniform over the window.
    bool auto_blockage = false;
    double blockage_t_b_s = 0.1;

    // Front-end power draw for the sweep energy accounting (watts).
    double p_dbf_scell_w = 1092.3125;
    double p_abf_scell_w = 20.78125;
    double p_dbf_ue_w = 273.09375;
    double p_abf_ue_w = 17.9375;

    ChannelConstants channel;

    // Every invariant violation, one human-readable line each. Empty means
    // the configuration is runnable.
    std::vector<std::string> validate() const;

    // Flat key=value serialization. Keys come out in a fixed order so that
    // emitted files are reproducible byte for byte.
    std::string to_kv_text() const;

    // Stable 64-bit FNV-1a hash of the canonical serialization.
    std::uint64_t config_hash() const;

    // Parse "key=value" lines (# comments, blank lines allowed). Unknown
    // keys or malformed values throw std::runtime_error mentioning the line
    // number.
    static ScenarioConfig from_kv_text(const std::string& text);
    static ScenarioConfig load_file(const std::string& path);
    void save_file(const std::string& path) const;

    // Apply one "key=value" override (the CLI --set flag).
    void set_key(const std::string& key, const std::string& value);
};

std::string to_string(ConnectivityMode m);
std::string to_string(AttachPolicy p);
std::string to_string(BfArchitecture b);

// Shortest decimal representation that parses back to the same double.
// Used everywhere a number ends up in a file, so outputs stay byte-stable.
std::string format_double(double v);

}  // namespace ulmc

#endif
