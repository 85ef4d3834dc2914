#include "ulmc/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "ulmc/units.hpp"

namespace ulmc {

namespace {

// Gain of one pair with subpath phases advanced by their Doppler over
// elapsed seconds (scan-schedule offset within a smeared sweep).
double pair_gain_at(const LinkChannel& link, const Eigen::VectorXcd& w_tx,
                    const Eigen::VectorXcd& w_rx, double elapsed_s) {
    if (elapsed_s == 0.0) return pair_gain(link, w_tx, w_rx);
    LinkChannel shifted = link;
    for (Cluster& cl : shifted.clusters)
        for (Subpath& sp : cl.subpaths) sp.phase += sp.omega * elapsed_s;
    return pair_gain(shifted, w_tx, w_rx);
}

}  // namespace

SweepResult run_sweep(NodeId scell_id, const std::vector<const LinkChannel*>& links,
                      const Codebook& scell_cb, const Codebook& ue_cb,
                      const ScenarioConfig& cfg, double timestamp_s) {
    const int n_ue_dirs = static_cast<int>(ue_cb.weights.size());
    const int n_scell_dirs = static_cast<int>(scell_cb.weights.size());
    const double noise_w = noise_power_w(cfg, cfg.w_sig_hz);
    // Digital receivers fold all their directions into one scan step.
    const int l_rx = cfg.scell_bf == BfArchitecture::Digital ? n_scell_dirs : 1;

    SweepResult out;
    out.rt.scell_id = scell_id;
    out.rt.timestamp_s = timestamp_s;

    // Pair gains per link, reused for the optional cross-user interference
    // term (everyone sounds at once; a rival's signal lands on this cell
    // through whatever direction the rival is driving, averaged over its
    // scan schedule).
    std::vector<Eigen::MatrixXd> gains(links.size());
    std::vector<double> rx_factor(links.size(), 0.0);  // tx power / pathloss
    for (std::size_t n = 0; n < links.size(); ++n) {
        const LinkChannel& link = *links[n];
        if (link.scell_id != scell_id)
            throw std::invalid_argument("run_sweep: link does not belong to this cell");
        if (link.state == PathlossState::Outage) continue;
        if (!cfg.sweep_smear) {
            gains[n] = beamspace_gains(link, scell_cb, ue_cb);
        } else {
            gains[n].resize(n_ue_dirs, n_scell_dirs);
            for (int i = 0; i < n_ue_dirs; ++i)
                for (int j = 0; j < n_scell_dirs; ++j) {
                    const int step = (i * n_scell_dirs + j) / l_rx;
                    gains[n](i, j) = pair_gain_at(link, scell_cb.weights[j],
                                                  ue_cb.weights[i],
                                                  step * cfg.t_per_s);
                }
        }
        rx_factor[n] = rx_power_w(cfg.ptx_mmw_dbm, link.pathloss_db(cfg.channel), 1.0);
    }

    for (std::size_t n = 0; n < links.size(); ++n) {
        const LinkChannel& link = *links[n];
        std::vector<DirectionEntry> detail(n_ue_dirs);
        RtEntry best;
        if (link.state != PathlossState::Outage) {
            for (int i = 0; i < n_ue_dirs; ++i) {
                for (int j = 0; j < n_scell_dirs; ++j) {
                    double interference_w = 0.0;
                    if (cfg.control_interference) {
                        for (std::size_t m = 0; m < links.size(); ++m) {
                            if (m == n || rx_factor[m] == 0.0) continue;
                            interference_w +=
                                rx_factor[m] * gains[m].col(j).mean();
                        }
                    }
                    const double sinr = sinr_db_from_powers(
                        rx_factor[n] * gains[n](i, j), interference_w, noise_w);
                    if (sinr > detail[i].sinr_db) {
                        detail[i].sinr_db = sinr;
                        detail[i].d_scell = j;
                    }
                    if (sinr > best.sinr_db) {
                        best.sinr_db = sinr;
                        best.d_ue = i;
                        best.d_scell = j;
                    }
                }
            }
        }
        if (best.sinr_db >= cfg.gamma_out_db) out.rt.entries[link.ue_id] = best;
        out.detail[link.ue_id] = std::move(detail);
    }
    return out;
}

SweepDelayModel make_sweep_delay_model(const ScenarioConfig& cfg, SweepDirection dir,
                                       BfArchitecture rx_arch) {
    SweepDelayModel m;
    m.n_scell_dirs = cfg.n_scell_dirs;
    m.n_ue_dirs = cfg.n_ue_dirs;
    m.t_per_s = cfg.t_per_s;
    // Uplink: users transmit, cells receive. Downlink: the mirror image.
    m.rx_dir_count = dir == SweepDirection::Uplink ? cfg.n_scell_dirs : cfg.n_ue_dirs;
    m.l = rx_arch == BfArchitecture::Digital ? m.rx_dir_count : 1;
    return m;
}

double sweep_delay_s(const SweepDelayModel& model) {
    if (model.l < 1) throw std::invalid_argument("sweep_delay: l must be >= 1");
    if (model.l > model.rx_dir_count)
        throw std::invalid_argument(
            "sweep_delay: cannot listen to more directions than the receiver has");
    if (model.n_scell_dirs < 1 || model.n_ue_dirs < 1 || !(model.t_per_s > 0.0))
        throw std::invalid_argument("sweep_delay: degenerate model");
    return model.n_scell_dirs * model.n_ue_dirs * model.t_per_s / model.l;
}

double sweep_energy_j(double p_c_w, double delay_s) {
    if (p_c_w < 0.0 || delay_s < 0.0)
        throw std::invalid_argument("sweep_energy: inputs must be >= 0");
    return p_c_w * delay_s;
}

}  // namespace ulmc
