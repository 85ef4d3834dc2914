#ifndef ULMC_SWEEP_HPP
#define ULMC_SWEEP_HPP

#include <limits>
#include <map>
#include <vector>

#include "ulmc/channel.hpp"
#include "ulmc/config.hpp"
#include "ulmc/scenario.hpp"

namespace ulmc {

// Best measured pair for one user at one small cell.
struct RtEntry {
    double sinr_db = -std::numeric_limits<double>::infinity();
    int d_ue = -1;
    int d_scell = -1;
};

// Uplink report table: one entry per detected user. Users whose best pair
// falls below the detection threshold do not appear.
struct ReportTable {
    NodeId scell_id = 0;
    double timestamp_s = 0.0;
    std::map<NodeId, RtEntry> entries;
};

// Best receive direction for one user transmit direction.
struct DirectionEntry {
    double sinr_db = -std::numeric_limits<double>::infinity();
    int d_scell = -1;
};

// Full sweep outcome at one cell: the report table plus, per user, the
// best entry for every transmit direction. The per-direction detail is
// what a stored table must keep for the fallback-beam search to have a
// second direction to offer.
struct SweepResult {
    ReportTable rt;
    std::map<NodeId, std::vector<DirectionEntry>> detail;
};

// Exhaustive directional sweep at one cell over the given user links
// (each link must connect some UE to scell_id). Measures the control-plane
// SINR of every (d_ue, d_scell) pair on the current channel snapshot and
// keeps the argmax, ties to the lowest (d_ue, d_scell). With
// cfg.sweep_smear the subpath phases advance by the scan schedule between
// measured pairs instead of being frozen.
SweepResult run_sweep(NodeId scell_id, const std::vector<const LinkChannel*>& links,
                      const Codebook& scell_cb, const Codebook& ue_cb,
                      const ScenarioConfig& cfg, double timestamp_s);

// Delay model for one full sweep: every transmit direction is sounded for
// t_per while the receiver covers its directions, l at a time.
struct SweepDelayModel {
    int n_scell_dirs = 0;
    int n_ue_dirs = 0;
    double t_per_s = 0.0;
    int l = 1;             // simultaneous receive directions
    int rx_dir_count = 1;  // direction count at the receiving side
};

enum class SweepDirection { Uplink, Downlink };

SweepDelayModel make_sweep_delay_model(const ScenarioConfig& cfg, SweepDirection dir,
                                       BfArchitecture rx_arch);

// n_scell_dirs * n_ue_dirs * t_per / l.
double sweep_delay_s(const SweepDelayModel& model);

// Energy of one sweep: front-end power times sweep duration.
double sweep_energy_j(double p_c_w, double delay_s);

}  // namespace ulmc

#endif
