#ifndef ULMC_ENGINE_HPP
#define ULMC_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <map>
#include <optional>
#include <vector>

#include "ulmc/channel.hpp"
#include "ulmc/config.hpp"
#include "ulmc/controller.hpp"
#include "ulmc/scenario.hpp"
#include "ulmc/sweep.hpp"

namespace ulmc {

// One obstruction window on one user's serving link.
struct BlockageEvent {
    NodeId ue = 0;
    double t_arr_s = 0.0;
    double t_b_s = 0.0;
};

// Per-user event lists, kept sorted by arrival. Zero-duration events are
// dropped on insert; overlapping windows for the same user are rejected.
class EventSchedule {
  public:
    void add(const BlockageEvent& ev);
    const std::vector<BlockageEvent>& for_ue(NodeId ue) const;
    std::size_t total() const;
    bool empty() const { return by_ue_.empty(); }

  private:
    std::map<NodeId, std::vector<BlockageEvent>> by_ue_;
};

struct SlotSample {
    double t_s = 0.0;
    NodeId ue = 0;
    ServingKind serving = ServingKind::Unconnected;
    NodeId scell = 0;
    double sinr_db = 0.0;   // control-plane SINR of the serving pair
    double rate_bps = 0.0;
    bool blocked = false;   // an obstruction window covers this slot
};

struct DecisionRecord {
    double t_s = 0.0;
    NodeId ue = 0;
    ActionKind action = ActionKind::NoOp;
    long from_cell = -1;  // -1 when the previous serving was not a small cell
    long to_cell = -1;
    int d_ue = -1;
    int d_scell = -1;
    AttachPolicy policy = AttachPolicy::MaxSinr;
};

struct RtDumpRow {
    double t_s = 0.0;
    NodeId scell = 0;
    NodeId ue = 0;
    double sinr_db = 0.0;
    int d_ue = -1;
    int d_scell = -1;
};

struct ChannelTraceRow {
    double t_s = 0.0;
    NodeId scell = 0;
    NodeId ue = 0;
    PathlossState state = PathlossState::Outage;
    double pathloss_db = 0.0;
    double h_frobenius = 0.0;
};

// Optional capture of everything a run produces beyond the summary. The
// channel rows rebuild H every slot for every link, so leave keep_channel
// off unless the scenario is small.
struct MetricsTrace {
    bool keep_samples = true;
    bool keep_rt = false;
    bool keep_channel = false;
    std::vector<SlotSample> samples;
    std::vector<DecisionRecord> decisions;
    std::vector<RtDumpRow> rt_rows;
    std::vector<ChannelTraceRow> channel_rows;
};

struct RunSummary {
    std::uint64_t seed = 0;
    int n_scells = 0;
    int n_ues = 0;
    long n_samples = 0;       // always slot count x user count

    double mean_rate_bps = 0.0;   // over every sample
    double rvar = 0.0;            // population sigma / mean of the samples
    double jain_rc = 1.0;         // over per-user means inside the focus radius
    int n_ue_rc = 0;
    std::vector<double> focus_rates;  // those per-user means, id order
    std::map<NodeId, double> per_ue_mean_rate_bps;
    std::map<NodeId, int> load_by_scell;  // associations at the last epoch

    long n_noop = 0;
    long n_beam_switch = 0;
    long n_handover = 0;
    long n_fallback = 0;
    long n_reconnect = 0;
    long n_rlf = 0;        // transitions of a served user below the threshold
    long n_blockage = 0;   // obstruction windows that hit a serving link

    // Slot-rate accounting restricted to users with a small-cell serving
    // association, split by whether an obstruction window covers the slot.
    double sum_rate_blocked_bps = 0.0;
    long n_slot_blocked = 0;
    double sum_rate_clear_bps = 0.0;
    long n_slot_clear = 0;

    // Self-generated obstruction draws, for checking the arrival law.
    double sum_t_arr_offset_s = 0.0;
    long n_auto_blockage = 0;

    std::vector<IaSession> ia;  // one per user, in id order
};

class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& cfg);
    Simulation(const ScenarioConfig& cfg, Deployment dep);

    void set_schedule(EventSchedule schedule) { schedule_ = std::move(schedule); }
    const Deployment& deployment() const { return dep_; }

    RunSummary run(MetricsTrace* trace = nullptr);

  private:
    ScenarioConfig cfg_;
    Deployment dep_;
    EventSchedule schedule_;
};

// Run n_seeds independent drops. Per-run seeds derive from cfg.seed, so the
// whole batch is one reproducible object. make_schedule, when given, builds
// the obstruction schedule for each run from its deployment and seed.
using ScheduleFactory = std::function<EventSchedule(
    const ScenarioConfig&, const Deployment&, std::uint64_t run_seed)>;

std::vector<std::uint64_t> derive_run_seeds(std::uint64_t master_seed, int n_seeds);

std::vector<RunSummary> run_montecarlo(const ScenarioConfig& cfg, int n_seeds,
                                       const ScheduleFactory& make_schedule = {});

// CSV writers for the capture buffers. Columns are fixed; one header line.
std::string samples_csv(const std::vector<SlotSample>& samples);
std::string decisions_csv(const std::vector<DecisionRecord>& decisions);
std::string rt_csv(const std::vector<RtDumpRow>& rows);
std::string channel_csv(const std::vector<ChannelTraceRow>& rows);

}  // namespace ulmc

#endif
