#ifndef ULMC_CONTROLLER_HPP
#define ULMC_CONTROLLER_HPP

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "ulmc/config.hpp"
#include "ulmc/scenario.hpp"
#include "ulmc/sweep.hpp"

namespace ulmc {

// Network-wide table gathered at the macro cell: one row per user, one
// column (possibly absent) per small cell.
struct CompleteReportTable {
    double timestamp_s = 0.0;
    // ue -> (scell -> best entry). Missing key means Absent.
    std::map<NodeId, std::map<NodeId, RtEntry>> rows;
};

// Assemble the per-cell tables of one sweep epoch. Every listed UE gets a
// row (empty when nobody detected it); a cell reporting twice is a
// protocol violation.
CompleteReportTable assemble_crt(const std::vector<ReportTable>& rts,
                                 const std::vector<NodeId>& ue_ids,
                                 double timestamp_s);

enum class ServingKind { SCell, LteFallback, Unconnected };

struct Association {
    ServingKind kind = ServingKind::Unconnected;
    NodeId scell = 0;
    int d_ue = -1;
    int d_scell = -1;
    double sinr_db = 0.0;  // table SINR at decision time
    double since_s = 0.0;
};

bool same_serving(const Association& a, const Association& b);

// Pick a serving cell and beam pair for every UE in the table.
//
// MaxSinr takes the row argmax; MaxRate weighs each candidate by the
// bandwidth share it would actually get, walking users in id order and
// counting each assignment into the loads before the next user chooses.
// Rows with no usable entry go to LTE fallback (multi-connectivity) or
// stay unconnected (standalone). A nonzero hysteresis keeps the previous
// cell unless a challenger beats it by that margin.
std::map<NodeId, Association> decide_attachment(
    const CompleteReportTable& crt, AttachPolicy policy,
    std::map<NodeId, int> loads, const ScenarioConfig& cfg,
    const std::map<NodeId, Association>* previous = nullptr);

enum class ActionKind { NoOp, BeamSwitch, Handover, FallbackLte, Reconnect };

// Classify the transition between two consecutive associations of one UE.
ActionKind decide_action(const Association& prev, const Association& next);

const char* to_string(ActionKind a);
const char* to_string(ServingKind k);

// Initial-access procedure: LTE sync, directional random access, table
// forwarding, direction assignment, random access response, connection
// request.
enum class IaState {
    Idle,
    LteSynced,
    RapSweeping,
    RtForwarded,
    DirectionsAssigned,
    RarReceived,
    Connected
};

enum class IaEvent {
    LteSyncDone,
    RapBroadcast,
    RtForward,
    AssignDirections,  // carries the decided cell and beam pair
    Rar,
    Crm
};

struct IaSession {
    NodeId ue = 0;
    IaState state = IaState::Idle;
    AttachPolicy policy = AttachPolicy::MaxSinr;
    NodeId scell = 0;
    int d_ue = -1;
    int d_scell = -1;
    int protocol_errors = 0;
    std::vector<std::pair<IaState, IaEvent>> transcript;
};

// Advance the session by one legal transition. Out-of-order events are
// recorded as protocol errors and leave the state unchanged. Returns true
// when the event was accepted.
bool ia_step(IaSession& session, IaEvent event,
             const Association* assignment = nullptr);

const char* to_string(IaState s);
const char* to_string(IaEvent e);

// Serving-beam failure: SINR strictly below the detection threshold.
bool detect_rlf(double serving_sinr_db, const ScenarioConfig& cfg);

struct BeamPair {
    NodeId scell = 0;
    int d_ue = -1;
    int d_scell = -1;
};

// Per-user snapshot of one sweep epoch with per-direction alternatives,
// the raw material for the fallback-beam search.
struct DirectionRow {
    double timestamp_s = 0.0;
    std::map<NodeId, std::vector<DirectionEntry>> per_scell;  // indexed by d_ue
};

// Ring buffer of the most recent direction rows for one UE.
struct RtHistory {
    int capacity = 2;
    std::deque<DirectionRow> rows;  // oldest first
    void push(DirectionRow row);
};

// Pick a replacement beam after a failure on blocked. Preference order:
// best surviving direction on the same cell (d_ue must differ from the
// blocked one), then, if allowed, the best entry on any other cell. Only
// entries at or above the detection threshold qualify.
std::optional<Association> backup_beam(const RtHistory& history,
                                       const BeamPair& blocked,
                                       const ScenarioConfig& cfg);

}  // namespace ulmc

#endif
