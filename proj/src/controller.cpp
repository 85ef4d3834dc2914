#include "ulmc/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "ulmc/units.hpp"

namespace ulmc {

CompleteReportTable assemble_crt(const std::vector<ReportTable>& rts,
                                 const std::vector<NodeId>& ue_ids,
                                 double timestamp_s) {
    CompleteReportTable crt;
    crt.timestamp_s = timestamp_s;
    for (NodeId ue : ue_ids) crt.rows[ue];  // row exists even if all-Absent
    std::map<NodeId, bool> seen;
    for (const ReportTable& rt : rts) {
        if (seen[rt.scell_id])
            throw std::runtime_error("assemble_crt: duplicate report from cell " +
                                     std::to_string(rt.scell_id));
        seen[rt.scell_id] = true;
        for (const auto& [ue, entry] : rt.entries) {
            auto row = crt.rows.find(ue);
            if (row == crt.rows.end())
                throw std::runtime_error("assemble_crt: report for unknown UE " +
                                         std::to_string(ue));
            row->second[rt.scell_id] = entry;
        }
    }
    return crt;
}

bool same_serving(const Association& a, const Association& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != ServingKind::SCell) return true;
    return a.scell == b.scell && a.d_ue == b.d_ue && a.d_scell == b.d_scell;
}

std::map<NodeId, Association> decide_attachment(
    const CompleteReportTable& crt, AttachPolicy policy,
    std::map<NodeId, int> loads, const ScenarioConfig& cfg,
    const std::map<NodeId, Association>* previous) {
    std::map<NodeId, Association> out;
    for (const auto& [ue, row] : crt.rows) {
        Association a;
        a.since_s = crt.timestamp_s;
        if (row.empty()) {
            a.kind = cfg.mode == ConnectivityMode::Mc ? ServingKind::LteFallback
                                                      : ServingKind::Unconnected;
            out[ue] = a;
            continue;
        }

        NodeId best_cell = 0;
        const RtEntry* best_entry = nullptr;
        double best_score = -std::numeric_limits<double>::infinity();
        for (const auto& [scell, entry] : row) {
            double score;
            if (policy == AttachPolicy::MaxSinr) {
                score = entry.sinr_db;
            } else {
                const int load = loads.count(scell) ? loads.at(scell) : 0;
                score = cfg.w_mmw_hz / (load + 1) *
                        std::log2(1.0 + db_to_linear(entry.sinr_db));
            }
            // Strict comparison and ascending map order break ties toward
            // the lowest cell id.
            if (score > best_score) {
                best_score = score;
                best_cell = scell;
                best_entry = &entry;
            }
        }

        // Sticky-cell margin: stay with the previous cell unless the
        // challenger clears it by hysteresis_db. Only meaningful for the
        // SINR rule; the rate rule's metric already moves with loads.
        if (policy == AttachPolicy::MaxSinr && cfg.hysteresis_db > 0.0 && previous) {
            const auto prev_it = previous->find(ue);
            if (prev_it != previous->end() &&
                prev_it->second.kind == ServingKind::SCell) {
                const auto held = row.find(prev_it->second.scell);
                if (held != row.end() && best_cell != prev_it->second.scell &&
                    best_entry->sinr_db < held->second.sinr_db + cfg.hysteresis_db) {
                    best_cell = held->first;
                    best_entry = &held->second;
                }
            }
        }

        a.kind = ServingKind::SCell;
        a.scell = best_cell;
        a.d_ue = best_entry->d_ue;
        a.d_scell = best_entry->d_scell;
        a.sinr_db = best_entry->sinr_db;
        out[ue] = a;
        if (policy == AttachPolicy::MaxRate) ++loads[best_cell];
    }
    return out;
}

ActionKind decide_action(const Association& prev, const Association& next) {
    const bool prev_cell = prev.kind == ServingKind::SCell;
    const bool next_cell = next.kind == ServingKind::SCell;
    if (prev_cell && next_cell) {
        if (prev.scell != next.scell) return ActionKind::Handover;
        if (prev.d_ue != next.d_ue || prev.d_scell != next.d_scell)
            return ActionKind::BeamSwitch;
        return ActionKind::NoOp;
    }
    if (prev_cell && !next_cell) return ActionKind::FallbackLte;
    if (!prev_cell && next_cell) return ActionKind::Reconnect;
    return ActionKind::NoOp;
}

const char* to_string(ActionKind a) {
    switch (a) {
        case ActionKind::NoOp: return "noop";
        case ActionKind::BeamSwitch: return "beam_switch";
        case ActionKind::Handover: return "handover";
        case ActionKind::FallbackLte: return "fallback_lte";
        case ActionKind::Reconnect: return "reconnect";
    }
    return "?";
}

const char* to_string(ServingKind k) {
    switch (k) {
        case ServingKind::SCell: return "scell";
        case ServingKind::LteFallback: return "lte";
        case ServingKind::Unconnected: return "none";
    }
    return "?";
}

bool ia_step(IaSession& session, IaEvent event, const Association* assignment) {
    IaState next = session.state;
    bool ok = false;
    switch (session.state) {
        case IaState::Idle:
            ok = event == IaEvent::LteSyncDone;
            next = IaState::LteSynced;
            break;
        case IaState::LteSynced:
            ok = event == IaEvent::RapBroadcast;
            next = IaState::RapSweeping;
            break;
        case IaState::RapSweeping:
            ok = event == IaEvent::RtForward;
            next = IaState::RtForwarded;
            break;
        case IaState::RtForwarded:
            ok = event == IaEvent::AssignDirections && assignment &&
                 assignment->kind == ServingKind::SCell;
            next = IaState::DirectionsAssigned;
            break;
        case IaState::DirectionsAssigned:
            ok = event == IaEvent::Rar;
            next = IaState::RarReceived;
            break;
        case IaState::RarReceived:
            ok = event == IaEvent::Crm;
            next = IaState::Connected;
            break;
        case IaState::Connected:
            ok = false;
            break;
    }
    if (!ok) {
        ++session.protocol_errors;
        return false;
    }
    if (event == IaEvent::AssignDirections) {
        session.scell = assignment->scell;
        session.d_ue = assignment->d_ue;
        session.d_scell = assignment->d_scell;
    }
    session.transcript.emplace_back(session.state, event);
    session.state = next;
    return true;
}

const char* to_string(IaState s) {
    switch (s) {
        case IaState::Idle: return "idle";
        case IaState::LteSynced: return "lte_synced";
        case IaState::RapSweeping: return "rap_sweeping";
        case IaState::RtForwarded: return "rt_forwarded";
        case IaState::DirectionsAssigned: return "directions_assigned";
        case IaState::RarReceived: return "rar_received";
        case IaState::Connected: return "connected";
    }
    return "?";
}

const char* to_string(IaEvent e) {
    switch (e) {
        case IaEvent::LteSyncDone: return "lte_sync_done";
        case IaEvent::RapBroadcast: return "rap_broadcast";
        case IaEvent::RtForward: return "rt_forward";
        case IaEvent::AssignDirections: return "assign_directions";
        case IaEvent::Rar: return "rar";
        case IaEvent::Crm: return "crm";
    }
    return "?";
}

bool detect_rlf(double serving_sinr_db, const ScenarioConfig& cfg) {
    return serving_sinr_db < cfg.gamma_out_db;
}

void RtHistory::push(DirectionRow row) {
    if (capacity < 1) capacity = 1;
    rows.push_back(std::move(row));
    while (static_cast<int>(rows.size()) > capacity) rows.pop_front();
}

std::optional<Association> backup_beam(const RtHistory& history,
                                       const BeamPair& blocked,
                                       const ScenarioConfig& cfg) {
    if (history.rows.empty()) return std::nullopt;
    const DirectionRow& row = history.rows.back();

    auto best_on_cell = [&](NodeId scell) -> std::optional<Association> {
        const auto it = row.per_scell.find(scell);
        if (it == row.per_scell.end()) return std::nullopt;
        Association best;
        bool found = false;
        for (int d_ue = 0; d_ue < static_cast<int>(it->second.size()); ++d_ue) {
            const DirectionEntry& e = it->second[d_ue];
            // On the failed cell the obstructed user-side direction is off
            // the table; toward other cells the same index is a different
            // physical path and stays eligible.
            if (scell == blocked.scell && d_ue == blocked.d_ue) continue;
            if (e.d_scell < 0 || e.sinr_db < cfg.gamma_out_db) continue;
            if (!found || e.sinr_db > best.sinr_db) {
                found = true;
                best.kind = ServingKind::SCell;
                best.scell = scell;
                best.d_ue = d_ue;
                best.d_scell = e.d_scell;
                best.sinr_db = e.sinr_db;
                best.since_s = row.timestamp_s;
            }
        }
        if (!found) return std::nullopt;
        return best;
    };

    if (auto same_cell = best_on_cell(blocked.scell)) return same_cell;
    if (!cfg.rlf_backup_cross_cell) return std::nullopt;

    std::optional<Association> best;
    for (const auto& [scell, entries] : row.per_scell) {
        (void)entries;
        if (scell == blocked.scell) continue;
        const auto candidate = best_on_cell(scell);
        if (candidate && (!best || candidate->sinr_db > best->sinr_db))
            best = candidate;
    }
    return best;
}

}  // namespace ulmc
