#include "ulmc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ulmc/metrics.hpp"
#include "ulmc/units.hpp"

namespace ulmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* state_name(PathlossState s) {
    switch (s) {
        case PathlossState::Los: return "los";
        case PathlossState::Nlos: return "nlos";
        case PathlossState::Outage: return "out";
    }
    return "?";
}

}  // namespace

void EventSchedule::add(const BlockageEvent& ev) {
    if (ev.t_arr_s < 0.0 || ev.t_b_s < 0.0)
        throw std::invalid_argument("EventSchedule: negative time");
    if (ev.t_b_s == 0.0) return;  // empty interval, nothing to block
    auto& list = by_ue_[ev.ue];
    for (const BlockageEvent& e : list) {
        const bool disjoint = ev.t_arr_s + ev.t_b_s <= e.t_arr_s ||
                              e.t_arr_s + e.t_b_s <= ev.t_arr_s;
        if (!disjoint)
            throw std::invalid_argument("EventSchedule: overlapping windows for ue " +
                                        std::to_string(ev.ue));
    }
    list.push_back(ev);
    std::sort(list.begin(), list.end(),
              [](const BlockageEvent& a, const BlockageEvent& b) {
                  return a.t_arr_s < b.t_arr_s;
              });
}

const std::vector<BlockageEvent>& EventSchedule::for_ue(NodeId ue) const {
    static const std::vector<BlockageEvent> none;
    const auto it = by_ue_.find(ue);
    return it == by_ue_.end() ? none : it->second;
}

std::size_t EventSchedule::total() const {
    std::size_t n = 0;
    for (const auto& [ue, list] : by_ue_) n += list.size();
    return n;
}

Simulation::Simulation(const ScenarioConfig& cfg) : cfg_(cfg) {
    RngStream rng(cfg_.seed, StreamTag::Deployment);
    dep_ = deploy(cfg_, rng);
}

Simulation::Simulation(const ScenarioConfig& cfg, Deployment dep)
    : cfg_(cfg), dep_(std::move(dep)) {}

namespace {

// Everything the slot loop tracks about one user beyond its node.
struct UeRun {
    NodeId id = 0;
    std::size_t index = 0;

    Association assoc;
    Association pre_block;       // serving before the obstruction moved it
    BeamPair blocked_pair;
    bool in_blockage = false;
    bool hit_serving = false;    // the window landed on a live serving link
    bool revert_at_end = false;
    double block_end_s = kInf;
    std::optional<Association> pending;  // applied at the next slot boundary

    RtHistory history;
    std::size_t next_event = 0;
    std::deque<BlockageEvent> auto_q;
    double auto_blocked_until = -kInf;

    bool lte_los = false;
    bool was_usable = false;
    IaSession ia;

    // per-slot scratch
    double control_sinr_db = -kInf;
    double signal_w = 0.0;
    bool usable = false;

    double rate_sum = 0.0;
    long n_slots = 0;
};

}  // namespace

RunSummary Simulation::run(MetricsTrace* trace) {
    {
        const auto problems = cfg_.validate();
        if (!problems.empty())
            throw std::invalid_argument("run: invalid config: " + problems.front());
    }

    Deployment world = dep_;  // runs must not disturb the stored drop
    std::vector<Node*> scells, ues;
    for (Node& n : world.nodes) {
        if (n.kind == NodeKind::SCell) scells.push_back(&n);
        if (n.kind == NodeKind::Ue) ues.push_back(&n);
    }
    const std::size_t n_scell = scells.size();
    const std::size_t n_ue = ues.size();

    const double slot_s = cfg_.slot_s;
    const long n_slots = static_cast<long>(std::floor(cfg_.t_sim_s / slot_s + 1e-9));
    const long per_th = std::lround(cfg_.t_h_s / slot_s);
    const long per_trt = std::lround(cfg_.t_rt_s / slot_s);

    const Codebook scell_cb =
        make_codebook(cfg_.scell_rows, cfg_.scell_cols, cfg_.n_scell_dirs);
    const Codebook ue_cb = make_codebook(cfg_.ue_rows, cfg_.ue_cols, cfg_.n_ue_dirs);

    // Dense link grid, one channel per (cell, user) with its own stream so
    // draws never depend on iteration order elsewhere.
    std::vector<LinkChannel> links;
    std::vector<RngStream> link_rngs;
    links.reserve(n_scell * n_ue);
    link_rngs.reserve(n_scell * n_ue);
    for (std::size_t is = 0; is < n_scell; ++is)
        for (std::size_t iu = 0; iu < n_ue; ++iu) {
            link_rngs.emplace_back(cfg_.seed, StreamTag::LinkLargeScale,
                                   scells[is]->id, ues[iu]->id);
            links.push_back(
                make_link(*scells[is], *ues[iu], cfg_, link_rngs.back()));
        }
    const auto link_at = [&](std::size_t is, std::size_t iu) -> LinkChannel& {
        return links[is * n_ue + iu];
    };

    std::vector<UeRun> urs(n_ue);
    std::vector<RngStream> lte_rngs, blockage_rngs;
    std::vector<bool> in_focus(n_ue, false);
    for (std::size_t iu = 0; iu < n_ue; ++iu) {
        urs[iu].id = ues[iu]->id;
        urs[iu].index = iu;
        urs[iu].history.capacity = cfg_.rt_history_k;
        urs[iu].ia.ue = ues[iu]->id;
        urs[iu].ia.policy = cfg_.policy;
        lte_rngs.emplace_back(cfg_.seed, StreamTag::LinkLargeScale, 0, ues[iu]->id);
        blockage_rngs.emplace_back(cfg_.seed, StreamTag::Blockage, ues[iu]->id);
        urs[iu].lte_los =
            sample_lte_los(norm(ues[iu]->position) / 1000.0, lte_rngs[iu]);
        in_focus[iu] = norm(ues[iu]->position) <= cfg_.rc_radius_m;
    }

    std::vector<NodeId> ue_ids;
    for (const Node* u : ues) ue_ids.push_back(u->id);
    std::map<NodeId, std::size_t> scell_pos;
    for (std::size_t is = 0; is < n_scell; ++is) scell_pos[scells[is]->id] = is;

    const double noise_sig_w = noise_power_w(cfg_, cfg_.w_sig_hz);
    const double noise_mmw_w = noise_power_w(cfg_, cfg_.w_mmw_hz);
    const double penalty_lin = db_to_linear(-cfg_.subopt_penalty_db);
    const bool mc = cfg_.mode == ConnectivityMode::Mc;

    RunSummary sum;
    sum.seed = cfg_.seed;
    sum.n_scells = static_cast<int>(n_scell);
    sum.n_ues = static_cast<int>(n_ue);

    double rate_total = 0.0, rate_sq_total = 0.0;

    // Obstruction effect on one user's serving link: nothing gets through
    // on the blocked pair, everything else on that link pays the penalty.
    const auto blocked_gain = [&](const UeRun& owner, const LinkChannel& link,
                                  int tx_d_ue, int rx_d_scell, double g) {
        if (!owner.in_blockage || !owner.hit_serving) return g;
        if (owner.blocked_pair.scell != link.scell_id || owner.id != link.ue_id)
            return g;
        if (tx_d_ue == owner.blocked_pair.d_ue &&
            rx_d_scell == owner.blocked_pair.d_scell)
            return 0.0;
        return g * penalty_lin;
    };

    const auto record_decision = [&](double t, const UeRun& u, ActionKind a,
                                     const Association& from,
                                     const Association& to) {
        switch (a) {
            case ActionKind::NoOp: ++sum.n_noop; break;
            case ActionKind::BeamSwitch: ++sum.n_beam_switch; break;
            case ActionKind::Handover: ++sum.n_handover; break;
            case ActionKind::FallbackLte: ++sum.n_fallback; break;
            case ActionKind::Reconnect: ++sum.n_reconnect; break;
        }
        if (trace && a != ActionKind::NoOp) {
            DecisionRecord r;
            r.t_s = t;
            r.ue = u.id;
            r.action = a;
            r.from_cell = from.kind == ServingKind::SCell
                              ? static_cast<long>(from.scell) : -1;
            r.to_cell = to.kind == ServingKind::SCell
                            ? static_cast<long>(to.scell) : -1;
            r.d_ue = to.d_ue;
            r.d_scell = to.d_scell;
            r.policy = cfg_.policy;
            trace->decisions.push_back(r);
        }
    };

    for (long slot = 0; slot < n_slots; ++slot) {
        const double t = slot * slot_s;

        // Motion, then channel evolution. Large-scale instants redraw the
        // whole link (the first draw happened at construction); other slots
        // only rotate subpath phases, and dead links have nothing to rotate.
        if (slot > 0) {
            for (Node* u : ues) advance_ue_bounded(*u, slot_s, world.area_radius_m);
            if (slot % per_th == 0) {
                for (std::size_t is = 0; is < n_scell; ++is)
                    for (std::size_t iu = 0; iu < n_ue; ++iu)
                        large_scale_resample(link_at(is, iu), *scells[is],
                                             *ues[iu], cfg_.channel,
                                             link_rngs[is * n_ue + iu]);
                for (std::size_t iu = 0; iu < n_ue; ++iu)
                    urs[iu].lte_los = sample_lte_los(
                        norm(ues[iu]->position) / 1000.0, lte_rngs[iu]);
            } else {
                for (std::size_t is = 0; is < n_scell; ++is)
                    for (std::size_t iu = 0; iu < n_ue; ++iu) {
                        LinkChannel& l = link_at(is, iu);
                        if (l.state != PathlossState::Outage)
                            advance_small_scale(l, *scells[is], *ues[iu], slot_s);
                    }
            }
        }

        // Obstruction windows that just ended: back to the beam used before,
        // unless a fresh table decision took over in the meantime.
        for (UeRun& u : urs) {
            if (!u.in_blockage || t < u.block_end_s) continue;
            u.in_blockage = false;
            u.block_end_s = kInf;
            u.hit_serving = false;
            u.pending.reset();
            if (u.revert_at_end) {
                const ActionKind a = decide_action(u.assoc, u.pre_block);
                if (a != ActionKind::NoOp)
                    record_decision(t, u, a, u.assoc, u.pre_block);
                u.assoc = u.pre_block;
            }
            u.revert_at_end = false;
        }

        // Backup switches decided during the previous slot take effect now.
        for (UeRun& u : urs) {
            if (!u.pending) continue;
            const ActionKind a = decide_action(u.assoc, *u.pending);
            if (a != ActionKind::NoOp) record_decision(t, u, a, u.assoc, *u.pending);
            u.assoc = *u.pending;
            u.pending.reset();
        }

        if (slot % per_trt == 0) {
            // Sweep epoch: every cell measures, the coordinator decides.
            std::vector<SweepResult> sweeps;
            std::vector<ReportTable> rts;
            sweeps.reserve(n_scell);
            for (std::size_t is = 0; is < n_scell; ++is) {
                std::vector<const LinkChannel*> cell_links;
                cell_links.reserve(n_ue);
                for (std::size_t iu = 0; iu < n_ue; ++iu)
                    cell_links.push_back(&link_at(is, iu));
                sweeps.push_back(run_sweep(scells[is]->id, cell_links, scell_cb,
                                           ue_cb, cfg_, t));
                rts.push_back(sweeps.back().rt);
            }
            const CompleteReportTable crt = assemble_crt(rts, ue_ids, t);
            std::map<NodeId, int> zero_loads;
            for (const Node* s : scells) zero_loads[s->id] = 0;
            std::map<NodeId, Association> prev;
            for (const UeRun& u : urs) prev[u.id] = u.assoc;
            const auto next =
                decide_attachment(crt, cfg_.policy, zero_loads, cfg_, &prev);

            sum.load_by_scell.clear();
            for (const Node* s : scells) sum.load_by_scell[s->id] = 0;
            for (UeRun& u : urs) {
                const Association& na = next.at(u.id);
                record_decision(t, u, decide_action(u.assoc, na), u.assoc, na);
                u.assoc = na;
                u.pending.reset();
                if (u.in_blockage) u.revert_at_end = false;
                if (na.kind == ServingKind::SCell) ++sum.load_by_scell[na.scell];

                DirectionRow row;
                row.timestamp_s = t;
                for (const SweepResult& sr : sweeps)
                    row.per_scell[sr.rt.scell_id] = sr.detail.at(u.id);
                u.history.push(std::move(row));

                if (u.ia.state == IaState::Idle) {
                    ia_step(u.ia, IaEvent::LteSyncDone);
                    ia_step(u.ia, IaEvent::RapBroadcast);
                    ia_step(u.ia, IaEvent::RtForward);
                }
                if (u.ia.state == IaState::RtForwarded &&
                    na.kind == ServingKind::SCell) {
                    ia_step(u.ia, IaEvent::AssignDirections, &na);
                    ia_step(u.ia, IaEvent::Rar);
                    ia_step(u.ia, IaEvent::Crm);
                }
            }

            if (trace && trace->keep_rt)
                for (const ReportTable& rt : rts)
                    for (const auto& [ue, e] : rt.entries)
                        trace->rt_rows.push_back(
                            {t, rt.scell_id, ue, e.sinr_db, e.d_ue, e.d_scell});

            // Self-generated obstruction arrivals, one draw per user per
            // window; draws landing inside a still-active window are skipped
            // but the stream position never depends on that.
            if (cfg_.auto_blockage) {
                for (std::size_t iu = 0; iu < n_ue; ++iu) {
                    const double off = blockage_rngs[iu].uniform(0.0, cfg_.t_rt_s);
                    const double arr = t + off;
                    if (arr >= urs[iu].auto_blocked_until) {
                        urs[iu].auto_q.push_back(
                            {urs[iu].id, arr, cfg_.blockage_t_b_s});
                        urs[iu].auto_blocked_until = arr + cfg_.blockage_t_b_s;
                        sum.sum_t_arr_offset_s += off;
                        ++sum.n_auto_blockage;
                    }
                }
            }
        }

        // Obstruction onsets at this sampling instant.
        for (UeRun& u : urs) {
            const auto activate = [&](const BlockageEvent& ev) {
                u.in_blockage = true;
                u.block_end_s = ev.t_arr_s + ev.t_b_s;
                u.hit_serving = u.assoc.kind == ServingKind::SCell;
                u.revert_at_end = false;
                if (!u.hit_serving) return;
                ++sum.n_blockage;
                u.blocked_pair = {u.assoc.scell, u.assoc.d_ue, u.assoc.d_scell};
                u.pre_block = u.assoc;
                u.revert_at_end = true;
                if (cfg_.rlf_backup) {
                    auto bb = backup_beam(u.history, u.blocked_pair, cfg_);
                    if (bb) {
                        bb->since_s = t;
                        u.pending = *bb;
                    }
                }
            };
            const auto& evs = schedule_.for_ue(u.id);
            while (u.next_event < evs.size() &&
                   evs[u.next_event].t_arr_s + evs[u.next_event].t_b_s <= t)
                ++u.next_event;  // never covered a sampling instant
            if (!u.in_blockage && u.next_event < evs.size() &&
                evs[u.next_event].t_arr_s <= t) {
                activate(evs[u.next_event]);
                ++u.next_event;
            }
            while (!u.auto_q.empty() &&
                   u.auto_q.front().t_arr_s + u.auto_q.front().t_b_s <= t)
                u.auto_q.pop_front();
            if (!u.in_blockage && !u.auto_q.empty() &&
                u.auto_q.front().t_arr_s <= t) {
                activate(u.auto_q.front());
                u.auto_q.pop_front();
            }
        }

        // Who sits on which cell this slot, in user-id order.
        std::map<NodeId, std::vector<std::size_t>> members;
        for (const UeRun& u : urs)
            if (u.assoc.kind == ServingKind::SCell)
                members[u.assoc.scell].push_back(u.index);

        // Control-plane health of every serving link.
        for (UeRun& u : urs) {
            u.control_sinr_db = -kInf;
            u.signal_w = 0.0;
            u.usable = false;
            if (u.assoc.kind == ServingKind::SCell) {
                const LinkChannel& l =
                    link_at(scell_pos.at(u.assoc.scell), u.index);
                double g = pair_gain(l, scell_cb.weights[u.assoc.d_scell],
                                     ue_cb.weights[u.assoc.d_ue]);
                g = blocked_gain(u, l, u.assoc.d_ue, u.assoc.d_scell, g);
                u.signal_w =
                    rx_power_w(cfg_.ptx_mmw_dbm, l.pathloss_db(cfg_.channel), g);
                u.control_sinr_db =
                    sinr_db_from_powers(u.signal_w, 0.0, noise_sig_w);
                u.usable = u.control_sinr_db >= cfg_.gamma_out_db;
                if (u.was_usable && !u.usable) ++sum.n_rlf;
                u.was_usable = u.usable;
            } else {
                u.was_usable = false;
            }
        }

        // LTE roster: users with nothing on mmWave share the macro carrier.
        // A blocked-and-unrecovered user stays off it; that gap is the whole
        // point of the backup-beam comparison.
        int n_lte = 0;
        std::vector<bool> on_lte(n_ue, false);
        if (mc) {
            for (const UeRun& u : urs) {
                const bool blocked_dead =
                    u.in_blockage && u.hit_serving && !u.usable;
                if (u.assoc.kind == ServingKind::LteFallback ||
                    (u.assoc.kind == ServingKind::SCell && !u.usable &&
                     !blocked_dead && cfg_.rlf_lte_fallback)) {
                    on_lte[u.index] = true;
                    ++n_lte;
                }
            }
        }

        for (UeRun& u : urs) {
            double rate = 0.0;
            ServingKind serving = u.assoc.kind;
            double sinr_out = u.control_sinr_db;

            if (u.assoc.kind == ServingKind::SCell && u.usable) {
                const auto& cellmates = members.at(u.assoc.scell);
                const int n_share = cfg_.rate_share == RateShareMode::ActualLoad
                                        ? static_cast<int>(cellmates.size())
                                        : 1;
                double interference_w = 0.0;
                if (cfg_.data_interference) {
                    for (const auto& [cell, lst] : members) {
                        if (cell == u.assoc.scell) continue;
                        const UeRun& rival = urs[lst[slot % lst.size()]];
                        if (!rival.usable) continue;  // silent turn
                        const LinkChannel& il =
                            link_at(scell_pos.at(u.assoc.scell), rival.index);
                        double ig =
                            pair_gain(il, scell_cb.weights[u.assoc.d_scell],
                                      ue_cb.weights[rival.assoc.d_ue]);
                        ig = blocked_gain(rival, il, rival.assoc.d_ue,
                                          u.assoc.d_scell, ig);
                        interference_w += rx_power_w(
                            cfg_.ptx_mmw_dbm, il.pathloss_db(cfg_.channel), ig);
                    }
                }
                const double dsinr =
                    sinr_db_from_powers(u.signal_w, interference_w, noise_mmw_w);
                rate = shannon_rate_bps(dsinr, n_share, cfg_.w_mmw_hz);
            } else if (on_lte[u.index]) {
                const double d_km = norm(ues[u.index]->position) / 1000.0;
                rate = shannon_rate_bps(lte_snr_db(d_km, u.lte_los, cfg_), n_lte,
                                        cfg_.w_lte_hz);
                serving = ServingKind::LteFallback;
                sinr_out = lte_snr_db(d_km, u.lte_los, cfg_);
            }

            const bool blocked_now = u.in_blockage && u.hit_serving;
            rate_total += rate;
            rate_sq_total += rate * rate;
            u.rate_sum += rate;
            ++u.n_slots;
            ++sum.n_samples;
            if (u.assoc.kind == ServingKind::SCell) {
                if (blocked_now) {
                    sum.sum_rate_blocked_bps += rate;
                    ++sum.n_slot_blocked;
                } else {
                    sum.sum_rate_clear_bps += rate;
                    ++sum.n_slot_clear;
                }
            }
            if (trace && trace->keep_samples)
                trace->samples.push_back(
                    {t, u.id, serving, u.assoc.scell, sinr_out, rate, blocked_now});
        }

        if (trace && trace->keep_channel) {
            for (std::size_t is = 0; is < n_scell; ++is)
                for (std::size_t iu = 0; iu < n_ue; ++iu) {
                    LinkChannel& l = link_at(is, iu);
                    double fro = 0.0;
                    if (l.state != PathlossState::Outage) {
                        build_h(l);
                        fro = l.h.norm();
                    }
                    trace->channel_rows.push_back({t, l.scell_id, l.ue_id,
                                                   l.state,
                                                   l.pathloss_db(cfg_.channel),
                                                   fro});
                }
        }
    }

    // Aggregates. Means are undefined (not zero) when nothing was sampled,
    // and the focus-area fairness index is undefined when every rate in the
    // area is zero.
    if (sum.n_samples > 0) {
        sum.mean_rate_bps = rate_total / sum.n_samples;
        if (sum.mean_rate_bps > 0.0) {
            const double var = std::max(
                0.0, rate_sq_total / sum.n_samples -
                         sum.mean_rate_bps * sum.mean_rate_bps);
            sum.rvar = std::sqrt(var) / sum.mean_rate_bps;
        } else {
            sum.rvar = kNaN;
        }
    } else {
        sum.mean_rate_bps = kNaN;
        sum.rvar = kNaN;
    }

    std::vector<double> focus_rates;
    for (const UeRun& u : urs) {
        const double mean = u.n_slots > 0 ? u.rate_sum / u.n_slots : 0.0;
        sum.per_ue_mean_rate_bps[u.id] = mean;
        if (in_focus[u.index]) focus_rates.push_back(mean);
    }
    sum.n_ue_rc = static_cast<int>(focus_rates.size());
    sum.focus_rates = focus_rates;
    bool any_focus = false;
    for (double r : focus_rates) any_focus = any_focus || r > 0.0;
    sum.jain_rc = any_focus ? jain_index(focus_rates) : kNaN;

    for (const UeRun& u : urs) sum.ia.push_back(u.ia);
    return sum;
}

std::vector<std::uint64_t> derive_run_seeds(std::uint64_t master_seed, int n_seeds) {
    if (n_seeds < 1)
        throw std::invalid_argument("derive_run_seeds: need at least one seed");
    std::vector<std::uint64_t> seeds;
    seeds.reserve(n_seeds);
    for (int i = 0; i < n_seeds; ++i) {
        RngStream s(master_seed, StreamTag::Runs, static_cast<std::uint64_t>(i));
        seeds.push_back(s.next_u64());
    }
    return seeds;
}

std::vector<RunSummary> run_montecarlo(const ScenarioConfig& cfg, int n_seeds,
                                       const ScheduleFactory& make_schedule) {
    const auto seeds = derive_run_seeds(cfg.seed, n_seeds);
    std::vector<RunSummary> out;
    out.reserve(n_seeds);
    for (int i = 0; i < n_seeds; ++i) {
        ScenarioConfig run_cfg = cfg;
        run_cfg.seed = seeds[i];
        Simulation sim(run_cfg);
        if (make_schedule)
            sim.set_schedule(make_schedule(run_cfg, sim.deployment(), seeds[i]));
        out.push_back(sim.run());
    }
    return out;
}

std::string samples_csv(const std::vector<SlotSample>& samples) {
    std::string out = "t,ue,serving,scell,sinr_db,rate_bps,blocked\n";
    for (const SlotSample& s : samples) {
        out += format_double(s.t_s);
        out += ',';
        out += std::to_string(s.ue);
        out += ',';
        out += to_string(s.serving);
        out += ',';
        out += std::to_string(s.serving == ServingKind::SCell ? s.scell : 0);
        out += ',';
        out += format_double(s.sinr_db);
        out += ',';
        out += format_double(s.rate_bps);
        out += ',';
        out += s.blocked ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string decisions_csv(const std::vector<DecisionRecord>& decisions) {
    std::string out = "t,ue,action,from_cell,to_cell,d_ue,d_scell,policy\n";
    for (const DecisionRecord& d : decisions) {
        out += format_double(d.t_s);
        out += ',';
        out += std::to_string(d.ue);
        out += ',';
        out += to_string(d.action);
        out += ',';
        out += std::to_string(d.from_cell);
        out += ',';
        out += std::to_string(d.to_cell);
        out += ',';
        out += std::to_string(d.d_ue);
        out += ',';
        out += std::to_string(d.d_scell);
        out += ',';
        out += to_string(d.policy);
        out += '\n';
    }
    return out;
}

std::string rt_csv(const std::vector<RtDumpRow>& rows) {
    std::string out = "t,scell,ue,sinr_db,d_ue,d_scell\n";
    for (const RtDumpRow& r : rows) {
        out += format_double(r.t_s);
        out += ',';
        out += std::to_string(r.scell);
        out += ',';
        out += std::to_string(r.ue);
        out += ',';
        out += format_double(r.sinr_db);
        out += ',';
        out += std::to_string(r.d_ue);
        out += ',';
        out += std::to_string(r.d_scell);
        out += '\n';
    }
    return out;
}

std::string channel_csv(const std::vector<ChannelTraceRow>& rows) {
    std::string out = "t,scell,ue,state,pathloss_db,h_fro\n";
    for (const ChannelTraceRow& r : rows) {
        out += format_double(r.t_s);
        out += ',';
        out += std::to_string(r.scell);
        out += ',';
        out += std::to_string(r.ue);
        out += ',';
        out += state_name(r.state);
        out += ',';
        out += format_double(r.pathloss_db);
        out += ',';
        out += format_double(r.h_frobenius);
        out += '\n';
    }
    return out;
}

}  // namespace ulmc
