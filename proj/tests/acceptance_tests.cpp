#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ulmc/experiment.hpp"
#include "ulmc/metrics.hpp"
#include "ulmc/sweep.hpp"
#include "ulmc/units.hpp"

// End-to-end gate for the simulator: eight criteria, one verdict line each.
// Every tolerance and wall-clock budget sits right here in the code; the
// statistical studies run at their full pinned seed counts, so the whole
// binary takes several minutes on one core.

namespace {

using namespace ulmc;
using Clock = std::chrono::steady_clock;

// Wall-clock budgets, seconds, single core.
constexpr double kTableWallS = 1.0;
constexpr double kRecoveryWallS = 120.0;
constexpr double kDensityStudyWallS = 300.0;

// Unified slack for the closed-form suite; most checks are simply exact.
constexpr double kFormulaRelTol = 1e-9;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool ok = true;
    std::vector<std::string> notes;
};

void require(Verdict& v, bool cond, const std::string& what) {
    if (!cond) {
        v.ok = false;
        v.notes.push_back(what);
    }
}

void absorb(Verdict& v, const PresetResult& r) {
    for (const auto& [name, passed] : r.checks)
        if (!passed) {
            v.ok = false;
            v.notes.push_back(r.name + ":" + name);
        }
}

void enforce_wall(Verdict& v, double elapsed_s, double budget_s) {
    if (elapsed_s > budget_s) {
        v.ok = false;
        char buf[96];
        std::snprintf(buf, sizeof buf, "wall %.1f s exceeds budget %.0f s",
                      elapsed_s, budget_s);
        v.notes.push_back(buf);
    }
}

bool rel_close(double a, double b, double tol = kFormulaRelTol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(a - b) <= tol * scale;
}

Node make_node(NodeId id, NodeKind kind, double x, double y, int rows, int cols) {
    Node n;
    n.id = id;
    n.kind = kind;
    n.position = {x, y};
    n.array_rows = rows;
    n.array_cols = cols;
    return n;
}

// Brute-force argmax over every codebook pair, same tie rule as the sweep.
struct OracleBest {
    double sinr_db = -std::numeric_limits<double>::infinity();
    int d_ue = -1;
    int d_scell = -1;
};

OracleBest oracle_best(const LinkChannel& link, const Codebook& scb,
                       const Codebook& ucb, const ScenarioConfig& cfg) {
    OracleBest best;
    if (link.state == PathlossState::Outage) return best;
    const double noise_w = noise_power_w(cfg, cfg.w_sig_hz);
    const double factor =
        rx_power_w(cfg.ptx_mmw_dbm, link.pathloss_db(cfg.channel), 1.0);
    for (std::size_t i = 0; i < ucb.weights.size(); ++i)
        for (std::size_t j = 0; j < scb.weights.size(); ++j) {
            const double g = pair_gain(link, scb.weights[j], ucb.weights[i]);
            const double sinr = sinr_db_from_powers(factor * g, 0.0, noise_w);
            if (sinr > best.sinr_db) {
                best.sinr_db = sinr;
                best.d_ue = static_cast<int>(i);
                best.d_scell = static_cast<int>(j);
            }
        }
    return best;
}

// The measured sweep must reproduce the exhaustive search on a batch of
// random links: same winning pair, same SINR, and silence for anything
// below the detection floor or in outage.
void check_sweep_against_oracle(Verdict& v) {
    ScenarioConfig cfg;
    cfg.control_interference = false;
    cfg.sweep_smear = false;
    const Codebook scb =
        make_codebook(cfg.scell_rows, cfg.scell_cols, cfg.n_scell_dirs);
    const Codebook ucb = make_codebook(cfg.ue_rows, cfg.ue_cols, cfg.n_ue_dirs);
    const Node cell =
        make_node(1, NodeKind::SCell, 0.0, 0.0, cfg.scell_rows, cfg.scell_cols);

    RngStream rng(91, StreamTag::LinkLargeScale);
    int tested = 0, agreed = 0, outage_ok = 0, outages = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const double ang = 0.13 * trial;
        const double r = 12.0 + 6.0 * (trial % 40);
        Node ue = make_node(2, NodeKind::Ue, r * std::cos(ang), r * std::sin(ang),
                            cfg.ue_rows, cfg.ue_cols);
        const LinkChannel link = make_link(cell, ue, cfg, rng);
        const SweepResult sr = run_sweep(1, {&link}, scb, ucb, cfg, 0.0);
        if (link.state == PathlossState::Outage) {
            ++outages;
            if (sr.rt.entries.find(2) == sr.rt.entries.end()) ++outage_ok;
            continue;
        }
        ++tested;
        const OracleBest ob = oracle_best(link, scb, ucb, cfg);
        const auto it = sr.rt.entries.find(2);
        if (ob.sinr_db >= cfg.gamma_out_db) {
            if (it != sr.rt.entries.end() && it->second.d_ue == ob.d_ue &&
                it->second.d_scell == ob.d_scell &&
                rel_close(it->second.sinr_db, ob.sinr_db))
                ++agreed;
        } else if (it == sr.rt.entries.end()) {
            ++agreed;
        }
    }
    require(v, tested >= 120, "too few non-outage search instances");
    require(v, agreed == tested, "beam search disagrees with exhaustive argmax");
    require(v, outage_ok == outages, "outage links leaked into the report");
}

// A single unit-amplitude path with matched steering on both ends must
// deliver the full array product, 64 x 16.
void check_matched_array_gain(Verdict& v) {
    LinkChannel link;
    link.scell_rows = 8;
    link.scell_cols = 8;
    link.ue_rows = 4;
    link.ue_cols = 4;
    link.direct_aod = 0.7;
    link.direct_aoa = 0.7 - M_PI;
    Cluster cl;
    cl.power_fraction = 1.0;
    Subpath sp;
    sp.amp = 1.0;
    cl.subpaths.push_back(sp);
    link.clusters.push_back(cl);
    const Eigen::VectorXcd w_tx = steering_vector(8, 8, link.direct_aod);
    const Eigen::VectorXcd w_rx = steering_vector(4, 4, link.direct_aoa);
    require(v, rel_close(pair_gain(link, w_tx, w_rx), 1024.0),
            "matched path-domain gain is not 1024");
    build_h(link);
    require(v, rel_close(bf_gain(link.h, w_tx, w_rx), 1024.0),
            "matched matrix gain is not 1024");
}

void check_fairness_pins(Verdict& v) {
    require(v, jain_index({1.0, 1.0, 1.0}) == 1.0, "equal shares must score 1");
    require(v, jain_index({5.0, 0.0, 0.0, 0.0}) == 0.25,
            "one-user-takes-all must score 1/n");
    require(v, rel_close(jain_index({1, 1, 1, 1, 1, 1, 0}), 0.8571428571428571),
            "six equals and one starved must score 6/7");
}

void check_macro_pins(Verdict& v) {
    require(v, lte_plos(0.018) == 1.0 && lte_plos(0.005) == 1.0,
            "macro LoS probability must saturate at short range");
    require(v, std::abs(lte_plos(0.1) - 0.34767083684423117) < 1e-12,
            "macro LoS probability off at 100 m");
    require(v, lte_pathloss_db(1.0, true) == 103.4,
            "macro LoS pathloss anchor at 1 km");
    require(v, lte_pathloss_db(1.0, false) == 131.1,
            "macro NLoS pathloss anchor at 1 km");
}

void check_recovery_gain_pins(Verdict& v) {
    const RateGain g = theoretical_rate_gain(1.0, 0.5, 0.1, 1.0);
    require(v, rel_close(g.gain, 1.0555555555555556),
            "window-model gain off at the pinned point");
    require(v, rel_close(g.r_wb / g.r_ob, g.gain),
            "window-model gain is not the throughput ratio");
    require(v, theoretical_rate_gain(1.0, 0.0, 0.2, 1.0).gain == 1.0,
            "no backup rate must mean no gain");
    require(v, rel_close(theoretical_rate_gain(2.0, 2.0, 0.25, 1.0).r_wb, 2.0),
            "a full-rate backup must erase the hole");
}

bool same_files(const PresetResult& a, const PresetResult& b) {
    return a.files == b.files;
}

void print_verdict(int index, const char* title, const Verdict& v,
                   double elapsed_s) {
    std::printf("[%s] %d %s (%.1f s)\n", v.ok ? "PASS" : "FAIL", index, title,
                elapsed_s);
    for (const std::string& n : v.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
}

Verdict guarded(const std::function<void(Verdict&)>& body) {
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.ok = false;
        v.notes.push_back(std::string("exception: ") + e.what());
    }
    return v;
}

}  // namespace

int main() {
    int failures = 0;
    std::optional<PresetResult> table_first, cadence_density_first;

    // 1. The three scan-delay figures and the four scan-energy figures come
    // out of the closed forms exactly, and instantly.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            const PresetResult d = run_preset("delay_table", {});
            const PresetResult e = run_preset("energy_table", {});
            absorb(v, d);
            absorb(v, e);
            table_first = d;
        });
        enforce_wall(v, since(t0), kTableWallS);
        print_verdict(1, "scan delay and energy tables equal the closed forms",
                      v, since(t0));
        failures += !v.ok;
    }

    // 2. Measured blockage-recovery gain tracks the window model within 5%
    // at every grid point, with enough events to trust the estimate, and
    // moves the right way along both grid axes.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            absorb(v, run_preset("rlf_gain", {}));
        });
        enforce_wall(v, since(t0), kRecoveryWallS);
        print_verdict(2, "backup-beam recovery gain matches the window model",
                      v, since(t0));
        failures += !v.ok;
    }

    // 3. Paired by seed, the multi-connectivity arm never loses throughput
    // to standalone, wins outright in sparse deployments, and the relative
    // gap closes as cells densify.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            absorb(v, run_preset("rate_table", {}));
        });
        enforce_wall(v, since(t0), kDensityStudyWallS);
        print_verdict(3, "multi-connectivity throughput dominates standalone",
                      v, since(t0));
        failures += !v.ok;
    }

    // 4. The same pairing for rate stability: the macro net trims the rate
    // spread at every density and matters less as density grows.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            absorb(v, run_preset("stability_vs_density", {}));
        });
        enforce_wall(v, since(t0), kDensityStudyWallS);
        print_verdict(4, "multi-connectivity narrows the rate spread", v,
                      since(t0));
        failures += !v.ok;
    }

    // 5. Mean rate drifts the expected way along each cadence axis: down
    // when reports thin out, up with channel coherence, up with density.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            absorb(v, run_preset("handover_rate_vs_trt", {}));
            const PresetResult d = run_preset("handover_rate_vs_density", {});
            absorb(v, d);
            cadence_density_first = d;
        });
        print_verdict(5, "rate trends follow reporting cadence and density", v,
                      since(t0));
        failures += !v.ok;
    }

    // 6. Load-aware admission is at least as fair as greedy SINR chasing in
    // the focus area at every density, and both curves rise with density.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            absorb(v, run_preset("ia_fairness", {}));
        });
        print_verdict(6, "load-aware admission fairness dominates and grows", v,
                      since(t0));
        failures += !v.ok;
    }

    // 7. Closed-form spot checks, all exact or within one part in 1e9.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            check_sweep_against_oracle(v);
            check_matched_array_gain(v);
            check_fairness_pins(v);
            check_macro_pins(v);
            check_recovery_gain_pins(v);
        });
        print_verdict(7, "formula suite: beam search, gains, fairness, macro laws",
                      v, since(t0));
        failures += !v.ok;
    }

    // 8. Same seed, fresh process state: every emitted byte identical, for
    // a closed-form preset and a fully stochastic one.
    {
        const auto t0 = Clock::now();
        Verdict v = guarded([&](Verdict& v) {
            if (!table_first) table_first = run_preset("delay_table", {});
            require(v, same_files(*table_first, run_preset("delay_table", {})),
                    "closed-form table output changed between runs");
            if (!cadence_density_first)
                cadence_density_first = run_preset("handover_rate_vs_density", {});
            require(v,
                    same_files(*cadence_density_first,
                               run_preset("handover_rate_vs_density", {})),
                    "stochastic study output changed between runs");
        });
        print_verdict(8, "fixed seeds reproduce byte-identical outputs", v,
                      since(t0));
        failures += !v.ok;
    }

    if (failures > 0) {
        std::printf("acceptance: %d of 8 criteria failed\n", failures);
        return 1;
    }
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
}
