#include "ulmc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ulmc/units.hpp"

namespace ulmc {

StateProbabilities state_probabilities(double distance_m, const ChannelConstants& c) {
    if (distance_m < 0.0)
        throw std::invalid_argument("state_probabilities: distance must be >= 0");
    StateProbabilities p;
    p.p_out = std::max(0.0, 1.0 - std::exp(-c.a_out_per_m * distance_m + c.b_out));
    p.p_los = (1.0 - p.p_out) * std::exp(-c.a_los_per_m * distance_m);
    p.p_nlos = 1.0 - p.p_out - p.p_los;
    if (p.p_nlos < 0.0) p.p_nlos = 0.0;  // guards tiny negative rounding
    return p;
}

PathlossState sample_pathloss_state(double distance_m, const ChannelConstants& c,
                                    RngStream& rng) {
    const StateProbabilities p = state_probabilities(distance_m, c);
    const double u = rng.u01();
    if (u < p.p_los) return PathlossState::Los;
    if (u < p.p_los + p.p_nlos) return PathlossState::Nlos;
    return PathlossState::Outage;
}

double mmwave_pathloss_db(PathlossState state, double distance_m,
                          const ChannelConstants& c) {
    if (state == PathlossState::Outage)
        return std::numeric_limits<double>::infinity();
    if (!(distance_m > 0.0))
        throw std::invalid_argument("mmwave_pathloss_db: distance must be > 0");
    const double alpha = state == PathlossState::Los ? c.alpha_los_db : c.alpha_nlos_db;
    const double beta = state == PathlossState::Los ? c.beta_los : c.beta_nlos;
    return alpha + 10.0 * beta * std::log10(distance_m);
}

Eigen::VectorXcd array_response(int rows, int cols, double azimuth_rad) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("array_response: dimensions must be >= 1");
    const double cr = M_PI * std::cos(azimuth_rad);
    const double cs = M_PI * std::sin(azimuth_rad);
    Eigen::VectorXcd a(rows * cols);
    for (int p = 0; p < rows; ++p)
        for (int q = 0; q < cols; ++q)
            a[p * cols + q] = std::polar(1.0, p * cr + q * cs);
    return a;
}

Eigen::VectorXcd steering_vector(int rows, int cols, double azimuth_rad) {
    Eigen::VectorXcd a = array_response(rows, cols, azimuth_rad);
    return a / std::sqrt(static_cast<double>(rows * cols));
}

Codebook make_codebook(int rows, int cols, int n_dirs) {
    if (n_dirs < 1) throw std::invalid_argument("make_codebook: n_dirs must be >= 1");
    if (n_dirs > rows * cols)
        throw std::invalid_argument("make_codebook: more directions than elements");
    Codebook cb;
    cb.rows = rows;
    cb.cols = cols;
    for (int i = 0; i < n_dirs; ++i) {
        const double az = 2.0 * M_PI * i / n_dirs;
        cb.azimuths.push_back(az);
        cb.weights.push_back(steering_vector(rows, cols, az));
    }
    return cb;
}

double bf_gain(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& w_tx,
               const Eigen::VectorXcd& w_rx) {
    if (w_tx.size() != h.cols() || w_rx.size() != h.rows())
        throw std::invalid_argument("bf_gain: weight dimensions do not match H");
    const cxd amp = (w_rx.adjoint() * h * w_tx)(0, 0);
    return std::norm(amp);
}

namespace {

// a(az)^H w for the planar response, using the separable phase structure:
// column partial sums first, then the row phase ramp. O(rows*cols)
// multiplies and two trig evaluations total.
cxd response_dot(int rows, int cols, double az, const Eigen::VectorXcd& w) {
    const cxd step_r = std::polar(1.0, -M_PI * std::cos(az));
    const cxd step_c = std::polar(1.0, -M_PI * std::sin(az));
    cxd sum = 0.0;
    cxd row_phase = 1.0;
    for (int p = 0; p < rows; ++p) {
        cxd row_sum = 0.0;
        cxd col_phase = 1.0;
        const int base = p * cols;
        for (int q = 0; q < cols; ++q) {
            row_sum += col_phase * w[base + q];
            col_phase *= step_c;
        }
        sum += row_phase * row_sum;
        row_phase *= step_r;
    }
    return sum;
}

void update_geometry(LinkChannel& link, const Node& scell, const Node& ue) {
    link.distance_m = distance(scell.position, ue.position);
    link.direct_aod = azimuth(scell.position, ue.position);
    link.direct_aoa = azimuth(ue.position, scell.position);
}

std::vector<double> draw_power_fractions(int n, PowerFractionLaw law, RngStream& rng) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
        x = law == PowerFractionLaw::Exponential ? rng.exponential(1.0)
                                                 : rng.u01() + 1e-12;
        total += x;
    }
    for (double& x : w) x /= total;
    std::sort(w.begin(), w.end(), std::greater<double>());
    return w;
}

}  // namespace

LinkChannel make_link(const Node& scell, const Node& ue, const ScenarioConfig& cfg,
                      RngStream& rng) {
    if (scell.kind != NodeKind::SCell || ue.kind != NodeKind::Ue)
        throw std::invalid_argument("make_link: expects one SCell and one UE");
    LinkChannel link;
    link.scell_id = scell.id;
    link.ue_id = ue.id;
    link.scell_rows = scell.array_rows;
    link.scell_cols = scell.array_cols;
    link.ue_rows = ue.array_rows;
    link.ue_cols = ue.array_cols;
    link.lambda_m = kSpeedOfLight / cfg.fc_mmw_hz;
    large_scale_resample(link, scell, ue, cfg.channel, rng);
    return link;
}

void large_scale_resample(LinkChannel& link, const Node& scell, const Node& ue,
                          const ChannelConstants& c, RngStream& rng) {
    update_geometry(link, scell, ue);
    link.h.resize(0, 0);
    link.state = sample_pathloss_state(link.distance_m, c, rng);
    link.clusters.clear();
    if (link.state == PathlossState::Outage) return;

    const int n_clusters = std::max(1, rng.poisson(c.cluster_mean));
    const std::vector<double> fractions =
        draw_power_fractions(n_clusters, c.power_fraction_law, rng);
    const double spread = c.angular_spread_deg * M_PI / 180.0;

    link.clusters.resize(n_clusters);
    for (int k = 0; k < n_clusters; ++k) {
        Cluster& cl = link.clusters[k];
        cl.power_fraction = fractions[k];
        if (k == 0 && link.state == PathlossState::Los) {
            // The dominant cluster rides the direct path.
            cl.aod_offset = 0.0;
            cl.aoa_offset = 0.0;
        } else {
            cl.aod_offset = rng.uniform(-M_PI, M_PI);
            cl.aoa_offset = rng.uniform(-M_PI, M_PI);
        }
        cl.subpaths.resize(c.subpaths_per_cluster);
        const double amp = std::sqrt(cl.power_fraction / c.subpaths_per_cluster);
        for (Subpath& sp : cl.subpaths) {
            sp.aod_offset = rng.normal(0.0, spread);
            sp.aoa_offset = rng.normal(0.0, spread);
            sp.phase = rng.uniform(0.0, 2.0 * M_PI);
            sp.amp = amp;
        }
    }
}

void advance_small_scale(LinkChannel& link, const Node& scell, const Node& ue,
                         double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("advance_small_scale: dt must be > 0");
    update_geometry(link, scell, ue);
    link.h.resize(0, 0);  // stale; rebuilt on demand
    const double speed = norm(ue.velocity);
    if (speed == 0.0 || link.clusters.empty()) return;
    const double heading = std::atan2(ue.velocity.y, ue.velocity.x);
    const double doppler_scale = 2.0 * M_PI * speed / link.lambda_m;
    for (Cluster& cl : link.clusters) {
        const double cluster_aoa = link.direct_aoa + cl.aoa_offset;
        for (Subpath& sp : cl.subpaths) {
            sp.omega = doppler_scale * std::cos(cluster_aoa + sp.aoa_offset - heading);
            sp.phase = wrap_angle(sp.phase + sp.omega * dt);
        }
    }
}

void build_h(LinkChannel& link) {
    const int n_rx = link.ue_rows * link.ue_cols;
    const int n_tx = link.scell_rows * link.scell_cols;
    link.h = Eigen::MatrixXcd::Zero(n_rx, n_tx);
    for (const Cluster& cl : link.clusters) {
        for (const Subpath& sp : cl.subpaths) {
            const Eigen::VectorXcd a_rx = array_response(
                link.ue_rows, link.ue_cols,
                link.direct_aoa + cl.aoa_offset + sp.aoa_offset);
            const Eigen::VectorXcd a_tx = array_response(
                link.scell_rows, link.scell_cols,
                link.direct_aod + cl.aod_offset + sp.aod_offset);
            const cxd g = std::polar(sp.amp, sp.phase);
            link.h.noalias() += g * a_rx * a_tx.adjoint();
        }
    }
}

void small_scale_update(LinkChannel& link, const Node& scell, const Node& ue,
                        double dt) {
    advance_small_scale(link, scell, ue, dt);
    build_h(link);
}

double pair_gain(const LinkChannel& link, const Eigen::VectorXcd& w_tx,
                 const Eigen::VectorXcd& w_rx) {
    if (w_tx.size() != link.scell_rows * link.scell_cols ||
        w_rx.size() != link.ue_rows * link.ue_cols)
        throw std::invalid_argument("pair_gain: weight dimensions do not match arrays");
    cxd sum = 0.0;
    for (const Cluster& cl : link.clusters) {
        for (const Subpath& sp : cl.subpaths) {
            const double aoa = link.direct_aoa + cl.aoa_offset + sp.aoa_offset;
            const double aod = link.direct_aod + cl.aod_offset + sp.aod_offset;
            const cxd g = std::polar(sp.amp, sp.phase);
            sum += g *
                   std::conj(response_dot(link.ue_rows, link.ue_cols, aoa, w_rx)) *
                   response_dot(link.scell_rows, link.scell_cols, aod, w_tx);
        }
    }
    return std::norm(sum);
}

Eigen::MatrixXd beamspace_gains(const LinkChannel& link, const Codebook& scell_cb,
                                const Codebook& ue_cb) {
    const int n_ue = static_cast<int>(ue_cb.weights.size());
    const int n_scell = static_cast<int>(scell_cb.weights.size());
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n_ue, n_scell);
    Eigen::VectorXcd u(n_ue), v(n_scell);
    for (const Cluster& cl : link.clusters) {
        for (const Subpath& sp : cl.subpaths) {
            const double aoa = link.direct_aoa + cl.aoa_offset + sp.aoa_offset;
            const double aod = link.direct_aod + cl.aod_offset + sp.aod_offset;
            for (int i = 0; i < n_ue; ++i)
                u[i] = std::conj(
                    response_dot(link.ue_rows, link.ue_cols, aoa, ue_cb.weights[i]));
            for (int j = 0; j < n_scell; ++j)
                v[j] = response_dot(link.scell_rows, link.scell_cols, aod,
                                    scell_cb.weights[j]);
            const cxd g = std::polar(sp.amp, sp.phase);
            b.noalias() += g * u * v.transpose();
        }
    }
    return b.cwiseAbs2();
}

double noise_power_w(const ScenarioConfig& cfg, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power_w: bandwidth must be > 0");
    return dbm_to_watt(cfg.noise_psd_dbm_hz + cfg.noise_figure_db +
                       10.0 * std::log10(bandwidth_hz));
}

double rx_power_w(double ptx_dbm, double pathloss_db, double gain_linear) {
    if (std::isinf(pathloss_db) || gain_linear <= 0.0) return 0.0;
    return dbm_to_watt(ptx_dbm) * gain_linear / db_to_linear(pathloss_db);
}

double sinr_db_from_powers(double signal_w, double interference_w, double noise_w) {
    if (signal_w < 0.0 || interference_w < 0.0 || noise_w < 0.0)
        throw std::invalid_argument("sinr: powers must be >= 0");
    if (signal_w == 0.0) return -std::numeric_limits<double>::infinity();
    const double denom = interference_w + noise_w;
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return linear_to_db(signal_w / denom);
}

double shannon_rate_bps(double sinr_db, int n_sharing, double bandwidth_hz) {
    if (n_sharing < 1)
        throw std::invalid_argument("shannon_rate: n_sharing must be >= 1");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("shannon_rate: bandwidth must be > 0");
    const double sinr = db_to_linear(sinr_db);
    return bandwidth_hz / n_sharing * std::log2(1.0 + sinr);
}

double lte_plos(double distance_km) {
    if (!(distance_km > 0.0))
        throw std::invalid_argument("lte_plos: distance must be > 0");
    if (distance_km <= 0.018) return 1.0;
    const double e = std::exp(-distance_km / 0.063);
    return (0.018 / distance_km) * (1.0 - e) + e;
}

bool sample_lte_los(double distance_km, RngStream& rng) {
    return rng.u01() < lte_plos(distance_km);
}

double lte_pathloss_db(double distance_km, bool los) {
    if (!(distance_km > 0.0))
        throw std::invalid_argument("lte_pathloss_db: distance must be > 0");
    return los ? 103.4 + 24.2 * std::log10(distance_km)
               : 131.1 + 42.8 * std::log10(distance_km);
}

double lte_snr_db(double distance_km, bool los, const ScenarioConfig& cfg) {
    const double noise_dbm = cfg.noise_psd_dbm_hz + cfg.noise_figure_db +
                             10.0 * std::log10(cfg.w_lte_hz);
    return cfg.ptx_lte_dbm - lte_pathloss_db(distance_km, los) - noise_dbm;
}

}  // namespace ulmc
