#ifndef ULMC_CHANNEL_HPP
#define ULMC_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ulmc/config.hpp"
#include "ulmc/geometry.hpp"
#include "ulmc/rng.hpp"
#include "ulmc/scenario.hpp"

namespace ulmc {

using cxd = std::complex<double>;

enum class PathlossState { Los, Nlos, Outage };

struct StateProbabilities {
    double p_los = 0.0;
    double p_nlos = 0.0;
    double p_out = 0.0;
};

// Distance-dependent link state law. p_out ramps up once the exponential
// term decays past the b_out offset; LoS decays from 1 at short range.
StateProbabilities state_probabilities(double distance_m, const ChannelConstants& c);
PathlossState sample_pathloss_state(double distance_m, const ChannelConstants& c,
                                    RngStream& rng);

// alpha + 10 * beta * log10(d) for the drawn state; +inf when in outage.
double mmwave_pathloss_db(PathlossState state, double distance_m,
                          const ChannelConstants& c);

// Planar array laid out in the horizontal plane with half-wavelength
// spacing; element (p, q) responds with phase pi*(p cos az + q sin az).
// Raw response has unit-modulus elements; the steering vector is the same
// response scaled to unit Euclidean norm.
Eigen::VectorXcd array_response(int rows, int cols, double azimuth_rad);
Eigen::VectorXcd steering_vector(int rows, int cols, double azimuth_rad);

// Phase-only receive/transmit weights pointing at n_dirs uniformly spaced
// azimuths over [0, 2pi).
struct Codebook {
    int rows = 0, cols = 0;
    std::vector<double> azimuths;
    std::vector<Eigen::VectorXcd> weights;  // each unit-norm
};
Codebook make_codebook(int rows, int cols, int n_dirs);

// |w_rx^H H w_tx|^2. H has one row per receive element and one column per
// transmit element.
double bf_gain(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& w_tx,
               const Eigen::VectorXcd& w_rx);

struct Subpath {
    double aod_offset = 0.0;  // around the cluster's departure azimuth
    double aoa_offset = 0.0;
    double phase = 0.0;       // evolves with Doppler
    double amp = 0.0;         // sqrt(cluster fraction / subpath count)
    double omega = 0.0;       // current Doppler shift, rad/s
};

struct Cluster {
    double power_fraction = 0.0;
    double aod_offset = 0.0;  // relative to the geometric direct azimuth
    double aoa_offset = 0.0;
    std::vector<Subpath> subpaths;
};

// One SCell-UE radio link. Cluster geometry is stored relative to the
// direct path so spatial signatures follow the user: every slot the current
// positions fix the direct azimuths and the stored offsets ride on top.
// The matrix itself (rows: UE elements, cols: SCell elements) is rebuilt on
// demand; per-slot evaluation goes through path-domain projections instead,
// which compute the same sums without materializing H.
struct LinkChannel {
    NodeId scell_id = 0;
    NodeId ue_id = 0;
    int scell_rows = 0, scell_cols = 0;
    int ue_rows = 0, ue_cols = 0;
    double lambda_m = 0.0;

    PathlossState state = PathlossState::Outage;
    double distance_m = 0.0;
    double direct_aod = 0.0;  // azimuth SCell -> UE
    double direct_aoa = 0.0;  // azimuth UE -> SCell
    std::vector<Cluster> clusters;
    Eigen::MatrixXcd h;  // empty until built

    double pathloss_db(const ChannelConstants& c) const {
        return mmwave_pathloss_db(state, distance_m, c);
    }
};

LinkChannel make_link(const Node& scell, const Node& ue, const ScenarioConfig& cfg,
                      RngStream& rng);

// Redraw state, clusters, fractions and subpath geometry from the current
// node positions. In LoS the strongest cluster sits on the direct path.
void large_scale_resample(LinkChannel& link, const Node& scell, const Node& ue,
                          const ChannelConstants& c, RngStream& rng);

// Per-slot evolution: distance and azimuths from current geometry, subpath
// phases advanced by their Doppler shift (2pi v/lambda cos of the angle
// between the arrival direction and the velocity).
void advance_small_scale(LinkChannel& link, const Node& scell, const Node& ue,
                         double dt);

// Materialize H as the sum of subpath rank-1 terms.
void build_h(LinkChannel& link);

// advance_small_scale followed by build_h.
void small_scale_update(LinkChannel& link, const Node& scell, const Node& ue,
                        double dt);

// |w_rx^H H w_tx|^2 evaluated path by path without forming H. Agrees with
// bf_gain(build_h(...)) to floating-point reassociation error.
double pair_gain(const LinkChannel& link, const Eigen::VectorXcd& w_tx,
                 const Eigen::VectorXcd& w_rx);

// All codebook-pair gains at once: entry (i, j) is the linear gain for UE
// direction i and SCell direction j.
Eigen::MatrixXd beamspace_gains(const LinkChannel& link, const Codebook& scell_cb,
                                const Codebook& ue_cb);

// Link-budget pieces.
double noise_power_w(const ScenarioConfig& cfg, double bandwidth_hz);
double rx_power_w(double ptx_dbm, double pathloss_db, double gain_linear);
double sinr_db_from_powers(double signal_w, double interference_w, double noise_w);

// (W / n_sharing) * log2(1 + sinr). -inf dB maps to exactly zero.
double shannon_rate_bps(double sinr_db, int n_sharing, double bandwidth_hz);

// Macro-cell model, distances in km.
double lte_plos(double distance_km);
bool sample_lte_los(double distance_km, RngStream& rng);
double lte_pathloss_db(double distance_km, bool los);
double lte_snr_db(double distance_km, bool los, const ScenarioConfig& cfg);

}  // namespace ulmc

#endif
