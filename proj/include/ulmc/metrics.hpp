#ifndef ULMC_METRICS_HPP
#define ULMC_METRICS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ulmc/config.hpp"

namespace ulmc {

// (sum x)^2 / (n * sum x^2). 1 for equal shares, 1/n for one-user-takes-all.
// Empty or negative input is a caller error; an all-zero vector has no
// defined fairness and is rejected too.
double jain_index(const std::vector<double>& values);

// Population standard deviation over mean. Throws when the mean is not
// strictly positive, since the ratio is meaningless there.
double stability(const std::vector<double>& samples);

/// Closed-form per-window throughput under periodic blocking: full rate for
// t_rt - t_b seconds, then either the fallback rate r (with a backup beam)
// or nothing (without one).
struct RateGain {
    double r_wb = 0.0;  // throughput with a backup beam
    double r_ob = 0.0;  // throughput without one
    double gain = 1.0;  // r_wb / r_ob
};
RateGain theoretical_rate_gain(double full_rate, double backup_rate,
                               double t_b_s, double t_rt_s);

// Paired two-arm comparison keyed by seed. Both vectors must list the same
// seeds in the same order; the two configurations must agree on everything
// except the connectivity mode.
struct PairedComparison {
    int n = 0;
    std::vector<double> deltas;  // first arm minus second, per seed
    double mean_delta = 0.0;
    double stderr_delta = 0.0;
    double min_delta = 0.0;
};
PairedComparison compare_mc_sa(
    const ScenarioConfig& cfg_mc, const ScenarioConfig& cfg_sa,
    const std::vector<std::pair<std::uint64_t, double>>& mc_values,
    const std::vector<std::pair<std::uint64_t, double>>& sa_values);

// Mean and standard error of the mean for a batch of per-run statistics.
struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};
MeanStderr mean_stderr(const std::vector<double>& values);

}  // namespace ulmc

#endif
