#include "ulmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ulmc {

double jain_index(const std::vector<double>& values) {
    if (values.empty())
        throw std::invalid_argument("jain_index: empty input");
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("jain_index: negative share");
        sum += v;
        sum_sq += v * v;
    }
    if (sum_sq == 0.0)
        throw std::domain_error("jain_index: all shares zero");
    return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

double stability(const std::vector<double>& samples) {
    if (samples.empty())
        throw std::invalid_argument("stability: empty input");
    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / static_cast<double>(samples.size());
    if (!(mean > 0.0))
        throw std::domain_error("stability: mean must be positive");
    double acc = 0.0;
    for (double v : samples) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(samples.size())) / mean;
}

RateGain theoretical_rate_gain(double full_rate, double backup_rate,
                               double t_b_s, double t_rt_s) {
    if (!(full_rate > 0.0))
        throw std::invalid_argument("rate_gain: full rate must be positive");
    if (backup_rate < 0.0 || backup_rate > full_rate)
        throw std::invalid_argument("rate_gain: backup rate outside [0, full]");
    if (t_b_s < 0.0 || !(t_b_s < t_rt_s))
        throw std::invalid_argument("rate_gain: need 0 <= t_b < t_rt");
    RateGain g;
    g.r_wb = (full_rate * (t_rt_s - t_b_s) + backup_rate * t_b_s) / t_rt_s;
    g.r_ob = full_rate * (t_rt_s - t_b_s) / t_rt_s;
    g.gain = 1.0 + (backup_rate / full_rate) * t_b_s / (t_rt_s - t_b_s);
    return g;
}

PairedComparison compare_mc_sa(
    const ScenarioConfig& cfg_mc, const ScenarioConfig& cfg_sa,
    const std::vector<std::pair<std::uint64_t, double>>& mc_values,
    const std::vector<std::pair<std::uint64_t, double>>& sa_values) {
    if (cfg_mc.mode != ConnectivityMode::Mc || cfg_sa.mode != ConnectivityMode::Sa)
        throw std::invalid_argument("compare_mc_sa: wrong connectivity modes");
    ScenarioConfig a = cfg_mc, b = cfg_sa;
    a.mode = b.mode = ConnectivityMode::Mc;
    if (a.to_kv_text() != b.to_kv_text())
        throw std::invalid_argument(
            "compare_mc_sa: configurations differ beyond the mode");
    if (mc_values.size() != sa_values.size())
        throw std::invalid_argument("compare_mc_sa: arm sizes differ");
    PairedComparison out;
    out.n = static_cast<int>(mc_values.size());
    if (out.n == 0) return out;
    out.min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mc_values.size(); ++i) {
        if (mc_values[i].first != sa_values[i].first)
            throw std::invalid_argument("compare_mc_sa: seed mismatch at index " +
                                        std::to_string(i));
        const double d = mc_values[i].second - sa_values[i].second;
        out.deltas.push_back(d);
        out.mean_delta += d;
        out.min_delta = std::min(out.min_delta, d);
    }
    out.mean_delta /= out.n;
    if (out.n >= 2) {
        double acc = 0.0;
        for (double d : out.deltas)
            acc += (d - out.mean_delta) * (d - out.mean_delta);
        out.stderr_delta = std::sqrt(acc / (out.n - 1)) / std::sqrt(out.n);
    }
    return out;
}

MeanStderr mean_stderr(const std::vector<double>& values) {
    MeanStderr m;
    if (values.empty()) return m;
    for (double v : values) m.mean += v;
    m.mean /= static_cast<double>(values.size());
    if (values.size() >= 2) {
        double acc = 0.0;
        for (double v : values) acc += (v - m.mean) * (v - m.mean);
        m.stderr_ = std::sqrt(acc / (values.size() - 1)) /
                    std::sqrt(static_cast<double>(values.size()));
    }
    return m;
}

}  // namespace ulmc
