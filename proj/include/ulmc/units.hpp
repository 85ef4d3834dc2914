#ifndef ULMC_UNITS_HPP
#define ULMC_UNITS_HPP

#include <cmath>
#include <limits>

namespace ulmc {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double db_to_linear(double db) {
    if (std::isinf(db) && db < 0.0) return 0.0;
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double linear) {
    if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double watt) {
    if (watt <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(watt) + 30.0;
}

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

}  // namespace ulmc

#endif
