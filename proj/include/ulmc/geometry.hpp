#ifndef ULMC_GEOMETRY_HPP
#define ULMC_GEOMETRY_HPP

#include <cmath>

namespace ulmc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

// Azimuth of b as seen from a, in (-pi, pi].
inline double azimuth(Vec2 a, Vec2 b) { return std::atan2(b.y - a.y, b.x - a.x); }

}  // namespace ulmc

#endif
