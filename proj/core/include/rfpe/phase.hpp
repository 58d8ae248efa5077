#pragma once

#include <cmath>
#include <numbers>

namespace rfpe {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any finite angle into [0, 2π).
inline double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2π.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Shortest arc between two angles, in [0, π].
inline double circular_distance(double a, double b) {
    double d = std::fabs(std::remainder(a - b, kTwoPi));
    return d > std::numbers::pi ? kTwoPi - d : d;
}

/// Signed shortest arc from `from` to `to`, in [-π, π].
inline double circular_difference(double to, double from) {
    return std::remainder(to - from, kTwoPi);
}

}  // namespace rfpe
