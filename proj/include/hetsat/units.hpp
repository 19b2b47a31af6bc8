#pragma once

#include <cmath>
#include <numbers>

namespace hetsat {

/// Mean Earth radius (m).
inline constexpr double kEarthRadius = 6'371'000.0;
/// Speed of light in vacuum (m/s).
inline constexpr double kSpeedOfLight = 299'792'458.0;
/// Standard gravitational parameter of the Earth (m^3/s^2).
inline constexpr double kEarthMu = 3.986004418e14;

inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline constexpr double km(double v) { return v * 1000.0; }

}  // namespace hetsat
