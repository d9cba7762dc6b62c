#pragma once

#include <numbers>

namespace cavity_eit {

inline constexpr double kHbar = 1.054571817e-34;       // J·s
inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Boundary conversions. Everything internal is SI with angular rates in rad/s.
namespace units {

constexpr double hz_to_rad_s(double hz) { return kTwoPi * hz; }
constexpr double rad_s_to_hz(double w) { return w / kTwoPi; }
constexpr double nm_to_m(double nm) { return nm / 1e9; }
constexpr double ng_to_kg(double ng) { return ng / 1e12; }
constexpr double uw_to_w(double uw) { return uw / 1e6; }
constexpr double w_to_uw(double w) { return w * 1e6; }

}  // namespace units
}  // namespace cavity_eit
