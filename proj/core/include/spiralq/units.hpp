#pragma once

#include <numbers>

// Everything past the configuration boundary is SI. These helpers exist for the
// boundary itself (spec files are written in um, frequencies in GHz).
namespace spiralq::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kMu0 = 4.0e-7 * kPi;             // H/m
inline constexpr double kEps0 = 8.8541878128e-12;        // F/m
inline constexpr double kStandardGravity = 9.8;          // m/s^2, value used for the 20 g shock

inline constexpr double um(double v) { return v * 1e-6; }
inline constexpr double to_um(double metres) { return metres * 1e6; }
inline constexpr double ghz(double v) { return v * 1e9; }

}  // namespace spiralq::units
