#pragma once

#include <numbers>

namespace casimir::constants {

// CODATA 2018 values, SI.
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kSpeedOfLight = 299792458.0;      // m/s
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kElectronMass = 9.1093837015e-31;  // kg

// One electronvolt expressed as an angular frequency, e/hbar.
inline constexpr double kEvToRadPerSecond = 1.51926744788e15;

inline constexpr double kPi = std::numbers::pi;

// Apery's constant; numerics::zeta3() computes it from a series and the
// test suite pins the two against each other.
inline constexpr double kZeta3 = 1.2020569031595942;

}  // namespace casimir::constants
