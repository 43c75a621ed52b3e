#pragma once

// Physical constants (CODATA 2018 exact values where defined).
// All SI. Kept in one place so dimensional output is reproducible.

namespace ccpb::constants {

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann         = 1.380649e-23;     // J/K
inline constexpr double avogadro          = 6.02214076e23;    // 1/mol
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

}  // namespace ccpb::constants
