// units.hpp — unit conventions for the simulator.
//
// Internal units: hbar = 1, k_B = 1. Energies in meV, times in hbar/meV.
// Laboratory times in picoseconds convert through hbar = 0.6582119569 meV*ps.

#pragma once

namespace holosim {

inline constexpr double hbar_meV_ps = 0.6582119569;

// picoseconds -> internal time (hbar/meV)
inline constexpr double time_from_ps(double ps) { return ps / hbar_meV_ps; }

// internal time -> picoseconds
inline constexpr double time_to_ps(double t) { return t * hbar_meV_ps; }

} // namespace holosim
