#pragma once

// Physical constants in the working unit system used throughout the
// library: energies in eV, lengths in nm, times in ns, temperatures in K.
// Everything is derived once from the exact / CODATA 2018 SI values.

#include <numbers>

namespace qdpc {

namespace si {
inline constexpr double kPlanck = 6.62607015e-34;             // J s (exact)
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C (exact)
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K (exact)
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kElectronMass = 9.1093837015e-31;     // kg
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s (exact)
}  // namespace si

struct PhysicalConstants {
  double hbar;                  // eV ns
  double k_B;                   // eV / K
  double coulomb_factor;        // e^2 / (4 pi eps0), eV nm
  double electron_rest_energy;  // m_e c^2, eV
  double c;                     // nm / ns
};

inline constexpr PhysicalConstants kConstants{
    .hbar = si::kPlanck / (2.0 * std::numbers::pi) / si::kElementaryCharge * 1e9,
    .k_B = si::kBoltzmann / si::kElementaryCharge,
    .coulomb_factor =
        si::kElementaryCharge / (4.0 * std::numbers::pi * si::kVacuumPermittivity) * 1e9,
    .electron_rest_energy =
        si::kElectronMass * si::kSpeedOfLight * si::kSpeedOfLight / si::kElementaryCharge,
    // m/s -> nm/ns is a factor 1e9 / 1e9
    .c = si::kSpeedOfLight,
};

/// Mass in eV ns^2 / nm^2 for a mass given in units of the free electron mass.
constexpr double mass_from_relative(double relative_mass) {
  return relative_mass * kConstants.electron_rest_energy / (kConstants.c * kConstants.c);
}

}  // namespace qdpc
