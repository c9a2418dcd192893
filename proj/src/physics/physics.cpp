#include "qdpc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdpc/constants.hpp"
#include "qdpc/errors.hpp"

namespace qdpc {

namespace {

double pow_three_halves(double x) { return x * std::sqrt(x); }

double norm(const Dipole& d) { return std::hypot(d[0], d[1], d[2]); }

// 4 sqrt(2m) / (3 hbar F), in eV^{-3/2}.
double gamow_prefactor(double relative_mass, double field) {
  return 4.0 * std::sqrt(2.0 * mass_from_relative(relative_mass)) / (3.0 * kConstants.hbar * field);
}

}  // namespace

double coupling_strength(double dipole_length_nm, double permittivity, double spacing_nm) {
  if (!(spacing_nm > 0.0)) throw InvalidGeometry("dot spacing must be positive");
  const double d3 = spacing_nm * spacing_nm * spacing_nm;
  return kConstants.coulomb_factor * dipole_length_nm * dipole_length_nm / (permittivity * d3);
}

LevelPair eigenstate_energies(double uncoupled_eV, double coupling_eV) {
  return {uncoupled_eV + coupling_eV, uncoupled_eV - coupling_eV};
}

DipolePair eigenstate_dipoles(const Dipole& mu1, const Dipole& mu2) {
  Dipole sum{}, diff{};
  for (int i = 0; i < 3; ++i) {
    sum[i] = mu1[i] + mu2[i];
    diff[i] = mu1[i] - mu2[i];
  }
  return {norm(sum) / std::numbers::sqrt2, norm(diff) / std::numbers::sqrt2};
}

double pumping_rate(double transition_eV, double dipole_length_nm) {
  if (!(transition_eV > 0.0)) throw DomainError("pumping transition energy must be positive");
  // 2 w^3 |mu|^2 / (hbar pi eps0 c^3) with |mu|^2 / eps0 = 4 pi (e^2 / 4 pi eps0) L^2
  // and w = E / hbar.
  const double hbar = kConstants.hbar;
  const double c = kConstants.c;
  return 8.0 * transition_eV * transition_eV * transition_eV * kConstants.coulomb_factor *
         dipole_length_nm * dipole_length_nm / (hbar * hbar * hbar * hbar * c * c * c);
}

double planck_occupation(double gap_eV, double temperature_K) {
  if (!(gap_eV > 0.0)) throw DomainError("Planck occupation needs a positive energy gap");
  if (!(temperature_K > 0.0)) throw DomainError("Planck occupation needs a positive temperature");
  return 1.0 / std::expm1(gap_eV / (kConstants.k_B * temperature_K));
}

double assault_frequency(double energy_eV, double field_V_per_nm, double dot_width_nm,
                         double relative_mass, AssaultRadius radius) {
  if (!(energy_eV >= 0.0)) throw DomainError("assault frequency needs E* >= 0");
  if (!(field_V_per_nm > 0.0)) throw DomainError("assault frequency needs a positive dot field");
  double allowed = energy_eV / field_V_per_nm + dot_width_nm / 2.0;
  if (radius == AssaultRadius::kClampedToDot) allowed = std::min(allowed, dot_width_nm);
  const double kinetic = energy_eV + field_V_per_nm * dot_width_nm / 2.0;
  const double speed = std::sqrt(2.0 * kinetic / mass_from_relative(relative_mass));
  return speed / (2.0 * allowed);
}

double tunneling_rate_closed_form(double energy_eV, const DeviceParams& p) {
  const double edge = p.conduction_offset_eV - p.dot_field_V_per_nm * p.dot_width_nm / 2.0;
  const double lower = edge - energy_eV;
  const double upper = edge + p.barrier_field_V_per_nm * p.barrier_width_nm - energy_eV;
  if (!(energy_eV >= 0.0) || lower < 0.0 || upper < 0.0) {
    throw DomainError("closed-form tunneling rate requires 0 <= E* <= barrier edge");
  }
  const double nu = assault_frequency(energy_eV, p.dot_field_V_per_nm, p.dot_width_nm, p.electron_mass);
  // The exponent divides by the dot field F_d, not the barrier field.
  const double k = gamow_prefactor(p.electron_mass, p.dot_field_V_per_nm);
  return nu * std::exp(-k * (pow_three_halves(upper) - pow_three_halves(lower)));
}

double tunneling_rate(double energy_eV, const DeviceParams& p) {
  const double edge = p.conduction_offset_eV - p.dot_field_V_per_nm * p.dot_width_nm / 2.0;
  if (energy_eV <= edge) return tunneling_rate_closed_form(energy_eV, p);
  const double nu = assault_frequency(energy_eV, p.dot_field_V_per_nm, p.dot_width_nm, p.electron_mass);
  const double upper = edge + p.barrier_field_V_per_nm * p.barrier_width_nm - energy_eV;
  if (upper <= 0.0) return nu;
  // Only the tip of the ramp is forbidden; the inner turning point moves into the barrier.
  return nu * std::exp(-gamow_prefactor(p.electron_mass, p.dot_field_V_per_nm) * pow_three_halves(upper));
}

}  // namespace qdpc
