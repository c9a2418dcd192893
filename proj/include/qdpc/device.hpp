#pragma once

// Device description and the assembly of every rate that enters the
// population equations.

#include <string>
#include <string_view>
#include <vector>

namespace qdpc {

enum class ModelKind { kUncoupled, kCoupled };

std::string_view to_string(ModelKind kind);

/// How the x1 -> x2 phonon relaxation rate is obtained.
struct PhononRateSpec {
  enum class Mode { kTwoJ, kExplicit };

  Mode mode = Mode::kTwoJ;
  /// Used when mode == kExplicit, 1/ns.
  double explicit_per_ns = 0.0;
  /// Scales the 2J/hbar rule. Ignored for explicit rates.
  double multiplier = 1.0;

  static PhononRateSpec two_j(double multiplier = 1.0) { return {Mode::kTwoJ, 0.0, multiplier}; }
  static PhononRateSpec explicit_rate(double per_ns) { return {Mode::kExplicit, per_ns, 1.0}; }

  bool operator==(const PhononRateSpec&) const = default;
};

/// Material, geometry and environment parameters. Defaults reproduce the
/// reference GaN device (w_br = 0.5 nm, d_perp = 1.5 nm).
struct DeviceParams {
  double band_gap_eV = 3.51;
  double conduction_offset_eV = 2.0;
  double valence_offset_eV = 0.7;
  double electron_mass = 0.2;  // units of m_e
  double hole_mass = 1.0;      // units of m_e; carried, not used by the rate model
  double permittivity = 9.6;
  double dot_width_nm = 2.7;
  double dot_field_V_per_nm = 0.54;
  double barrier_field_V_per_nm = 0.57;
  double recombination_fraction = 0.20;
  double temperature_K = 300.0;
  double exciton_energy_eV = 3.25;
  double photon_occupation = 60000.0;
  double barrier_width_nm = 0.5;
  double dot_spacing_nm = 1.5;
  double dipole_fraction = 0.8;
  /// Electron energy above the conduction band minimum inside the dot.
  double escape_energy_eV = 0.5;
  double load_rate_per_ns = 0.08;
  PhononRateSpec phonon_rate{};

  bool operator==(const DeviceParams&) const = default;
};

struct Violation {
  std::string field;
  std::string reason;
};

/// Every violated invariant of `p`; empty when the parameters are usable.
std::vector<Violation> validate_params(const DeviceParams& p);

/// Throws InvalidParams listing all violations, if any.
void require_valid(const DeviceParams& p);

struct DerivedRates {
  ModelKind kind = ModelKind::kCoupled;
  double coupling_eV = 0.0;        // J
  double dipole_length_nm = 0.0;   // charge separation of the exciton
  double pump_rate = 0.0;          // gamma_h, 1/ns
  double phonon_rate = 0.0;        // gamma_x, 1/ns
  double photon_occupation = 0.0;  // n_h
  double phonon_occupation = 0.0;  // n_x
  double tunnel_bright = 0.0;      // x1 -> alpha, 1/ns
  double tunnel_dark = 0.0;        // x2 -> alpha, 1/ns
  double tunnel_uncoupled = 0.0;   // a_i -> alpha, 1/ns
  double hole_tunnel = 0.0;        // beta -> b, 1/ns
  double load_rate = 0.0;          // alpha -> beta, 1/ns
  double recombination_fraction = 0.0;
  double bright_energy_eV = 0.0;     // E_x1
  double dark_energy_eV = 0.0;       // E_x2
  double transport_gap_eV = 0.0;     // E_alpha - E_beta
  double temperature_K = 0.0;

  bool operator==(const DerivedRates&) const = default;
};

/// Requires validate_params(p) to be empty. Throws DegenerateGeometry when
/// the dark level sits below the conduction band minimum (E* < J).
DerivedRates derive_rates(const DeviceParams& p, ModelKind kind);

}  // namespace qdpc
