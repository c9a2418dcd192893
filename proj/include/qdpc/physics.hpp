#pragma once

// Closed-form physics of the coupled dot pair: dipole coupling, eigenstates,
// radiative and thermal rates, and Gamow-style tunneling out of the dot.

#include <array>
#include <vector>

#include "qdpc/device.hpp"

namespace qdpc {

/// Dipole-dipole interaction energy (eV) of two parallel excitonic dipoles of
/// charge separation `dipole_length_nm` a distance `spacing_nm` apart.
double coupling_strength(double dipole_length_nm, double permittivity, double spacing_nm);

struct LevelPair {
  double symmetric;      // E_x1
  double antisymmetric;  // E_x2
};

LevelPair eigenstate_energies(double uncoupled_eV, double coupling_eV);

using Dipole = std::array<double, 3>;

struct DipolePair {
  double symmetric;
  double antisymmetric;
};

/// Transition dipole magnitudes of the symmetric and antisymmetric one-exciton
/// states built from dipoles `mu1`, `mu2`.
DipolePair eigenstate_dipoles(const Dipole& mu1, const Dipole& mu2);

/// Radiative rate (1/ns) between the ground state and the bright state for a
/// dipole e * dipole_length_nm at transition energy `transition_eV`.
double pumping_rate(double transition_eV, double dipole_length_nm);

/// Bose occupation of a mode with energy `gap_eV` at temperature `temperature_K`.
double planck_occupation(double gap_eV, double temperature_K);

enum class AssaultRadius {
  /// Classically allowed length capped at the dot width.
  kClampedToDot,
  /// E*/F_d + w_d/2 without the cap.
  kRaw,
};

/// Classical bounce frequency (1/ns) of an electron with energy `energy_eV`
/// above the dot's mid-point band edge in a well tilted by `field_V_per_nm`.
double assault_frequency(double energy_eV, double field_V_per_nm, double dot_width_nm,
                         double relative_mass, AssaultRadius radius = AssaultRadius::kClampedToDot);

/// Closed-form Gamow rate: nu_c times the linear-barrier WKB exponential.
/// Throws DomainError unless 0 <= energy_eV <= barrier top at the dot edge.
double tunneling_rate_closed_form(double energy_eV, const DeviceParams& p);

/// Tunneling rate usable at any energy: partially transparent barriers keep
/// only the part above the electron, and above-barrier energies give T = 1.
double tunneling_rate(double energy_eV, const DeviceParams& p);

// ---------------------------------------------------------------------------
// Band profile and numeric WKB

enum class Region { kDot, kBarrier, kBulk };

struct Segment {
  double start_nm;
  double end_nm;
  double start_potential_eV;
  double slope_eV_per_nm;
  Region region;

  double potential(double x_nm) const { return start_potential_eV + slope_eV_per_nm * (x_nm - start_nm); }
  double end_potential() const { return potential(end_nm); }
};

/// Conduction-band edge along the transport direction. Energies are measured
/// from the band edge at the middle of the dot, x = 0 is the uphill dot edge.
class BandProfile {
 public:
  explicit BandProfile(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  double potential(double x_nm) const;
  /// Highest potential of the barrier region, or the dot edge level if there is none.
  double barrier_top() const;
  /// Potential just inside the barrier at the dot interface.
  double barrier_base() const;

 private:
  std::vector<Segment> segments_;
};

enum class BarrierGeometry {
  /// Barrier ramp with the dot's slope F_d rising by F_br * w_br, so that its
  /// WKB action is exactly the closed form.
  kClosedFormEquivalent,
  /// Barrier of width w_br with its own slope F_br.
  kPhysical,
};

BandProfile build_profile(const DeviceParams& p,
                          BarrierGeometry geometry = BarrierGeometry::kClosedFormEquivalent);

struct TunnelSpec {
  double energy_eV;
  double relative_mass;
  BandProfile profile;
};

/// exp(-2 * action) over the forbidden region outside the dot, by adaptive
/// Gauss-Kronrod quadrature. Returns 1 when nothing is forbidden.
double wkb_transmission_numeric(const TunnelSpec& spec);

/// The dimensionless action integral  int sqrt(2 m (V - E)) / hbar dx.
double wkb_action_numeric(const TunnelSpec& spec);

}  // namespace qdpc
