#include "qdpc/device.hpp"

#include <cmath>
#include <sstream>

#include "qdpc/constants.hpp"
#include "qdpc/errors.hpp"
#include "qdpc/physics.hpp"

namespace qdpc {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUncoupled:
      return "uncoupled";
    case ModelKind::kCoupled:
      return "coupled";
  }
  return "?";
}

namespace {

void positive(std::vector<Violation>& out, const char* field, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) out.push_back({field, "must be finite and > 0"});
}

void non_negative(std::vector<Violation>& out, const char* field, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) out.push_back({field, "must be finite and >= 0"});
}

}  // namespace

std::vector<Violation> validate_params(const DeviceParams& p) {
  std::vector<Violation> out;
  positive(out, "band_gap_eV", p.band_gap_eV);
  positive(out, "conduction_offset_eV", p.conduction_offset_eV);
  positive(out, "valence_offset_eV", p.valence_offset_eV);
  positive(out, "electron_mass", p.electron_mass);
  positive(out, "hole_mass", p.hole_mass);
  positive(out, "permittivity", p.permittivity);
  positive(out, "dot_width_nm", p.dot_width_nm);
  positive(out, "dot_field_V_per_nm", p.dot_field_V_per_nm);
  positive(out, "barrier_field_V_per_nm", p.barrier_field_V_per_nm);
  non_negative(out, "recombination_fraction", p.recombination_fraction);
  positive(out, "temperature_K", p.temperature_K);
  positive(out, "exciton_energy_eV", p.exciton_energy_eV);
  non_negative(out, "photon_occupation", p.photon_occupation);
  positive(out, "barrier_width_nm", p.barrier_width_nm);
  positive(out, "dot_spacing_nm", p.dot_spacing_nm);
  if (!(p.dipole_fraction > 0.0 && p.dipole_fraction <= 1.0)) {
    out.push_back({"dipole_fraction", "must lie in (0, 1]"});
  }
  positive(out, "escape_energy_eV", p.escape_energy_eV);
  non_negative(out, "load_rate_per_ns", p.load_rate_per_ns);
  if (p.phonon_rate.mode == PhononRateSpec::Mode::kExplicit) {
    non_negative(out, "phonon_rate", p.phonon_rate.explicit_per_ns);
  } else {
    non_negative(out, "phonon_rate.multiplier", p.phonon_rate.multiplier);
  }
  if (!(p.exciton_energy_eV < p.band_gap_eV + p.conduction_offset_eV)) {
    out.push_back({"exciton_energy_eV", "must lie below the barrier band edge E_g + dE_c"});
  }
  return out;
}

void require_valid(const DeviceParams& p) {
  const auto violations = validate_params(p);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid device parameters:";
  for (const auto& v : violations) msg << ' ' << v.field << " (" << v.reason << ");";
  throw InvalidParams(msg.str());
}

DerivedRates derive_rates(const DeviceParams& p, ModelKind kind) {
  require_valid(p);

  DerivedRates r;
  r.kind = kind;
  r.dipole_length_nm = p.dipole_fraction * p.dot_width_nm;
  r.coupling_eV = coupling_strength(r.dipole_length_nm, p.permittivity, p.dot_spacing_nm);
  const double J = r.coupling_eV;

  // The configured exciton energy is the bright level; the dark one sits 2J below.
  r.bright_energy_eV = p.exciton_energy_eV;
  r.dark_energy_eV = p.exciton_energy_eV - 2.0 * J;

  r.pump_rate = pumping_rate(r.bright_energy_eV, r.dipole_length_nm);
  r.photon_occupation = p.photon_occupation;
  r.phonon_rate = p.phonon_rate.mode == PhononRateSpec::Mode::kTwoJ
                      ? p.phonon_rate.multiplier * 2.0 * J / kConstants.hbar
                      : p.phonon_rate.explicit_per_ns;
  r.phonon_occupation = planck_occupation(2.0 * J, p.temperature_K);

  if (p.escape_energy_eV - J < 0.0) {
    std::ostringstream msg;
    msg << "dark level below the conduction band minimum: E* - J = " << p.escape_energy_eV - J
        << " eV (J = " << J << " eV)";
    throw DegenerateGeometry(msg.str());
  }
  r.tunnel_bright = tunneling_rate(p.escape_energy_eV + J, p);
  r.tunnel_dark = tunneling_rate(p.escape_energy_eV - J, p);
  r.tunnel_uncoupled = tunneling_rate(p.escape_energy_eV, p);
  // Hole escape is taken equal to the electron escape at E*.
  r.hole_tunnel = r.tunnel_uncoupled;

  r.load_rate = p.load_rate_per_ns;
  r.recombination_fraction = p.recombination_fraction;
  r.transport_gap_eV = p.band_gap_eV;
  r.temperature_K = p.temperature_K;
  return r;
}

}  // namespace qdpc
