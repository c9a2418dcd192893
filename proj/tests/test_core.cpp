#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "qdpc/constants.hpp"
#include "qdpc/device.hpp"
#include "qdpc/errors.hpp"

using namespace qdpc;

TEST_CASE("working-unit constants match SI values") {
  CHECK(kConstants.hbar == doctest::Approx(oracle::hbar / oracle::e * 1e9).epsilon(1e-15));
  CHECK(kConstants.k_B == doctest::Approx(oracle::kB / oracle::e).epsilon(1e-15));
  CHECK(kConstants.coulomb_factor ==
        doctest::Approx(oracle::e / (4.0 * std::numbers::pi * oracle::eps0) * 1e9).epsilon(1e-15));
  // 1 m_e expressed in eV ns^2 / nm^2.
  // 1 kg = 1 J s^2 / m^2 = (1/e) eV ns^2 / nm^2.
  CHECK(mass_from_relative(1.0) == doctest::Approx(oracle::me / oracle::e).epsilon(1e-15));
}

TEST_CASE("default parameters are valid") { CHECK(validate_params(DeviceParams{}).empty()); }

TEST_CASE("validation reports every violated field") {
  DeviceParams p;
  p.dot_width_nm = -1.0;
  p.temperature_K = 0.0;
  p.recombination_fraction = -0.5;
  const auto v = validate_params(p);
  CHECK(v.size() >= 3);
  CHECK_THROWS_AS(require_valid(p), InvalidParams);
}

TEST_CASE("derived rates for the reference device") {
  const DeviceParams p;
  const auto r = derive_rates(p, ModelKind::kCoupled);
  const double J = oracle::coupling(0.8 * 2.7, 9.6, 1.5);
  CHECK(r.coupling_eV == doctest::Approx(J).epsilon(1e-13));
  CHECK(r.coupling_eV == doctest::Approx(0.2074).epsilon(1e-3));
  CHECK(r.dipole_length_nm == doctest::Approx(2.16));
  CHECK(r.pump_rate == doctest::Approx(oracle::pump(3.25, 2.16)).epsilon(1e-12));
  CHECK(r.phonon_rate == doctest::Approx(2.0 * J * oracle::e / oracle::hbar * 1e-9).epsilon(1e-12));
  CHECK(r.phonon_occupation == doctest::Approx(oracle::occupation(2.0 * J, 300.0)).epsilon(1e-10));
  CHECK(r.bright_energy_eV == doctest::Approx(3.25));
  CHECK(r.dark_energy_eV == doctest::Approx(3.25 - 2.0 * J));
  CHECK(r.transport_gap_eV == doctest::Approx(3.51));
  CHECK(r.load_rate == 0.08);

  const double edge = 2.0 - 0.54 * 2.7 / 2.0;
  CHECK(r.tunnel_bright == doctest::Approx(oracle::gamow(0.5 + J, edge, 0.54, 0.57, 0.5, 2.7, 0.2)).epsilon(1e-12));
  CHECK(r.tunnel_dark == doctest::Approx(oracle::gamow(0.5 - J, edge, 0.54, 0.57, 0.5, 2.7, 0.2)).epsilon(1e-12));
  CHECK(r.hole_tunnel == doctest::Approx(oracle::gamow(0.5, edge, 0.54, 0.57, 0.5, 2.7, 0.2)).epsilon(1e-12));

  // Frozen values from an independent prototype (CODATA 2022 constants, hence 1e-8).
  CHECK(r.coupling_eV == doctest::Approx(0.20735489474881658).epsilon(1e-8));
  CHECK(r.pump_rate == doctest::Approx(364.8162657652417).epsilon(1e-8));
  CHECK(r.phonon_rate == doctest::Approx(630055.0835003513).epsilon(1e-8));
  CHECK(r.tunnel_bright == doctest::Approx(39286.989852507824).epsilon(1e-8));
  CHECK(r.tunnel_dark == doctest::Approx(27422.317734365603).epsilon(1e-8));
  CHECK(r.hole_tunnel == doctest::Approx(32089.347866547338).epsilon(1e-8));
}

TEST_CASE("uncoupled rates tunnel from E* and share the hole rate") {
  const auto r = derive_rates(DeviceParams{}, ModelKind::kUncoupled);
  CHECK(r.kind == ModelKind::kUncoupled);
  CHECK(r.tunnel_uncoupled == r.hole_tunnel);
}

TEST_CASE("phonon rate spec") {
  DeviceParams p;
  p.phonon_rate = PhononRateSpec::two_j(0.5);
  const double base = derive_rates(DeviceParams{}, ModelKind::kCoupled).phonon_rate;
  CHECK(derive_rates(p, ModelKind::kCoupled).phonon_rate == doctest::Approx(0.5 * base).epsilon(1e-15));
  p.phonon_rate = PhononRateSpec::explicit_rate(1234.5);
  CHECK(derive_rates(p, ModelKind::kCoupled).phonon_rate == 1234.5);
}

TEST_CASE("a dark level below the band minimum is degenerate") {
  DeviceParams p;
  p.dot_spacing_nm = 1.0;  // J ~ 0.70 eV > E*
  CHECK_THROWS_AS(derive_rates(p, ModelKind::kCoupled), DegenerateGeometry);
  CHECK_THROWS_AS(derive_rates(p, ModelKind::kUncoupled), DegenerateGeometry);
}
