#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "qdpc/errors.hpp"
#include "qdpc/numerics/expm.hpp"
#include "qdpc/observables.hpp"

using namespace qdpc;

TEST_CASE("terminal voltage") {
  const double kT = oracle::kB * 300.0 / oracle::e;
  CHECK(terminal_voltage(0.5, 0.5, 3.51, 300.0) == doctest::Approx(3.51));
  CHECK(terminal_voltage(0.9, 0.1, 3.51, 300.0) == doctest::Approx(3.51 + kT * std::log(9.0)));
  CHECK_THROWS_AS(terminal_voltage(0.5, 0.0, 3.51, 300.0), DomainError);
}

TEST_CASE("operating point of the reference device") {
  const auto u = operating_point(build_generator(derive_rates(DeviceParams{}, ModelKind::kUncoupled)));
  CHECK(u.ok());
  CHECK(u.limit == VoltageLimit::kNone);
  CHECK(u.current == doctest::Approx(0.07999944121028123).epsilon(1e-12));
  CHECK(u.voltage == doctest::Approx(3.8435427095132373).epsilon(1e-9));
  CHECK(u.power == doctest::Approx(0.30748126902890927).epsilon(1e-9));
  CHECK(u.solar_power == doctest::Approx(u.current * 3.25));

  const auto c = operating_point(build_generator(derive_rates(DeviceParams{}, ModelKind::kCoupled)));
  CHECK(c.current == doctest::Approx(0.07999951363532691).epsilon(1e-12));
  CHECK(c.power == doctest::Approx(0.3074815473976656).epsilon(1e-9));
}

TEST_CASE("open-circuit end of the load axis") {
  auto r = derive_rates(DeviceParams{}, ModelKind::kUncoupled);
  r.load_rate = 0.0;
  const auto op = operating_point(build_generator(r));
  CHECK(op.limit == VoltageLimit::kOpenCircuit);
  CHECK(std::isnan(op.voltage));
  CHECK(op.power == 0.0);
  CHECK(op.current == 0.0);
}

TEST_CASE("grids") {
  const auto g = log_grid(1e-4, 1e9, 60);
  CHECK(g.size() == 60);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 1e9);
  CHECK(g[1] / g[0] == doctest::Approx(g[59] / g[58]));
  CHECK(default_load_grid() == g);
  const auto l = linear_grid(1.0, 4.0, 8);
  CHECK(l[1] - l[0] == doctest::Approx(3.0 / 7.0));
  CHECK(l.back() == 4.0);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
}

TEST_CASE("I-V curve is monotone and peaks inside the grid") {
  const auto grid = default_load_grid();
  for (ModelKind k : {ModelKind::kUncoupled, ModelKind::kCoupled}) {
    const IVCurve curve = iv_sweep(DeviceParams{}, k, grid);
    REQUIRE(curve.points.size() == grid.size());
    double j_peak = 0.0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const auto& p = curve.points[i];
      REQUIRE(p.ok());
      j_peak = std::max(j_peak, p.current);
      if (i == 0) continue;
      CHECK(p.voltage <= curve.points[i - 1].voltage + 1e-9);
      CHECK(p.current >= curve.points[i - 1].current - 1e-9);
    }
    CHECK(curve.points.front().current <= 1e-6 * j_peak);
    const PeakPower peak = peak_power(curve);
    CHECK_FALSE(peak.at_boundary);
    for (const auto& p : curve.points) CHECK(p.power <= peak.power);
  }
}

TEST_CASE("peak powers and enhancement of the reference device") {
  const auto cell = enhancement(DeviceParams{}, default_load_grid());
  REQUIRE(cell.converged);
  CHECK_FALSE(cell.peak_on_grid_edge);
  CHECK(cell.coupled_peak == doctest::Approx(44492.4495).epsilon(1e-8));
  CHECK(cell.uncoupled_peak == doctest::Approx(38766.5135).epsilon(1e-8));
  CHECK(cell.eta == doctest::Approx(0.14770314851811067).epsilon(1e-7));
  CHECK(cell.coupled_peak_load == doctest::Approx(1.72e6).epsilon(1e-2));
  CHECK(cell.uncoupled_peak_load == doctest::Approx(1.50e6).epsilon(1e-2));
  // The refined peak does not depend on how coarse the bracketing grid is.
  const auto coarse = enhancement(DeviceParams{}, log_grid(1e-3, 1e8, 23));
  CHECK(coarse.eta == doctest::Approx(cell.eta).epsilon(1e-7));
}

TEST_CASE("peak on the edge of the grid is flagged") {
  const IVCurve curve = iv_sweep(DeviceParams{}, ModelKind::kCoupled, log_grid(1e-4, 1e3, 20));
  CHECK(peak_power(curve).at_boundary);
}

TEST_CASE("relative enhancement") {
  CHECK(relative_enhancement(1.25, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(relative_enhancement(1.0, 0.0), DomainError);
}

TEST_CASE("phonon-rate sweep") {
  const std::vector<double> mult = {0.01, 0.1, 0.5, 1.0, 2.0, 4.0};
  const auto grid = phonon_rate_sweep(DeviceParams{}, mult, default_load_grid());
  REQUIRE(grid.cells.size() == mult.size());
  const double expected[] = {-0.0287, 0.0690, 0.1343, 0.1477, 0.1551, 0.1591};
  for (std::size_t i = 0; i < mult.size(); ++i) {
    REQUIRE(grid.at(i).converged);
    CHECK(grid.at(i).eta == doctest::Approx(expected[i]).epsilon(2e-3));
  }
  CHECK(grid.at(3).eta == doctest::Approx(enhancement(DeviceParams{}, default_load_grid()).eta).epsilon(1e-12));
}

TEST_CASE("geometry sweep marks degenerate cells and keeps going") {
  const std::vector<double> spacing = {1.0, 1.5};
  const std::vector<double> barrier = {0.5};
  const auto grid = geometry_sweep(DeviceParams{}, spacing, barrier, default_load_grid());
  REQUIRE(grid.cells.size() == 2);
  CHECK_FALSE(grid.at(0, 0).converged);
  CHECK_FALSE(grid.at(0, 0).failure.empty());
  CHECK(grid.at(1, 0).converged);
  CHECK(grid.at(1, 0).eta == doctest::Approx(0.14770314851811067).epsilon(1e-7));
}

TEST_CASE("serial and parallel sweeps agree bit for bit") {
  const std::vector<double> spacing = {1.5, 2.0, 2.5};
  const std::vector<double> barrier = {0.3, 0.8};
  const auto grid = default_load_grid();
  const auto a = geometry_sweep(DeviceParams{}, spacing, barrier, grid, Execution::kSerial);
  const auto b = geometry_sweep(DeviceParams{}, spacing, barrier, grid, Execution::kParallel);
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].eta == b.cells[i].eta);
  const auto s = iv_sweep(DeviceParams{}, ModelKind::kCoupled, grid, Execution::kSerial);
  const auto p = iv_sweep(DeviceParams{}, ModelKind::kCoupled, grid, Execution::kParallel);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(s.points[i].power == p.points[i].power);
}

TEST_CASE("population dynamics match the propagator") {
  for (ModelKind k : {ModelKind::kUncoupled, ModelKind::kCoupled}) {
    const auto r = derive_rates(DeviceParams{}, k);
    const auto tr = population_dynamics(r, 200.0, 20);
    CHECK(tr.times.size() == 21);
    const Generator g = build_generator(r);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const Vector ref = matrix_exponential_apply(g.matrix, tr.times[i], PopulationState::ground(k).values);
      for (std::size_t s = 0; s < kStateCount; ++s) CHECK(std::abs(tr.states[i][s] - ref[s]) <= 1e-8);
    }
    CHECK_THROWS_AS(population_dynamics(r, 0.0, 20), DomainError);
  }
}
