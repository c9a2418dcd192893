// Data-parallel sweep kernels. Every grid cell is an independent pure
// computation written to its own slot, so the serial and OpenMP paths
// produce bit-identical results.

#include <cstddef>

#include "qdpc/errors.hpp"
#include "qdpc/observables.hpp"

namespace qdpc {

namespace {

void require_increasing(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw DomainError(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError(std::string(what) + " grid must be strictly increasing");
  }
}

OperatingPoint evaluate_point(const DerivedRates& base, double load) {
  try {
    DerivedRates r = base;
    r.load_rate = load;
    return operating_point(build_generator(r));
  } catch (const Error& e) {
    OperatingPoint op;
    op.load_rate = load;
    op.failure = e.what();
    return op;
  }
}

}  // namespace

IVCurve iv_sweep(const DeviceParams& params, ModelKind kind, std::span<const double> load_grid,
                 Execution execution) {
  require_increasing(load_grid, "load");
  if (load_grid.front() < 0.0) throw DomainError("load rates must be non-negative");
  const DerivedRates base = derive_rates(params, kind);

  IVCurve curve{kind, params, std::vector<OperatingPoint>(load_grid.size())};
  const auto n = static_cast<std::ptrdiff_t>(load_grid.size());
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) curve.points[i] = evaluate_point(base, load_grid[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) curve.points[i] = evaluate_point(base, load_grid[i]);
  }
  return curve;
}

EnhancementCell enhancement(const DeviceParams& params, std::span<const double> load_grid) {
  EnhancementCell cell;
  try {
    const IVCurve coupled = iv_sweep(params, ModelKind::kCoupled, load_grid, Execution::kSerial);
    const IVCurve uncoupled = iv_sweep(params, ModelKind::kUncoupled, load_grid, Execution::kSerial);
    const PeakPower pc = peak_power(coupled);
    const PeakPower pu = peak_power(uncoupled);
    cell.coupled_peak = pc.power;
    cell.uncoupled_peak = pu.power;
    cell.coupled_peak_load = pc.at.load_rate;
    cell.uncoupled_peak_load = pu.at.load_rate;
    cell.peak_on_grid_edge = pc.at_boundary || pu.at_boundary;
    cell.eta = relative_enhancement(pc.power, pu.power);
    cell.converged = true;
  } catch (const Error& e) {
    cell.failure = e.what();
  }
  return cell;
}

EnhancementGrid phonon_rate_sweep(const DeviceParams& params, std::span<const double> multipliers,
                                  std::span<const double> load_grid, Execution execution) {
  for (double m : multipliers) {
    if (!(m > 0.0)) throw DomainError("phonon-rate multipliers must be positive");
  }
  EnhancementGrid grid;
  grid.axis1.assign(multipliers.begin(), multipliers.end());
  grid.cells.resize(multipliers.size());

  const auto cell = [&](std::size_t i) {
    DeviceParams p = params;
    p.phonon_rate = PhononRateSpec::two_j(multipliers[i]);
    return enhancement(p, load_grid);
  };
  const auto n = static_cast<std::ptrdiff_t>(multipliers.size());
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) grid.cells[i] = cell(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) grid.cells[i] = cell(i);
  }
  return grid;
}

EnhancementGrid geometry_sweep(const DeviceParams& params, std::span<const double> spacing_grid_nm,
                               std::span<const double> barrier_grid_nm, std::span<const double> load_grid,
                               Execution execution) {
  require_increasing(spacing_grid_nm, "dot spacing");
  require_increasing(barrier_grid_nm, "barrier width");
  if (!(spacing_grid_nm.front() > 0.0) || !(barrier_grid_nm.front() > 0.0)) {
    throw DomainError("geometry grids must be positive");
  }
  EnhancementGrid grid;
  grid.axis1.assign(spacing_grid_nm.begin(), spacing_grid_nm.end());
  grid.axis2.assign(barrier_grid_nm.begin(), barrier_grid_nm.end());
  const std::size_t cols = barrier_grid_nm.size();
  grid.cells.resize(spacing_grid_nm.size() * cols);

  const auto cell = [&](std::size_t flat) {
    DeviceParams p = params;
    p.dot_spacing_nm = spacing_grid_nm[flat / cols];
    p.barrier_width_nm = barrier_grid_nm[flat % cols];
    return enhancement(p, load_grid);
  };
  const auto n = static_cast<std::ptrdiff_t>(grid.cells.size());
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) grid.cells[i] = cell(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) grid.cells[i] = cell(i);
  }
  return grid;
}

}  // namespace qdpc
