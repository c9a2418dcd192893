#pragma once

// Terminal observables of the photocell and the experiment drivers built on
// them: I-V sweeps, peak power, and enhancement sweeps over the phonon rate
// and the device geometry.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qdpc/device.hpp"
#include "qdpc/kinetics.hpp"
#include "qdpc/numerics/radau.hpp"

namespace qdpc {

/// eV = E_alpha - E_beta + k_B T ln(rho_alpha / rho_beta), returned in volts.
/// Throws DomainError unless both populations are positive.
double terminal_voltage(double rho_alpha, double rho_beta, double transport_gap_eV,
                        double temperature_K);

enum class VoltageLimit { kNone, kOpenCircuit, kShortCircuit };

struct OperatingPoint {
  double load_rate = 0.0;    // 1/ns
  double voltage = 0.0;      // V; NaN when `limit` is set
  double current = 0.0;      // e/ns
  double power = 0.0;        // eV/ns
  double solar_power = 0.0;  // eV/ns
  PopulationState steady{};
  VoltageLimit limit = VoltageLimit::kNone;
  /// Empty on success; otherwise the reason the point could not be evaluated.
  std::string failure;

  bool ok() const { return failure.empty(); }
};

/// Steady state of `g` and the resulting current, voltage and powers.
/// Propagates DegenerateKernel.
OperatingPoint operating_point(const Generator& g);

struct IVCurve {
  ModelKind kind = ModelKind::kCoupled;
  DeviceParams params{};
  std::vector<OperatingPoint> points;
};

enum class Execution { kSerial, kParallel };

/// `count` points log-spaced over [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// 60 load rates log-spaced over [1e-4, 1e9] 1/ns.
std::vector<double> default_load_grid();

/// One operating point per load rate. Failures are recorded per point.
IVCurve iv_sweep(const DeviceParams& params, ModelKind kind, std::span<const double> load_grid,
                 Execution execution = Execution::kParallel);

struct PeakPower {
  double power = 0.0;
  OperatingPoint at{};
  bool at_boundary = false;
};

/// Grid argmax refined by golden-section search in log(load rate) between the
/// neighbouring grid points. `evaluate` maps a load rate to its operating point.
PeakPower peak_power(const IVCurve& curve, const std::function<OperatingPoint(double)>& evaluate);

/// As above, re-evaluating the curve's own device.
PeakPower peak_power(const IVCurve& curve);

/// (P_coupled - P_uncoupled) / P_uncoupled. Throws DomainError if the
/// uncoupled peak is not positive.
double relative_enhancement(double coupled_peak, double uncoupled_peak);

struct EnhancementCell {
  double eta = 0.0;
  double coupled_peak = 0.0;
  double uncoupled_peak = 0.0;
  double coupled_peak_load = 0.0;
  double uncoupled_peak_load = 0.0;
  bool converged = false;
  /// Either peak sat on an end of the load grid.
  bool peak_on_grid_edge = false;
  std::string failure;
};

struct EnhancementGrid {
  std::vector<double> axis1;
  /// Empty for one-dimensional sweeps.
  std::vector<double> axis2;
  /// Row-major, axis1 outer.
  std::vector<EnhancementCell> cells;

  std::size_t cols() const { return axis2.empty() ? 1 : axis2.size(); }
  const EnhancementCell& at(std::size_t i, std::size_t k = 0) const { return cells[i * cols() + k]; }
};

/// Peak-power enhancement of one device.
EnhancementCell enhancement(const DeviceParams& params, std::span<const double> load_grid);

/// eta as the phonon relaxation rate is varied in units of 2J/hbar.
EnhancementGrid phonon_rate_sweep(const DeviceParams& params, std::span<const double> multipliers,
                                  std::span<const double> load_grid,
                                  Execution execution = Execution::kParallel);

/// eta over the (dot spacing, barrier width) plane.
EnhancementGrid geometry_sweep(const DeviceParams& params, std::span<const double> spacing_grid_nm,
                               std::span<const double> barrier_grid_nm,
                               std::span<const double> load_grid,
                               Execution execution = Execution::kParallel);

/// Populations from rho_b = 1 at t = 0 to t_end, reported at `checkpoints`
/// log-spaced points starting at `first_checkpoint`.
Trajectory population_dynamics(const DerivedRates& rates, double t_end, std::size_t checkpoints,
                               const SolverConfig& cfg = {}, double first_checkpoint = 1e-6);
Trajectory population_dynamics(const DeviceParams& params, ModelKind kind, double t_end,
                               std::size_t checkpoints, const SolverConfig& cfg = {},
                               double first_checkpoint = 1e-6);

}  // namespace qdpc
