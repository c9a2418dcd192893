#include <algorithm>
#include <cmath>
#include <limits>

#include "qdpc/constants.hpp"
#include "qdpc/errors.hpp"
#include "qdpc/observables.hpp"

namespace qdpc {

double terminal_voltage(double rho_alpha, double rho_beta, double transport_gap_eV, double temperature_K) {
  if (!(rho_alpha > 0.0) || !(rho_beta > 0.0)) {
    throw DomainError("terminal voltage needs positive alpha and beta populations");
  }
  return transport_gap_eV + kConstants.k_B * temperature_K * std::log(rho_alpha / rho_beta);
}

OperatingPoint operating_point(const Generator& g) {
  OperatingPoint op;
  op.steady = steady_state(g);
  op.load_rate = g.rates.load_rate;
  const double rho_alpha = op.steady[kAlpha];
  const double rho_beta = op.steady[kBeta];
  op.current = op.load_rate * rho_alpha;
  // Photon energy of the pumped level above the ground reference E_b = 0.
  op.solar_power = op.current * g.rates.bright_energy_eV;
  if (rho_alpha > 0.0 && rho_beta > 0.0) {
    op.voltage = terminal_voltage(rho_alpha, rho_beta, g.rates.transport_gap_eV, g.rates.temperature_K);
    op.power = op.current * op.voltage;
  } else {
    op.limit = rho_beta > 0.0 ? VoltageLimit::kShortCircuit : VoltageLimit::kOpenCircuit;
    op.voltage = std::numeric_limits<double>::quiet_NaN();
    op.power = 0.0;
  }
  return op;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw DomainError("log_grid needs 0 < lo <= hi and count > 0");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = std::exp(a + step * static_cast<double>(k));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (!(hi >= lo) || count == 0) throw DomainError("linear_grid needs lo <= hi and count > 0");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;
  return grid;
}

std::vector<double> default_load_grid() { return log_grid(1e-4, 1e9, 60); }

namespace {

constexpr double kInvGolden = 0.6180339887498949;

double usable_power(const OperatingPoint& op) {
  return op.ok() && std::isfinite(op.power) ? op.power : -std::numeric_limits<double>::infinity();
}

OperatingPoint safe_evaluate(const std::function<OperatingPoint(double)>& evaluate, double load) {
  try {
    return evaluate(load);
  } catch (const Error& e) {
    OperatingPoint op;
    op.load_rate = load;
    op.failure = e.what();
    return op;
  }
}

}  // namespace

PeakPower peak_power(const IVCurve& curve, const std::function<OperatingPoint(double)>& evaluate) {
  const auto& pts = curve.points;
  std::size_t best = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (usable_power(pts[i]) == -std::numeric_limits<double>::infinity()) continue;
    if (best == pts.size() || pts[i].power > pts[best].power) best = i;
  }
  if (best == pts.size()) throw DomainError("peak_power: curve has no valid operating point");

  PeakPower result{pts[best].power, pts[best], false};
  if (best == 0 || best + 1 == pts.size()) {
    result.at_boundary = true;
    return result;
  }

  // Golden-section search on log(load rate) inside the neighbouring bracket.
  double a = std::log(pts[best - 1].load_rate);
  double b = std::log(pts[best + 1].load_rate);
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  OperatingPoint p1 = safe_evaluate(evaluate, std::exp(x1));
  OperatingPoint p2 = safe_evaluate(evaluate, std::exp(x2));
  while (b - a > 1e-9) {
    if (usable_power(p1) >= usable_power(p2)) {
      b = x2;
      x2 = x1;
      p2 = std::move(p1);
      x1 = b - kInvGolden * (b - a);
      p1 = safe_evaluate(evaluate, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      p1 = std::move(p2);
      x2 = a + kInvGolden * (b - a);
      p2 = safe_evaluate(evaluate, std::exp(x2));
    }
  }
  for (OperatingPoint* p : {&p1, &p2}) {
    if (usable_power(*p) > result.power) {
      result.power = p->power;
      result.at = *p;
    }
  }
  return result;
}

PeakPower peak_power(const IVCurve& curve) {
  const DerivedRates base = derive_rates(curve.params, curve.kind);
  return peak_power(curve, [&base](double load) {
    DerivedRates r = base;
    r.load_rate = load;
    return operating_point(build_generator(r));
  });
}

double relative_enhancement(double coupled_peak, double uncoupled_peak) {
  if (!(uncoupled_peak > 0.0)) throw DomainError("relative enhancement needs a positive uncoupled peak");
  return (coupled_peak - uncoupled_peak) / uncoupled_peak;
}

Trajectory population_dynamics(const DerivedRates& rates, double t_end, std::size_t checkpoints,
                               const SolverConfig& cfg, double first_checkpoint) {
  if (!(t_end > 0.0)) throw DomainError("population_dynamics needs t_end > 0");
  if (!(first_checkpoint > 0.0 && first_checkpoint <= t_end)) {
    throw DomainError("population_dynamics needs 0 < first checkpoint <= t_end");
  }
  const auto times = log_grid(first_checkpoint, t_end, std::max<std::size_t>(checkpoints, 1));
  const Generator g = build_generator(rates);
  return integrate(g, PopulationState::ground(rates.kind), 0.0, t_end, times, cfg);
}

Trajectory population_dynamics(const DeviceParams& params, ModelKind kind, double t_end,
                               std::size_t checkpoints, const SolverConfig& cfg, double first_checkpoint) {
  return population_dynamics(derive_rates(params, kind), t_end, checkpoints, cfg, first_checkpoint);
}

}  // namespace qdpc
