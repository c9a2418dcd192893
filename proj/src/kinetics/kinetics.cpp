#include "qdpc/kinetics.hpp"

#include <algorithm>
#include <cmath>

#include "qdpc/errors.hpp"
#include "qdpc/numerics/steady_state.hpp"

namespace qdpc {

std::array<std::string_view, kStateCount> state_labels(ModelKind kind) {
  if (kind == ModelKind::kCoupled) return {"rho_x1", "rho_x2", "rho_alpha", "rho_beta", "rho_b"};
  return {"rho_a1", "rho_a2", "rho_alpha", "rho_beta", "rho_b"};
}

PopulationState PopulationState::ground(ModelKind kind) {
  PopulationState s{kind, {}};
  s.values[kGround] = 1.0;
  return s;
}

PopulationState PopulationState::from(ModelKind kind, std::span<const double> values) {
  if (values.size() != kStateCount) throw DomainError("population vector must have 5 entries");
  PopulationState s{kind, {}};
  std::copy(values.begin(), values.end(), s.values.begin());
  return s;
}

double PopulationState::trace() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

double PopulationState::min() const { return *std::min_element(values.begin(), values.end()); }

namespace {

// Adds the transition from -> to with the given rate.
void add_rate(Matrix& m, std::size_t from, std::size_t to, double rate) {
  m(to, from) += rate;
  m(from, from) -= rate;
}

// Shared alpha -> beta -> b branch: load, radiative recombination, hole escape.
void add_extraction(Matrix& m, const DerivedRates& r) {
  add_rate(m, kAlpha, kBeta, r.load_rate);
  add_rate(m, kAlpha, kGround, r.recombination_fraction * r.load_rate);
  add_rate(m, kBeta, kGround, r.hole_tunnel);
}

// Snaps each column's off-diagonal rates to a common power-of-two grid fine
// enough that their sum is exact, then sets the diagonal to minus that sum.
// Every column then sums to exactly zero in floating point, at the cost of a
// relative change of at most 2^-52 of the column's total outflow.
void make_conservative(Matrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double outflow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) outflow += m(i, j);
    }
    if (outflow == 0.0) {
      m(j, j) = 0.0;
      continue;
    }
    int exponent = 0;
    std::frexp(outflow * (1.0 + 1e-9), &exponent);
    const double unit = std::ldexp(1.0, exponent - 52);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      m(i, j) = std::nearbyint(m(i, j) / unit) * unit;
      total += m(i, j);
    }
    m(j, j) = -total;
  }
}

}  // namespace

Generator uncoupled_generator(const DerivedRates& r) {
  Matrix m(kStateCount, kStateCount);
  const double per_dot = r.pump_rate / 2.0;
  const double n_h = r.photon_occupation;
  for (std::size_t dot : {kExcited1, kExcited2}) {
    add_rate(m, kGround, dot, per_dot * n_h);
    add_rate(m, dot, kGround, per_dot * (1.0 + n_h));
    add_rate(m, dot, kAlpha, r.tunnel_uncoupled);
  }
  add_extraction(m, r);
  make_conservative(m);
  DerivedRates rates = r;
  rates.kind = ModelKind::kUncoupled;
  return {ModelKind::kUncoupled, std::move(m), rates};
}

Generator coupled_generator(const DerivedRates& r) {
  Matrix m(kStateCount, kStateCount);
  const double n_h = r.photon_occupation;
  const double n_x = r.phonon_occupation;
  add_rate(m, kGround, kExcited1, r.pump_rate * n_h);
  add_rate(m, kExcited1, kGround, r.pump_rate * (1.0 + n_h));
  add_rate(m, kExcited1, kExcited2, r.phonon_rate * (1.0 + n_x));
  add_rate(m, kExcited2, kExcited1, r.phonon_rate * n_x);
  add_rate(m, kExcited1, kAlpha, r.tunnel_bright);
  add_rate(m, kExcited2, kAlpha, r.tunnel_dark);
  add_extraction(m, r);
  make_conservative(m);
  DerivedRates rates = r;
  rates.kind = ModelKind::kCoupled;
  return {ModelKind::kCoupled, std::move(m), rates};
}

Generator build_generator(const DerivedRates& r) {
  return r.kind == ModelKind::kCoupled ? coupled_generator(r) : uncoupled_generator(r);
}

std::array<double, kStateCount> rhs(const Generator& g, const PopulationState& rho) {
  const auto d = wide_product(g.matrix, rho.values);
  std::array<double, kStateCount> out{};
  for (std::size_t i = 0; i < kStateCount; ++i) out[i] = static_cast<double>(d[i]);
  return out;
}

PopulationState steady_state(const Generator& g) {
  return PopulationState::from(g.kind, stationary_distribution(g.matrix));
}

Trajectory integrate(const Generator& g, const PopulationState& rho0, double t0, double t_end,
                     std::span<const double> checkpoints, const SolverConfig& cfg) {
  return integrate(g.matrix, rho0.values, t0, t_end, checkpoints, cfg);
}

}  // namespace qdpc
