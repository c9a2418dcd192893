#pragma once

// Pauli master equations of the two photocell variants as linear generators
// rho' = A rho over the populations (excited1, excited2, alpha, beta, b).

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "qdpc/device.hpp"
#include "qdpc/numerics/linalg.hpp"
#include "qdpc/numerics/radau.hpp"

namespace qdpc {

inline constexpr std::size_t kStateCount = 5;

/// State ordering shared by both variants.
enum StateIndex : std::size_t {
  kExcited1 = 0,  // x1 (coupled) / a1 (uncoupled)
  kExcited2 = 1,  // x2 (coupled) / a2 (uncoupled)
  kAlpha = 2,     // electron in the n-side conduction band
  kBeta = 3,      // hole in the p-side valence band
  kGround = 4,    // b
};

/// Column names used in outputs, e.g. "rho_x1" / "rho_a1".
std::array<std::string_view, kStateCount> state_labels(ModelKind kind);

struct PopulationState {
  ModelKind kind = ModelKind::kCoupled;
  std::array<double, kStateCount> values{};

  static PopulationState ground(ModelKind kind);
  static PopulationState from(ModelKind kind, std::span<const double> values);

  double operator[](std::size_t i) const { return values[i]; }
  double trace() const;
  double min() const;
};

/// Column-stochastic rate matrix: off-diagonals are j -> i rates, every
/// column sums to zero.
struct Generator {
  ModelKind kind;
  Matrix matrix;
  DerivedRates rates;
};

Generator uncoupled_generator(const DerivedRates& r);
Generator coupled_generator(const DerivedRates& r);
/// Dispatches on r.kind.
Generator build_generator(const DerivedRates& r);

std::array<double, kStateCount> rhs(const Generator& g, const PopulationState& rho);

/// Stationary populations of `g`. Throws DegenerateKernel when the kernel is
/// not one-dimensional (e.g. a disconnected dark state).
PopulationState steady_state(const Generator& g);

Trajectory integrate(const Generator& g, const PopulationState& rho0, double t0, double t_end,
                     std::span<const double> checkpoints, const SolverConfig& cfg = {});

}  // namespace qdpc
