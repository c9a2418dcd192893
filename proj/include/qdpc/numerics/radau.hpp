#pragma once

// Three-stage Radau IIA (order 5) for linear constant-coefficient systems
// y' = A y, with the embedded error estimator and step-size controller of
// Hairer & Wanner's RADAU5.

#include <limits>
#include <span>
#include <vector>

#include "qdpc/numerics/linalg.hpp"

namespace qdpc {

struct SolverConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();  // ns
  double newton_tol = 1e-12;
  int max_newton_iters = 10;
  /// First trial step; 0 picks one from the generator norm.
  double initial_step = 0.0;
  long max_steps = 1'000'000;

  bool operator==(const SolverConfig&) const = default;
};

/// Throws InvalidParams when a tolerance or limit is not positive.
void validate(const SolverConfig& cfg);

struct SolverStats {
  long steps = 0;
  long rejected = 0;
  long newton_iterations = 0;
  long factorizations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  SolverStats stats;
};

inline constexpr double kMinStep = 1e-14;  // ns

/// Integrates y' = A y from t0 to t_end. The trajectory holds y(t0), the
/// state at every checkpoint in (t0, t_end], and y(t_end); steps land exactly
/// on each checkpoint.
///
/// Throws StepSizeUnderflow when the controller asks for h < kMinStep and
/// NewtonDivergence when the stage equations fail to converge.
Trajectory integrate(const Matrix& a, std::span<const double> y0, double t0, double t_end,
                     std::span<const double> checkpoints, const SolverConfig& cfg = {});

}  // namespace qdpc
