#pragma once

#include <functional>

namespace qdpc {

struct QuadratureResult {
  double value;
  double error_estimate;
  int intervals;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature over [a, b]. The
/// interval with the largest error estimate is bisected until the total
/// estimate drops below max(abs_tol, rel_tol * |value|).
///
/// Throws QuadratureFailure if `max_intervals` is exhausted first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-10, double abs_tol = 1e-14,
                                    int max_intervals = 4000);

}  // namespace qdpc
