#pragma once

#include <span>

#include "qdpc/numerics/linalg.hpp"

namespace qdpc {

/// exp(A) by scaling and squaring with the degree-13 Pade approximant,
/// evaluated in quadruple precision and rounded once.
Matrix expm(const Matrix& a);

/// exp(A t) rho0.
Vector matrix_exponential_apply(const Matrix& a, double t, std::span<const double> rho0);

}  // namespace qdpc
