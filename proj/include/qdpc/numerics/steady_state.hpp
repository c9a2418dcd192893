#pragma once

#include <cstddef>

#include "qdpc/numerics/linalg.hpp"

namespace qdpc {

/// Number of closed communicating classes of the Markov generator `a`
/// (off-diagonal a(i, j) > 0 is a transition j -> i). The stationary
/// distribution is unique iff this is 1.
std::size_t closed_class_count(const Matrix& a);

/// Probability vector p with A p = 0. One balance row is replaced by the
/// normalization sum(p) = 1; the solution gets one step of iterative
/// refinement with an extended-precision residual. Tiny negative
/// components are clamped and the result renormalized.
///
/// Throws DegenerateKernel when the kernel of `a` is not one-dimensional.
Vector stationary_distribution(const Matrix& a);

}  // namespace qdpc
