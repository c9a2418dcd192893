#include "qdpc/numerics/steady_state.hpp"

#include <sstream>
#include <vector>

#include "qdpc/errors.hpp"

namespace qdpc {

std::size_t closed_class_count(const Matrix& a) {
  const std::size_t n = a.rows();
  // reach[i][j]: j is reachable from i.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && a(j, i) > 0.0) reach[i][j] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  // A class is closed when everything reachable from it reaches back.
  std::size_t count = 0;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    bool closed = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j] && !reach[j][i]) closed = false;
      if (reach[i][j] && reach[j][i]) seen[j] = true;
    }
    if (closed) ++count;
  }
  return count;
}

Vector stationary_distribution(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DomainError("stationary_distribution needs a square matrix");
  const std::size_t n = a.rows();
  if (const std::size_t classes = closed_class_count(a); classes != 1) {
    std::ostringstream msg;
    msg << "generator has " << classes << " closed classes; stationary distribution is not unique";
    throw DegenerateKernel(msg.str());
  }

  // Replace the last balance row with the normalization.
  Matrix m = a;
  for (double& v : m.row(n - 1)) v = 1.0;
  Vector rhs(n, 0.0);
  rhs[n - 1] = 1.0;

  const LuFactorization lu(m);
  Vector p = lu.solve(rhs);

  for (int pass = 0; pass < 2; ++pass) {
    const Vector correction = lu.solve(accurate_residual(m, p, rhs));
    for (std::size_t i = 0; i < n; ++i) p[i] += correction[i];
  }

  double total = 0.0;
  for (double& v : p) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace qdpc
