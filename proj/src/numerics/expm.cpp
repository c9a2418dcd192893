#include "qdpc/numerics/expm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "qdpc/errors.hpp"

namespace qdpc {

namespace {

// Higham (2005), "The scaling and squaring method for the matrix exponential
// revisited": degree-13 coefficients and the 1-norm bound below which the
// backward error stays under the unit roundoff.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

// Square matrix in quadruple precision. Long propagations of stiff
// generators take ~35 squarings, which double precision cannot absorb.
class WideMatrix {
 public:
  explicit WideMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

  static WideMatrix identity(std::size_t n) {
    WideMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t size() const { return n_; }
  Wide& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  Wide operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  WideMatrix operator*(const WideMatrix& b) const {
    WideMatrix c(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        const Wide aik = (*this)(i, k);
        for (std::size_t j = 0; j < n_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  WideMatrix& add(const WideMatrix& b, Wide scale) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += scale * b.data_[k];
    return *this;
  }

  // Solves this * X = b by Gaussian elimination with partial pivoting.
  WideMatrix solve(WideMatrix b) const {
    WideMatrix a = *this;
    const auto mag = [](Wide v) { return v < 0 ? -v : v; };
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t pivot = c;
      for (std::size_t r = c + 1; r < n_; ++r) {
        if (mag(a(r, c)) > mag(a(pivot, c))) pivot = r;
      }
      if (a(pivot, c) == 0) throw SingularMatrix("expm: singular Pade denominator");
      for (std::size_t k = 0; k < n_; ++k) {
        std::swap(a(c, k), a(pivot, k));
        std::swap(b(c, k), b(pivot, k));
      }
      for (std::size_t r = c + 1; r < n_; ++r) {
        const Wide f = a(r, c) / a(c, c);
        if (f == 0) continue;
        for (std::size_t k = c; k < n_; ++k) a(r, k) -= f * a(c, k);
        for (std::size_t k = 0; k < n_; ++k) b(r, k) -= f * b(c, k);
      }
    }
    for (std::size_t c = n_; c-- > 0;) {
      for (std::size_t k = 0; k < n_; ++k) {
        Wide acc = b(c, k);
        for (std::size_t j = c + 1; j < n_; ++j) acc -= a(c, j) * b(j, k);
        b(c, k) = acc / a(c, c);
      }
    }
    return b;
  }

 private:
  std::size_t n_;
  std::vector<Wide> data_;
};

// exp(a * t). The product of two doubles is exact in quadruple precision, so
// column sums of a conservative generator stay zero through the scaling.
Matrix expm_scaled(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw DomainError("expm needs a square matrix");
  const std::size_t n = a.rows();
  const auto& b = kPade13;

  const double norm = norm_1(a) * std::abs(t);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));

  WideMatrix scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = static_cast<Wide>(a(i, j)) * static_cast<Wide>(std::ldexp(t, -squarings));
  }
  const WideMatrix ident = WideMatrix::identity(n);
  const WideMatrix a2 = scaled * scaled;
  const WideMatrix a4 = a2 * a2;
  const WideMatrix a6 = a4 * a2;

  WideMatrix u_high(n);
  u_high.add(a6, b[13]).add(a4, b[11]).add(a2, b[9]);
  WideMatrix u_inner = a6 * u_high;
  u_inner.add(a6, b[7]).add(a4, b[5]).add(a2, b[3]).add(ident, b[1]);
  const WideMatrix u = scaled * u_inner;

  WideMatrix v_high(n);
  v_high.add(a6, b[12]).add(a4, b[10]).add(a2, b[8]);
  WideMatrix v = a6 * v_high;
  v.add(a6, b[6]).add(a4, b[4]).add(a2, b[2]).add(ident, b[0]);

  // Carry E = exp(A / 2^s) - I through the squarings, (I + E)^2 = I + 2E + E^2,
  // so rates far below the largest one are not rounded away against the identity.
  WideMatrix denominator = v;
  denominator.add(u, -1);
  WideMatrix e = denominator.solve(u);
  WideMatrix twice(n);
  twice.add(e, 2);
  e = std::move(twice);
  for (int k = 0; k < squarings; ++k) {
    WideMatrix next = e * e;
    next.add(e, 2);
    e = std::move(next);
  }
  e.add(ident, 1);

  Matrix result(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) result(i, j) = static_cast<double>(e(i, j));
  }
  return result;
}

}  // namespace

Matrix expm(const Matrix& a) { return expm_scaled(a, 1.0); }

Vector matrix_exponential_apply(const Matrix& a, double t, std::span<const double> rho0) {
  if (t == 0.0) return Vector(rho0.begin(), rho0.end());
  return expm_scaled(a, t) * rho0;
}

}  // namespace qdpc
