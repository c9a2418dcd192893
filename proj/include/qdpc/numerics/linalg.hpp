#pragma once

// Small dense real matrices. The systems in this project are 5x5 (rate
// generators) and 15x15 (Radau stage systems), so everything is row-major
// std::vector storage without blocking.

#include <cstddef>
#include <span>
#include <vector>

namespace qdpc {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Max absolute row sum.
double norm_inf(const Matrix& a);
/// Max absolute column sum.
double norm_1(const Matrix& a);
double norm_inf(std::span<const double> x);

/// Quadruple precision, used where residuals cancel heavily.
__extension__ typedef __float128 Wide;

/// A x with every product and partial sum carried in quadruple precision.
std::vector<Wide> wide_product(const Matrix& a, std::span<const double> x);

/// b - A x, evaluated in quadruple precision and rounded once.
Vector accurate_residual(const Matrix& a, std::span<const double> x, std::span<const double> b);

/// LU factorization with partial pivoting, PA = LU.
class LuFactorization {
 public:
  /// Throws SingularMatrix when a pivot magnitude falls below kPivotFloor.
  explicit LuFactorization(Matrix a);

  static constexpr double kPivotFloor = 1e-300;

  std::size_t size() const { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

Vector lu_solve(const Matrix& a, std::span<const double> b);

}  // namespace qdpc
