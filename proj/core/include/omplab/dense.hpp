#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace omplab {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

/// Dense real matrix stored column-major.
///
/// Column-major because almost every consumer walks whole columns: the OMP
/// correlation step, submatrix extraction, Gram assembly and QR updates.
class Matrix {
 public:
  Matrix() = default;

  /// Zero-filled rows x cols matrix. Both dimensions must be positive.
  Matrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of column-major entries. Throws ValidationError if the
  /// size does not match or any entry is not finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }

  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }

  std::span<const double> data() const noexcept { return data_; }

  /// Throws ValidationError when an entry is NaN or infinite.
  void require_finite() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

/// A * x
Vector multiply(const Matrix& a, std::span<const double> x);
/// A^T * v
Vector multiply_transpose(const Matrix& a, std::span<const double> v);
/// A^T * A, exactly symmetric.
Matrix gram(const Matrix& a);
Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);

Vector subtract(std::span<const double> a, std::span<const double> b);

/// Throws ValidationError when any entry is NaN or infinite.
void require_finite(std::span<const double> v, const char* what);

}  // namespace omplab
