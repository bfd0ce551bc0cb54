#include "omplab/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "omplab/error.hpp"

namespace omplab {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw ValidationError("matrix dimensions must be positive");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  if (rows == 0 || cols == 0) {
    throw ValidationError("matrix dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    throw ValidationError("matrix expects " + std::to_string(rows * cols) + " entries, got " +
                          std::to_string(data_.size()));
  }
  require_finite();
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  m.require_finite();
  return m;
}

void Matrix::require_finite() const { omplab::require_finite(data_, "matrix"); }

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw ValidationError(std::string(what) + " entry " + std::to_string(i) + " is not finite");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation; avoids overflow for the occasional huge measurement.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw ValidationError("multiply: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    const auto c = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += c[i] * xj;
  }
  return y;
}

Vector multiply_transpose(const Matrix& a, std::span<const double> v) {
  if (v.size() != a.rows()) throw ValidationError("multiply_transpose: dimension mismatch");
  Vector out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out[j] = dot(a.col(j), v);
  return out;
}

Matrix gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const double v = dot(a.col(i), a.col(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("multiply: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
    }
  }
  return c;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("subtract: dimension mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace omplab
