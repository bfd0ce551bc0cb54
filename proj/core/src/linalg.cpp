#include "omplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "omplab/error.hpp"

namespace omplab {

Matrix submatrix_columns(const Matrix& a, const IndexSet& s) {
  IndexSet sorted = s;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] >= a.cols()) {
      throw IndexError("column index " + std::to_string(sorted[k]) + " out of range [0, " +
                       std::to_string(a.cols()) + ")");
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw ValidationError("duplicate column index " + std::to_string(sorted[k]));
    }
  }
  if (sorted.empty()) return Matrix{};
  Matrix out(a.rows(), sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto src = a.col(sorted[k]);
    std::copy(src.begin(), src.end(), out.col(k).begin());
  }
  return out;
}

IncrementalQr::IncrementalQr(std::size_t rows, double rank_tolerance)
    : rows_(rows), rank_tol_(rank_tolerance) {}

void IncrementalQr::apply_reflectors(std::span<double> z, std::size_t count) const {
  for (std::size_t k = 0; k < count; ++k) {
    const Vector& v = v_[k];
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * z[k + i];
    s *= beta_[k];
    for (std::size_t i = 0; i < v.size(); ++i) z[k + i] -= s * v[i];
  }
}

void IncrementalQr::append(std::span<const double> column) {
  if (column.size() != rows_) throw ValidationError("IncrementalQr::append: dimension mismatch");
  const std::size_t k = size();
  if (k >= rows_) {
    throw SingularSystemError(k, "QR: column " + std::to_string(k) +
                                     " exceeds the row count; system is rank deficient");
  }
  Vector z(column.begin(), column.end());
  apply_reflectors(z, k);

  std::span<const double> tail(z.data() + k, rows_ - k);
  const double xnorm = norm2(tail);
  const double alpha = (tail[0] >= 0.0) ? -xnorm : xnorm;

  // Rank test over the extended diagonal.
  double max_diag = std::abs(alpha);
  double min_diag = std::abs(alpha);
  std::size_t min_at = k;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = std::abs(r_[j][j]);
    max_diag = std::max(max_diag, d);
    if (d < min_diag) {
      min_diag = d;
      min_at = j;
    }
  }
  if (!(min_diag > rank_tol_ * max_diag)) {
    throw SingularSystemError(min_at, "QR: diagonal " + std::to_string(min_at) +
                                          " below rank tolerance; system is rank deficient");
  }

  Vector v(tail.begin(), tail.end());
  v[0] -= alpha;
  const double vtv = dot(v, v);

  Vector rcol(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k));
  rcol.push_back(alpha);

  v_.push_back(std::move(v));
  beta_.push_back(vtv > 0.0 ? 2.0 / vtv : 0.0);
  r_.push_back(std::move(rcol));
}

Vector IncrementalQr::solve(std::span<const double> y) const {
  if (y.size() != rows_) throw ValidationError("least squares: dimension mismatch");
  Vector z(y.begin(), y.end());
  const std::size_t n = size();
  apply_reflectors(z, n);
  Vector x(n, 0.0);
  for (std::size_t jj = n; jj-- > 0;) {
    double s = z[jj];
    for (std::size_t c = jj + 1; c < n; ++c) s -= r_[c][jj] * x[c];
    x[jj] = s / r_[jj][jj];
  }
  return x;
}

Vector IncrementalQr::r_diagonal() const {
  Vector d(size());
  for (std::size_t j = 0; j < size(); ++j) d[j] = r_[j][j];
  return d;
}

Vector least_squares(const Matrix& a_s, std::span<const double> y, double rank_tolerance) {
  if (a_s.empty()) return {};
  if (a_s.rows() != y.size()) throw ValidationError("least squares: dimension mismatch");
  IncrementalQr qr(a_s.rows(), rank_tolerance);
  for (std::size_t j = 0; j < a_s.cols(); ++j) qr.append(a_s.col(j));
  return qr.solve(y);
}

Vector projection_residual(const Matrix& a_s, std::span<const double> y, double rank_tolerance) {
  if (a_s.empty()) return Vector(y.begin(), y.end());
  const Vector coef = least_squares(a_s, y, rank_tolerance);
  return subtract(y, multiply(a_s, coef));
}

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kOffDiagonalStop = 1e-12;
constexpr std::size_t kMaxSweeps = 100;

void require_symmetric(const Matrix& g) {
  if (g.rows() != g.cols()) throw ValidationError("eigen: matrix is not square");
  g.require_finite();
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(g(i, j) - g(j, i)) > kSymmetryTolerance) {
        throw ValidationError("eigen: matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
}

}  // namespace

namespace detail {

std::size_t jacobi_in_place(std::span<double> a, std::size_t n, std::span<double> vectors) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[j * n + i]; };
  const bool want_vectors = !vectors.empty();
  if (want_vectors) {
    std::fill(vectors.begin(), vectors.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;
  }

  double frob2 = 0.0;
  for (double x : a) frob2 += x * x;
  const double stop =
      std::max(kOffDiagonalStop, 8.0 * std::numeric_limits<double>::epsilon() * std::sqrt(frob2));

  std::size_t sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off2 = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) off2 += 2.0 * at(i, j) * at(i, j);
    if (std::sqrt(off2) < stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;

        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = vectors[p * n + k];
            const double vkq = vectors[q * n + k];
            vectors[p * n + k] = c * vkp - s * vkq;
            vectors[q * n + k] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  return sweep;
}

}  // namespace detail

EigExtremes sym_eig_extremes(const Matrix& g) {
  require_symmetric(g);
  const std::size_t n = g.rows();
  std::vector<double> work(g.data().begin(), g.data().end());
  const std::size_t sweeps = detail::jacobi_in_place(work, n, {});
  EigExtremes out;
  out.lambda_min = std::numeric_limits<double>::infinity();
  out.lambda_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out.lambda_min = std::min(out.lambda_min, work[i * n + i]);
    out.lambda_max = std::max(out.lambda_max, work[i * n + i]);
  }
  out.iterations_used = sweeps;
  return out;
}

SymEigen sym_eigen(const Matrix& g) {
  require_symmetric(g);
  const std::size_t n = g.rows();
  std::vector<double> work(g.data().begin(), g.data().end());
  std::vector<double> vecs(n * n);
  const std::size_t sweeps = detail::jacobi_in_place(work, n, vecs);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return work[a * n + a] < work[b * n + b];
  });

  SymEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  out.sweeps = sweeps;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = work[src * n + src];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vecs[src * n + i];
  }
  return out;
}

}  // namespace omplab
