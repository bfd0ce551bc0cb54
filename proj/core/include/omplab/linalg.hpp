#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "omplab/dense.hpp"

namespace omplab {

/// Relative rank tolerance: a QR factor is accepted only while its smallest
/// diagonal magnitude exceeds this fraction of the largest.
inline constexpr double kDefaultRankTolerance = 1e-10;

/// Columns of `a` indexed by `s`, in ascending index order. An empty `s`
/// yields an empty (0x0) matrix. Throws IndexError for an out-of-range index
/// and ValidationError for duplicates.
Matrix submatrix_columns(const Matrix& a, const IndexSet& s);

/// Householder QR that grows one column at a time.
///
/// Appending column k applies the k existing reflectors to it and then forms
/// one new reflector, so building a k-column factor costs the same as a
/// from-scratch factorization while every intermediate prefix stays usable.
class IncrementalQr {
 public:
  explicit IncrementalQr(std::size_t rows, double rank_tolerance = kDefaultRankTolerance);

  /// Throws SingularSystemError (carrying the offending diagonal index) if
  /// the extended factor fails the rank test; the factor is left unchanged.
  void append(std::span<const double> column);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return r_.size(); }

  /// Least-squares coefficients for the columns appended so far.
  Vector solve(std::span<const double> y) const;

  /// Diagonal of R (signed).
  Vector r_diagonal() const;

 private:
  void apply_reflectors(std::span<double> z, std::size_t count) const;

  std::size_t rows_;
  double rank_tol_;
  std::vector<Vector> v_;     // reflector k acts on rows [k, rows)
  std::vector<double> beta_;
  std::vector<Vector> r_;     // column k of R holds k+1 entries
};

/// argmin ||y - a_s x||_2 via Householder QR.
Vector least_squares(const Matrix& a_s, std::span<const double> y,
                     double rank_tolerance = kDefaultRankTolerance);

/// P_perp y = y - a_s * least_squares(a_s, y). An empty a_s returns y.
Vector projection_residual(const Matrix& a_s, std::span<const double> y,
                           double rank_tolerance = kDefaultRankTolerance);

struct EigExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t iterations_used = 0;
};

struct SymEigen {
  Vector values;          // ascending
  Matrix vectors;         // column j pairs with values[j]
  std::size_t sweeps = 0;
};

/// Extreme eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
/// Throws ValidationError for non-square input or asymmetry above 1e-12.
EigExtremes sym_eig_extremes(const Matrix& g);

/// Full eigendecomposition by the same Jacobi iteration.
SymEigen sym_eigen(const Matrix& g);

namespace detail {
// Runs Jacobi on a packed column-major n x n buffer in place; eigenvalues end
// up on the diagonal. `vectors` may be empty. Returns the sweep count.
std::size_t jacobi_in_place(std::span<double> a, std::size_t n, std::span<double> vectors);
}  // namespace detail

}  // namespace omplab
