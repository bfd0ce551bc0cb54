#pragma once

#include <cstddef>
#include <vector>

#include "omplab/dense.hpp"

namespace omplab {

/// K-sparse vector: strictly increasing support with nonzero finite values.
class SparseSignal {
 public:
  SparseSignal() = default;

  /// Throws ValidationError unless the support is strictly increasing, every
  /// index is below `dimension`, and every value is finite and nonzero.
  SparseSignal(std::size_t dimension, IndexSet support, Vector values);

  /// Nonzero entries of `dense`. Exact zeros are dropped.
  static SparseSignal from_dense(std::span<const double> dense);

  std::size_t dimension() const noexcept { return n_; }
  std::size_t sparsity() const noexcept { return support_.size(); }
  const IndexSet& support() const noexcept { return support_; }
  const Vector& values() const noexcept { return values_; }

  /// min |x_i| over the support; +infinity for the zero signal.
  double min_magnitude() const noexcept;

  Vector dense() const;

  bool operator==(const SparseSignal&) const = default;

 private:
  std::size_t n_ = 0;
  IndexSet support_;
  Vector values_;
};

}  // namespace omplab
