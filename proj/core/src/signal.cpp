#include "omplab/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "omplab/error.hpp"

namespace omplab {

SparseSignal::SparseSignal(std::size_t dimension, IndexSet support, Vector values)
    : n_(dimension), support_(std::move(support)), values_(std::move(values)) {
  if (n_ == 0) throw ValidationError("signal dimension must be positive");
  if (support_.size() != values_.size()) {
    throw ValidationError("signal support and values differ in length");
  }
  if (support_.size() > n_) throw ValidationError("signal support larger than dimension");
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k] >= n_) {
      throw IndexError("signal index " + std::to_string(support_[k]) + " out of range");
    }
    if (k > 0 && support_[k] <= support_[k - 1]) {
      throw ValidationError("signal support must be strictly increasing");
    }
    if (!std::isfinite(values_[k]) || values_[k] == 0.0) {
      throw ValidationError("signal value at index " + std::to_string(support_[k]) +
                            " must be finite and nonzero");
    }
  }
}

SparseSignal SparseSignal::from_dense(std::span<const double> dense) {
  IndexSet s;
  Vector v;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      s.push_back(i);
      v.push_back(dense[i]);
    }
  }
  return SparseSignal(dense.size(), std::move(s), std::move(v));
}

double SparseSignal::min_magnitude() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, std::abs(v));
  return m;
}

Vector SparseSignal::dense() const {
  Vector out(n_, 0.0);
  for (std::size_t k = 0; k < support_.size(); ++k) out[support_[k]] = values_[k];
  return out;
}

}  // namespace omplab
