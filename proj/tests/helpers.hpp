#pragma once

#include <cmath>
#include <vector>

#include "omplab/dense.hpp"
#include "oracles.hpp"

namespace testing_helpers {

// Gaussian shapes (m, n) at which exact delta_{K+1} < 1/sqrt(K+1) is common.
struct Shape {
  std::size_t m, n;
};
inline Shape guaranteed_shape(std::size_t k) {
  switch (k) {
    case 1: return {20, 24};
    case 2: return {64, 20};
    default: return {128, 20};
  }
}

inline oracle::Columns columns_of(const omplab::Matrix& a) {
  oracle::Columns out(a.cols(), std::vector<double>(a.rows()));
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out[j][i] = a(i, j);
  return out;
}

inline oracle::Dense dense_of(const omplab::Matrix& a) {
  oracle::Dense d(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d(i, j) = a(i, j);
  return d;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace testing_helpers
