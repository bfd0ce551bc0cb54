#pragma once

#include <cstddef>
#include <cstdint>

#include "omplab/dense.hpp"
#include "omplab/linalg.hpp"

namespace omplab {

inline constexpr std::uint64_t kDefaultRicBudget = 2'000'000;

/// Exact restricted isometry constant of one order.
struct RicReport {
  std::size_t order = 0;
  double delta = 0.0;
  IndexSet witness_subset;      // attains delta; lexicographically smallest among ties
  EigExtremes witness_lambda;   // extremes of A_S^T A_S on the witness
  std::uint64_t subsets_examined = 0;
};

struct RicOptions {
  std::uint64_t budget = kDefaultRicBudget;  // maximum number of K-subsets to enumerate
  unsigned parallelism = 1;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// delta_K = max over |S| = K of max(lambda_max(A_S^T A_S) - 1, 1 - lambda_min(A_S^T A_S)).
///
/// Enumerates every K-subset in lexicographic order. The K x K Gram block is
/// maintained incrementally from a precomputed A^T A: when the combination
/// advances only the trailing rows and columns that changed are rewritten.
/// With parallelism > 1 the first index is split into contiguous ranges and
/// the partial maxima are merged in range order, so the witness is identical
/// for every thread count.
///
/// Throws CapacityError when C(n, K) exceeds the budget and ValidationError
/// when K is outside [1, n].
RicReport exact_ric(const Matrix& a, std::size_t k, const RicOptions& options = {});

}  // namespace omplab
