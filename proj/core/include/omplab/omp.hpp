#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "omplab/dense.hpp"
#include "omplab/linalg.hpp"
#include "omplab/signal.hpp"

namespace omplab {

/// Slack on the residual stopping test, relative to ||y||_2. A noiseless
/// refit on the true support leaves a residual of rounding size rather than
/// exactly zero; without slack residual_at_most(0) would never fire.
inline constexpr double kDefaultResidualSlack = 1e-12;

struct StopRule {
  enum class Kind { max_iterations, residual_at_most };

  Kind kind = Kind::max_iterations;
  std::size_t iterations = 0;  // max_iterations
  double epsilon = 0.0;        // residual_at_most
  double relative_slack = kDefaultResidualSlack;

  static StopRule max_iterations(std::size_t k) { return {Kind::max_iterations, k, 0.0}; }
  static StopRule residual_at_most(double eps, double relative_slack = kDefaultResidualSlack) {
    return {Kind::residual_at_most, 0, eps, relative_slack};
  }
};

enum class StopReason { rule_met, budget_exhausted, rank_failure };

const char* to_string(StopReason r) noexcept;

struct SelectionMargin {
  double lhs = 0.0;  // max_{i in Omega \ S} |<r, A_i>|
  double rhs = 0.0;  // max_{j not in Omega} |<r, A_j>|
};

struct OmpIterationRecord {
  std::size_t k = 0;
  std::size_t selected_index = 0;
  double correlation = 0.0;    // |<r^{k-1}, A_s>| of the winner
  double residual_norm = 0.0;  // ||r^k||_2
  std::optional<bool> in_true_support;
  // Only when ground truth was supplied and S_{k-1} is inside it.
  std::optional<SelectionMargin> margin;
};

struct OmpResult {
  IndexSet recovered_support;  // ascending
  IndexSet selection_order;    // as selected
  SparseSignal estimate;       // least squares on recovered_support, exact zeros dropped
  std::vector<OmpIterationRecord> trace;
  StopReason stopped_by = StopReason::rule_met;
  Vector residual;             // final r^k

  std::size_t iterations() const noexcept { return trace.size(); }
};

struct OmpOptions {
  // Used only to annotate the trace; selection never looks at it.
  std::optional<IndexSet> ground_truth;
  double rank_tolerance = kDefaultRankTolerance;
};

/// Orthogonal matching pursuit.
///
/// Each iteration correlates the residual with all n columns, picks the
/// largest magnitude (smallest index on ties, already-selected columns
/// excluded), appends the column to an incrementally updated QR factor,
/// refits and recomputes r = y - A_S x_S. residual_at_most(eps) stops once
/// ||r|| <= eps (checked before the first iteration as well); the hard
/// iteration budget is min(m, n). A rank failure ends the run with
/// stopped_by = rank_failure and the trace so far.
OmpResult omp_run(const Matrix& a, std::span<const double> y, const StopRule& rule,
                  const OmpOptions& options = {});

}  // namespace omplab
