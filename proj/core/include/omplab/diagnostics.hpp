#pragma once

#include <cstddef>
#include <vector>

#include "omplab/dense.hpp"
#include "omplab/omp.hpp"
#include "omplab/sensing.hpp"

namespace omplab {

/// Correlation gap of the greedy step for a candidate support `omega` and
/// already-selected S inside it. lhs > rhs means the next pick lands in omega.
/// Throws ValidationError unless S is a subset of omega, omega is a proper
/// subset of the column range, and omega \ S is non-empty.
SelectionMargin selection_margin(const Matrix& a, std::span<const double> residual,
                                 const IndexSet& omega, const IndexSet& s);

/// Per-iteration residual checks along a correct OMP trace:
///   k <  |Omega|:  ||r^k|| >= sqrt(1 - delta) * min|x_i| - eps   (lower bound)
///   k == |Omega|:  ||r^k|| <= eps                               (upper bound)
/// both with 1e-9 slack.
struct ResidualBoundEntry {
  std::size_t k = 0;
  double residual_norm = 0.0;
  double bound = 0.0;
  bool is_upper = false;
  bool holds = false;

  double margin() const noexcept { return is_upper ? bound - residual_norm : residual_norm - bound; }
};

struct ResidualBoundReport {
  std::vector<ResidualBoundEntry> entries;
  bool complete = false;  // trace reached |Omega| iterations
  bool all_hold = false;
};

/// Throws ValidationError when the trace selects an index outside supp(x).
ResidualBoundReport residual_bound_probe(const ProblemInstance& instance, const OmpResult& trace,
                                         double delta_k1, double epsilon);

}  // namespace omplab
