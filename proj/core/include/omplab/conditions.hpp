#pragma once

#include <cstddef>
#include <optional>

#include "omplab/dense.hpp"
#include "omplab/ric.hpp"
#include "omplab/signal.hpp"

namespace omplab {

/// 1 / sqrt(K + 1): OMP recovers every K-sparse support when
/// delta_{K+1} is strictly below this value (and min |x_i| clears
/// min_magnitude_bound under noise). Throws ValidationError for K < 1.
double sharp_ric_bound(std::size_t k);

/// 2 eps / (1 - sqrt(K + 1) delta_{K+1}).
/// Throws DomainError when delta_k1 is outside [0, 1/sqrt(K+1)).
double min_magnitude_bound(double delta_k1, std::size_t k, double epsilon);

struct ConditionVerdict {
  std::size_t sparsity = 0;     // K = |supp(x)|
  double delta_k1 = 0.0;        // exact delta_{K+1}
  bool ric_ok = false;
  double ric_bound = 0.0;
  bool min_mag_ok = false;
  double min_mag_bound = 0.0;   // +infinity when ric_ok is false
  bool min_mag_bound_defined = false;
  double min_magnitude = 0.0;
  bool overall = false;
};

/// Both strict inequalities, evaluated with zero tolerance.
ConditionVerdict evaluate_conditions(double delta_k1, std::size_t k, double min_magnitude,
                                     double epsilon);

/// Computes delta_{K+1} with exact_ric (K = |supp(x)|) and evaluates both
/// conditions. Propagates CapacityError from exact_ric.
ConditionVerdict check_theorem1_conditions(const Matrix& a, const SparseSignal& x, double epsilon,
                                           const RicOptions& ric = {});

struct Lemma1Check {
  double lhs = 0.0;
  double rhs = 0.0;
  double delta = 0.0;  // delta_{|Omega|+1} used for rhs
  bool holds = false;

  double margin() const noexcept { return lhs - rhs; }
};

/// Evaluates both sides of the correlation-gap inequality for S a proper
/// subset of Omega = supp(x):
///   lhs = ||A_R^T P_S^perp A_R x_R||_inf - ||A_{Omega^c}^T P_S^perp A_R x_R||_inf
///   rhs = (1 - sqrt(|R|+1) delta) ||x_R||_2 / sqrt(|R|),   R = Omega \ S
/// `delta` is delta_{|Omega|+1}; when absent it is computed exactly.
/// holds means lhs >= rhs - 1e-10.
Lemma1Check verify_lemma1(const Matrix& a, const SparseSignal& x, const IndexSet& s,
                          std::optional<double> delta = std::nullopt, const RicOptions& ric = {});

/// Side-by-side numbers for the sharp bounds and the earlier
/// delta_{K+1} < (sqrt(4K+1) - 1) / (2K) condition of Chang and Wu, which
/// carries the min-magnitude requirement
///   (sqrt(1+d) + 1) eps / (1 - d - sqrt(1-d) sqrt(K) d).
/// Undefined bounds (non-positive denominators) are reported as +infinity.
struct ComparisonReport {
  std::size_t k = 0;
  double delta = 0.0;
  double epsilon = 0.0;

  double prior_ric_bound = 0.0;
  double sharp_ric_bound = 0.0;
  double prior_min_mag = 0.0;
  bool prior_min_mag_defined = false;
  double sharp_min_mag = 0.0;
  bool sharp_min_mag_defined = false;

  bool ric_bound_weaker = false;         // prior_ric_bound < sharp_ric_bound
  bool min_mag_weaker_or_equal = false;  // prior_min_mag >= sharp_min_mag
  bool min_mag_strict = false;           // prior_min_mag >  sharp_min_mag
};

ComparisonReport comparison_report(std::size_t k, double delta_k1, double epsilon);

}  // namespace omplab
