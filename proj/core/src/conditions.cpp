#include "omplab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "omplab/error.hpp"
#include "omplab/linalg.hpp"

namespace omplab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double sharp_ric_bound(std::size_t k) {
  if (k < 1) throw ValidationError("sharp_ric_bound: K must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(k + 1));
}

double min_magnitude_bound(double delta_k1, std::size_t k, double epsilon) {
  if (k < 1) throw ValidationError("min_magnitude_bound: K must be >= 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("min_magnitude_bound: epsilon must be finite and non-negative");
  }
  const double denom = 1.0 - std::sqrt(static_cast<double>(k + 1)) * delta_k1;
  if (!(delta_k1 >= 0.0) || !(delta_k1 < sharp_ric_bound(k)) || !(denom > 0.0)) {
    throw DomainError("min_magnitude_bound: delta_{K+1} = " + std::to_string(delta_k1) +
                      " is outside [0, 1/sqrt(K+1))");
  }
  return 2.0 * epsilon / denom;
}

ConditionVerdict evaluate_conditions(double delta_k1, std::size_t k, double min_magnitude,
                                     double epsilon) {
  ConditionVerdict v;
  v.sparsity = k;
  v.delta_k1 = delta_k1;
  v.ric_bound = sharp_ric_bound(k);
  v.ric_ok = delta_k1 < v.ric_bound && 1.0 - std::sqrt(static_cast<double>(k + 1)) * delta_k1 > 0.0;
  v.min_magnitude = min_magnitude;
  if (v.ric_ok) {
    v.min_mag_bound = min_magnitude_bound(delta_k1, k, epsilon);
    v.min_mag_bound_defined = true;
    v.min_mag_ok = min_magnitude > v.min_mag_bound;
  } else {
    v.min_mag_bound = kInf;
    v.min_mag_bound_defined = false;
    v.min_mag_ok = false;
  }
  v.overall = v.ric_ok && v.min_mag_ok;
  return v;
}

ConditionVerdict check_theorem1_conditions(const Matrix& a, const SparseSignal& x, double epsilon,
                                           const RicOptions& ric) {
  if (a.cols() != x.dimension()) {
    throw ValidationError("check_theorem1_conditions: matrix columns and signal dimension differ");
  }
  const std::size_t k = x.sparsity();
  if (k < 1) throw ValidationError("check_theorem1_conditions: signal has empty support");
  if (k + 1 > a.cols()) {
    throw ValidationError("check_theorem1_conditions: need |supp(x)| + 1 <= n");
  }
  if (!(epsilon >= 0.0)) throw ValidationError("check_theorem1_conditions: epsilon must be >= 0");
  const RicReport r = exact_ric(a, k + 1, ric);
  return evaluate_conditions(r.delta, k, x.min_magnitude(), epsilon);
}

Lemma1Check verify_lemma1(const Matrix& a, const SparseSignal& x, const IndexSet& s,
                          std::optional<double> delta, const RicOptions& ric) {
  if (a.cols() != x.dimension()) {
    throw ValidationError("verify_lemma1: matrix columns and signal dimension differ");
  }
  const IndexSet& omega = x.support();
  IndexSet sorted_s = s;
  std::sort(sorted_s.begin(), sorted_s.end());
  if (std::adjacent_find(sorted_s.begin(), sorted_s.end()) != sorted_s.end()) {
    throw ValidationError("verify_lemma1: S has duplicate indices");
  }
  if (!std::includes(omega.begin(), omega.end(), sorted_s.begin(), sorted_s.end())) {
    throw ValidationError("verify_lemma1: S must be a subset of supp(x)");
  }
  if (sorted_s.size() >= omega.size()) {
    throw ValidationError("verify_lemma1: need |S| < |supp(x)|");
  }

  double d;
  if (delta) {
    d = *delta;
  } else {
    if (omega.size() + 1 > a.cols()) {
      throw ValidationError("verify_lemma1: delta_{|Omega|+1} undefined for n = |Omega|; pass it explicitly");
    }
    d = exact_ric(a, omega.size() + 1, ric).delta;
  }
  if (!(d >= 0.0 && d < 1.0)) {
    throw ValidationError("verify_lemma1: requires RIP with 0 <= delta < 1, got " + std::to_string(d));
  }

  IndexSet rest;  // Omega \ S
  Vector x_rest;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (!std::binary_search(sorted_s.begin(), sorted_s.end(), omega[k])) {
      rest.push_back(omega[k]);
      x_rest.push_back(x.values()[k]);
    }
  }

  const Matrix a_rest = submatrix_columns(a, rest);
  const Vector w = projection_residual(submatrix_columns(a, sorted_s), multiply(a_rest, x_rest));

  double in_max = 0.0;
  for (std::size_t idx : rest) in_max = std::max(in_max, std::abs(dot(a.col(idx), w)));
  double out_max = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (std::binary_search(omega.begin(), omega.end(), j)) continue;
    out_max = std::max(out_max, std::abs(dot(a.col(j), w)));
  }

  const double r = static_cast<double>(rest.size());
  Lemma1Check out;
  out.delta = d;
  out.lhs = in_max - out_max;
  out.rhs = (1.0 - std::sqrt(r + 1.0) * d) * norm2(x_rest) / std::sqrt(r);
  out.holds = out.lhs >= out.rhs - 1e-10;
  return out;
}

ComparisonReport comparison_report(std::size_t k, double delta_k1, double epsilon) {
  if (k < 1) throw ValidationError("comparison_report: K must be >= 1");
  if (!(delta_k1 >= 0.0 && delta_k1 < 1.0)) {
    throw ValidationError("comparison_report: delta must lie in [0, 1)");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("comparison_report: epsilon must be finite and non-negative");
  }
  const double kd = static_cast<double>(k);
  const double d = delta_k1;

  ComparisonReport r;
  r.k = k;
  r.delta = d;
  r.epsilon = epsilon;
  r.prior_ric_bound = (std::sqrt(4.0 * kd + 1.0) - 1.0) / (2.0 * kd);
  r.sharp_ric_bound = sharp_ric_bound(k);

  const double prior_denom = 1.0 - d - std::sqrt(1.0 - d) * std::sqrt(kd) * d;
  r.prior_min_mag_defined = prior_denom > 0.0;
  r.prior_min_mag =
      r.prior_min_mag_defined ? (std::sqrt(1.0 + d) + 1.0) * epsilon / prior_denom : kInf;

  const double sharp_denom = 1.0 - std::sqrt(kd + 1.0) * d;
  r.sharp_min_mag_defined = d < r.sharp_ric_bound && sharp_denom > 0.0;
  r.sharp_min_mag = r.sharp_min_mag_defined ? 2.0 * epsilon / sharp_denom : kInf;

  r.ric_bound_weaker = r.prior_ric_bound < r.sharp_ric_bound;
  r.min_mag_weaker_or_equal = r.prior_min_mag >= r.sharp_min_mag;
  r.min_mag_strict = r.prior_min_mag > r.sharp_min_mag;
  return r;
}

}  // namespace omplab
