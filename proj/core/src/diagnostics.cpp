#include "omplab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "omplab/error.hpp"

namespace omplab {

SelectionMargin selection_margin(const Matrix& a, std::span<const double> residual,
                                 const IndexSet& omega, const IndexSet& s) {
  if (residual.size() != a.rows()) throw ValidationError("selection_margin: dimension mismatch");
  IndexSet om = omega;
  IndexSet ss = s;
  std::sort(om.begin(), om.end());
  std::sort(ss.begin(), ss.end());
  if (!om.empty() && om.back() >= a.cols()) throw IndexError("selection_margin: omega index out of range");
  if (om.size() >= a.cols()) throw ValidationError("selection_margin: omega must be a proper subset");
  if (!std::includes(om.begin(), om.end(), ss.begin(), ss.end())) {
    throw ValidationError("selection_margin: S must be a subset of omega");
  }
  if (std::adjacent_find(om.begin(), om.end()) != om.end()) {
    throw ValidationError("selection_margin: omega has duplicates");
  }
  SelectionMargin out;
  bool any_candidate = false;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    const double c = std::abs(dot(a.col(i), residual));
    if (std::binary_search(om.begin(), om.end(), i)) {
      if (!std::binary_search(ss.begin(), ss.end(), i)) {
        out.lhs = std::max(out.lhs, c);
        any_candidate = true;
      }
    } else {
      out.rhs = std::max(out.rhs, c);
    }
  }
  if (!any_candidate) throw ValidationError("selection_margin: omega \\ S is empty");
  return out;
}

ResidualBoundReport residual_bound_probe(const ProblemInstance& instance, const OmpResult& trace,
                                         double delta_k1, double epsilon) {
  if (!(delta_k1 >= 0.0 && delta_k1 < 1.0)) {
    throw ValidationError("residual_bound_probe: delta must lie in [0, 1)");
  }
  if (!(epsilon >= 0.0)) throw ValidationError("residual_bound_probe: epsilon must be >= 0");
  const IndexSet& omega = instance.signal.support();
  for (const auto& rec : trace.trace) {
    if (!std::binary_search(omega.begin(), omega.end(), rec.selected_index)) {
      throw ValidationError("residual_bound_probe: trace selected index " +
                            std::to_string(rec.selected_index) + " outside the true support");
    }
  }
  constexpr double kSlack = 1e-9;
  const std::size_t big_k = omega.size();
  const double lower = std::sqrt(1.0 - delta_k1) * instance.signal.min_magnitude() - epsilon;

  ResidualBoundReport rep;
  rep.all_hold = true;
  for (const auto& rec : trace.trace) {
    ResidualBoundEntry e;
    e.k = rec.k;
    e.residual_norm = rec.residual_norm;
    if (rec.k < big_k) {
      e.bound = lower;
      e.holds = e.residual_norm >= lower - kSlack;
    } else {
      e.is_upper = true;
      e.bound = epsilon;
      e.holds = e.residual_norm <= epsilon + kSlack;
    }
    rep.all_hold = rep.all_hold && e.holds;
    rep.entries.push_back(e);
  }
  rep.complete = trace.trace.size() == big_k;
  rep.all_hold = rep.all_hold && rep.complete;
  return rep;
}

}  // namespace omplab
