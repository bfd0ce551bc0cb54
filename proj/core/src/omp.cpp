#include "omplab/omp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "omplab/error.hpp"

namespace omplab {

const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::rule_met: return "rule_met";
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::rank_failure: return "rank_failure";
  }
  return "unknown";
}

namespace {

bool contains(const IndexSet& sorted, std::size_t i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

}  // namespace

OmpResult omp_run(const Matrix& a, std::span<const double> y, const StopRule& rule,
                  const OmpOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != m) {
    throw ValidationError("omp_run: measurement length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(m) + " rows");
  }
  require_finite(y, "measurement");
  const std::size_t budget = std::min(m, n);
  if (rule.kind == StopRule::Kind::max_iterations) {
    if (rule.iterations < 1 || rule.iterations > budget) {
      throw ValidationError("omp_run: max_iterations must lie in [1, min(m, n)] = [1, " +
                            std::to_string(budget) + "]");
    }
  } else if (!(rule.epsilon >= 0.0) || !std::isfinite(rule.epsilon)) {
    throw ValidationError("omp_run: residual bound must be finite and non-negative");
  }

  IndexSet truth;
  if (options.ground_truth) {
    truth = *options.ground_truth;
    std::sort(truth.begin(), truth.end());
  }

  const double y_norm = norm2(y);
  const double stop_at = rule.epsilon + rule.relative_slack * y_norm;
  auto residual_rule_met = [&](double rn) {
    return rule.kind == StopRule::Kind::residual_at_most && rn <= stop_at;
  };

  OmpResult out;
  out.residual.assign(y.begin(), y.end());
  Vector coef;

  if (residual_rule_met(y_norm)) {
    out.stopped_by = StopReason::rule_met;
    out.estimate = SparseSignal(n, {}, {});
    return out;
  }

  IncrementalQr qr(m, options.rank_tolerance);
  std::vector<char> selected(n, 0);
  IndexSet sorted_sel;

  for (std::size_t k = 1;; ++k) {
    const Vector corr = multiply_transpose(a, out.residual);

    std::size_t best = n;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (selected[i]) continue;
      const double c = std::abs(corr[i]);
      if (c > best_abs) {
        best_abs = c;
        best = i;
      }
    }

    OmpIterationRecord rec;
    rec.k = k;
    rec.selected_index = best;
    rec.correlation = best_abs;
    if (options.ground_truth) {
      rec.in_true_support = contains(truth, best);
      if (std::includes(truth.begin(), truth.end(), sorted_sel.begin(), sorted_sel.end()) &&
          sorted_sel.size() < truth.size() && truth.size() < n) {
        SelectionMargin mg;
        for (std::size_t i = 0; i < n; ++i) {
          const double c = std::abs(corr[i]);
          if (contains(truth, i)) {
            if (!contains(sorted_sel, i)) mg.lhs = std::max(mg.lhs, c);
          } else {
            mg.rhs = std::max(mg.rhs, c);
          }
        }
        rec.margin = mg;
      }
    }

    try {
      qr.append(a.col(best));
    } catch (const SingularSystemError&) {
      out.stopped_by = StopReason::rank_failure;
      break;
    }
    selected[best] = 1;
    out.selection_order.push_back(best);
    sorted_sel.insert(std::upper_bound(sorted_sel.begin(), sorted_sel.end(), best), best);

    coef = qr.solve(y);
    out.residual.assign(y.begin(), y.end());
    for (std::size_t j = 0; j < coef.size(); ++j) {
      const auto col = a.col(out.selection_order[j]);
      for (std::size_t i = 0; i < m; ++i) out.residual[i] -= col[i] * coef[j];
    }
    rec.residual_norm = norm2(out.residual);
    out.trace.push_back(rec);

    if (rule.kind == StopRule::Kind::max_iterations ? k == rule.iterations
                                                    : residual_rule_met(rec.residual_norm)) {
      out.stopped_by = StopReason::rule_met;
      break;
    }
    if (k == budget) {
      out.stopped_by = StopReason::budget_exhausted;
      break;
    }
  }

  // Estimate on the final support, indices ascending.
  out.recovered_support = sorted_sel;
  IndexSet est_support;
  Vector est_values;
  for (std::size_t idx : sorted_sel) {
    const auto pos = std::find(out.selection_order.begin(), out.selection_order.end(), idx) -
                     out.selection_order.begin();
    const double v = coef[static_cast<std::size_t>(pos)];
    if (v != 0.0) {
      est_support.push_back(idx);
      est_values.push_back(v);
    }
  }
  out.estimate = SparseSignal(n, std::move(est_support), std::move(est_values));
  return out;
}

}  // namespace omplab
