#include "omplab/report_json.hpp"

#include <cmath>

#include "json.hpp"

namespace omplab {

using nlohmann::ordered_json;

namespace {

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

ordered_json trace_json(const OmpResult& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& rec : r.trace) {
    ordered_json j;
    j["k"] = rec.k;
    j["selected_index"] = rec.selected_index;
    j["correlation"] = rec.correlation;
    j["residual_norm"] = rec.residual_norm;
    j["in_true_support"] = rec.in_true_support ? ordered_json(*rec.in_true_support) : ordered_json();
    if (rec.margin) {
      j["margin_lhs"] = rec.margin->lhs;
      j["margin_rhs"] = rec.margin->rhs;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered_json omp_json(const OmpResult& r) {
  ordered_json j;
  j["support"] = r.recovered_support;
  j["selection_order"] = r.selection_order;
  j["iterations"] = r.iterations();
  j["stopped_by"] = to_string(r.stopped_by);
  j["residual_norm"] = norm2(r.residual);
  j["estimate"] = {{"n", r.estimate.dimension()},
                   {"support", r.estimate.support()},
                   {"values", r.estimate.values()}};
  j["trace"] = trace_json(r);
  return j;
}

ordered_json stats_json(const LemmaStats& s) {
  return {{"checks", s.checks}, {"violations", s.violations}, {"min_margin", finite_or_null(s.min_margin)}};
}

}  // namespace

std::string to_json(const RicReport& r) {
  ordered_json j;
  j["order"] = r.order;
  j["delta"] = r.delta;
  j["witness"] = r.witness_subset;
  j["lambda_min"] = r.witness_lambda.lambda_min;
  j["lambda_max"] = r.witness_lambda.lambda_max;
  j["subsets_examined"] = r.subsets_examined;
  return j.dump(2);
}

std::string to_json(const ConditionVerdict& v) {
  ordered_json j;
  j["order"] = v.sparsity + 1;
  j["delta"] = v.delta_k1;
  j["ric_ok"] = v.ric_ok;
  j["ric_bound"] = v.ric_bound;
  j["min_mag_ok"] = v.min_mag_ok;
  j["min_mag_bound"] = finite_or_null(v.min_mag_bound);
  j["min_mag_bound_defined"] = v.min_mag_bound_defined;
  j["min_magnitude"] = v.min_magnitude;
  j["overall"] = v.overall;
  return j.dump(2);
}

std::string to_json(const OmpResult& r) { return omp_json(r).dump(2); }

std::string to_json(const ComparisonReport& r) {
  ordered_json j;
  j["k"] = r.k;
  j["delta"] = r.delta;
  j["epsilon"] = r.epsilon;
  j["prior_ric_bound"] = r.prior_ric_bound;
  j["sharp_ric_bound"] = r.sharp_ric_bound;
  j["prior_min_mag"] = finite_or_null(r.prior_min_mag);
  j["prior_min_mag_defined"] = r.prior_min_mag_defined;
  j["sharp_min_mag"] = finite_or_null(r.sharp_min_mag);
  j["sharp_min_mag_defined"] = r.sharp_min_mag_defined;
  j["ric_bound_weaker"] = r.ric_bound_weaker;
  j["min_mag_weaker_or_equal"] = r.min_mag_weaker_or_equal;
  j["min_mag_strict"] = r.min_mag_strict;
  return j.dump(2);
}

std::string to_json(const LemmaSweepReport& r) {
  ordered_json j;
  j["instances"] = r.instances;
  j["ok"] = r.ok();
  j["correlation_gap"] = stats_json(r.gap);
  j["correlation_gap_skipped"] = r.gap_skipped;
  j["correlation_gap_on_tall_matrix"] = r.gap_on_tall_matrix;
  j["ric_monotonicity"] = stats_json(r.monotonicity);
  j["transpose_bound"] = stats_json(r.transpose_bound);
  j["projection_sandwich"] = stats_json(r.projection_sandwich);
  ordered_json cf = ordered_json::array();
  for (const auto& c : r.closed_form) {
    cf.push_back({{"label", c.label}, {"measured", c.measured}, {"expected", c.expected}, {"ok", c.ok}});
  }
  j["closed_form"] = std::move(cf);
  j["violations"] = r.violations;
  return j.dump(2);
}

std::string to_json(const FailureInstance& fi) {
  ordered_json j;
  j["found"] = true;
  j["k"] = fi.k;
  j["t"] = fi.target_t;
  j["verified_delta"] = fi.verified_delta;
  j["sharp_bound"] = fi.sharp_bound;
  j["signal"] = {{"n", fi.signal.dimension()},
                 {"support", fi.signal.support()},
                 {"values", fi.signal.values()}};
  j["candidates_tried"] = fi.candidates_tried;
  j["omp"] = omp_json(fi.omp_trace);
  return j.dump(2);
}

}  // namespace omplab
