#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "omplab/conditions.hpp"
#include "omplab/error.hpp"
#include "omplab/linalg.hpp"
#include "omplab/ric.hpp"
#include "omplab/sensing.hpp"

using namespace omplab;

TEST(SharpRicBound, Values) {
  EXPECT_NEAR(sharp_ric_bound(1), 0.70710678118654752, 1e-15);
  EXPECT_EQ(sharp_ric_bound(3), 0.5);
  EXPECT_NEAR(sharp_ric_bound(24), 0.2, 1e-15);
  EXPECT_THROW(sharp_ric_bound(0), ValidationError);
}

TEST(MinMagnitudeBound, Values) {
  EXPECT_EQ(min_magnitude_bound(0.3, 2, 0.0), 0.0);
  EXPECT_EQ(min_magnitude_bound(0.0, 5, 0.5), 1.0);
  EXPECT_NEAR(min_magnitude_bound(0.25, 3, 0.1), 0.4, 1e-15);
}

TEST(MinMagnitudeBound, DomainErrors) {
  EXPECT_THROW(min_magnitude_bound(0.5, 3, 0.1), DomainError);
  EXPECT_THROW(min_magnitude_bound(0.9, 3, 0.1), DomainError);
  EXPECT_THROW(min_magnitude_bound(-0.1, 3, 0.1), ValidationError);
  EXPECT_THROW(min_magnitude_bound(0.1, 3, -1.0), ValidationError);
}

TEST(CheckConditions, IdentityHolds) {
  const ConditionVerdict v = check_theorem1_conditions(Matrix::identity(3), SparseSignal(3, {0}, {1.0}), 0.0);
  EXPECT_EQ(v.delta_k1, 0.0);
  EXPECT_TRUE(v.ric_ok);
  EXPECT_EQ(v.min_mag_bound, 0.0);
  EXPECT_TRUE(v.overall);
}

TEST(CheckConditions, WorkedExampleAboveThreshold) {
  const auto ex = lemma1_example_instance(0.6);
  const ConditionVerdict v = check_theorem1_conditions(ex.matrix, ex.signal, 0.0);
  EXPECT_NEAR(v.delta_k1, 0.6, 1e-10);
  EXPECT_FALSE(v.ric_ok);
  EXPECT_FALSE(v.min_mag_bound_defined);
  EXPECT_TRUE(std::isinf(v.min_mag_bound));
  EXPECT_FALSE(v.overall);
}

TEST(CheckConditions, WorkedExampleWithNoise) {
  const auto ex = lemma1_example_instance(0.5);
  const ConditionVerdict v = check_theorem1_conditions(ex.matrix, ex.signal, 0.05);
  EXPECT_TRUE(v.ric_ok);
  EXPECT_NEAR(v.min_mag_bound, 0.1 / (1.0 - std::sqrt(3.0) * 0.5), 1e-9);
  EXPECT_NEAR(v.min_mag_bound, 0.74641016, 1e-7);
  EXPECT_EQ(v.min_magnitude, 1.0);
  EXPECT_TRUE(v.overall);
}

TEST(CheckConditions, StrictInequalities) {
  // Equality with the bound is a failure: strict comparisons, no tolerance.
  const ConditionVerdict at = evaluate_conditions(0.0, 3, 1.0, 0.5);
  EXPECT_EQ(at.min_mag_bound, 1.0);
  EXPECT_FALSE(at.min_mag_ok);
  EXPECT_FALSE(at.overall);
  const ConditionVerdict ric_at = evaluate_conditions(0.5, 3, 1.0, 0.0);
  EXPECT_FALSE(ric_at.ric_ok);
}

TEST(CheckConditions, OverallIsConjunction) {
  for (double d : {0.0, 0.2, 0.4, 0.6}) {
    for (double mm : {0.01, 0.5, 3.0}) {
      const ConditionVerdict v = evaluate_conditions(d, 2, mm, 0.1);
      EXPECT_EQ(v.overall, v.ric_ok && v.min_mag_ok);
    }
  }
}

TEST(CheckConditions, NeedsRoomForOrderKPlusOne) {
  EXPECT_THROW(check_theorem1_conditions(Matrix::identity(2), SparseSignal(2, {0, 1}, {1.0, 1.0}), 0.0),
               ValidationError);
}

TEST(VerifyLemma1, WorkedExample) {
  const auto ex = lemma1_example_instance(0.5);
  const Lemma1Check c = verify_lemma1(ex.matrix, ex.signal, ex.subset);
  EXPECT_NEAR(c.lhs, 0.5, 1e-12);
  EXPECT_NEAR(c.rhs, 1.0 - std::sqrt(2.0) * 0.5, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(VerifyLemma1, IdentityEquality) {
  const Lemma1Check c = verify_lemma1(Matrix::identity(3), SparseSignal(3, {0, 1}, {1.0, 1.0}), {});
  EXPECT_NEAR(c.lhs, 1.0, 1e-15);
  EXPECT_NEAR(c.rhs, 1.0, 1e-15);
  EXPECT_TRUE(c.holds);
}

TEST(VerifyLemma1, RandomInstancesAllSubsets) {
  // 48 rows: at 12 x 18 the exact delta_4 essentially always exceeds 1.
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Matrix a = gaussian_sensing_matrix(48, 18, seed, true);
    const SparseSignal x = random_sparse_signal(18, 3, 1.0, 4.0, seed + 500);
    const double d = exact_ric(a, 4).delta;
    if (d >= 1.0) continue;
    const IndexSet& om = x.support();
    for (unsigned mask = 0; mask < 7; ++mask) {
      IndexSet s;
      for (std::size_t i = 0; i < 3; ++i)
        if (mask & (1u << i)) s.push_back(om[i]);
      EXPECT_TRUE(verify_lemma1(a, x, s, d).holds) << "seed " << seed << " mask " << mask;
      ++checked;
    }
  }
  EXPECT_GT(checked, 200u);
}

TEST(VerifyLemma1, Errors) {
  const auto ex = lemma1_example_instance(0.5);
  EXPECT_THROW(verify_lemma1(ex.matrix, ex.signal, {2}), ValidationError);
  EXPECT_THROW(verify_lemma1(ex.matrix, ex.signal, {0, 1}), ValidationError);
  EXPECT_THROW(verify_lemma1(ex.matrix, ex.signal, {0}, 1.0), ValidationError);
}

TEST(ComparisonReport, KTwo) {
  const ComparisonReport r = comparison_report(2, 0.1, 1.0);
  EXPECT_EQ(r.prior_ric_bound, 0.5);
  EXPECT_NEAR(r.sharp_ric_bound, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_TRUE(r.ric_bound_weaker);
}

TEST(ComparisonReport, ZeroDeltaEquality) {
  for (std::size_t k = 1; k <= 10; ++k) {
    const ComparisonReport r = comparison_report(k, 0.0, 1.0);
    EXPECT_EQ(r.prior_min_mag, 2.0);
    EXPECT_EQ(r.sharp_min_mag, 2.0);
    EXPECT_TRUE(r.min_mag_weaker_or_equal);
    EXPECT_FALSE(r.min_mag_strict);
  }
}

TEST(ComparisonReport, PlugIn) {
  const double d = 0.3;
  const ComparisonReport r = comparison_report(4, d, 1.0);
  const double prior = (std::sqrt(1.0 + d) + 1.0) / (1.0 - d - std::sqrt(1.0 - d) * 2.0 * d);
  const double sharp = 2.0 / (1.0 - std::sqrt(5.0) * d);
  EXPECT_TRUE(r.prior_min_mag_defined);
  EXPECT_NEAR(r.prior_min_mag, prior, 1e-12);
  EXPECT_NEAR(r.sharp_min_mag, sharp, 1e-12);
  EXPECT_TRUE(r.min_mag_strict);
}

TEST(ComparisonReport, UndefinedBoundsFlagged) {
  const ComparisonReport r = comparison_report(2, 0.8, 1.0);
  EXPECT_FALSE(r.sharp_min_mag_defined);
  EXPECT_FALSE(r.prior_min_mag_defined);
}

TEST(BoundOrdering, SharpBoundDominatesResidualFloor) {
  for (std::size_t k = 1; k <= 20; ++k) {
    const double hi = sharp_ric_bound(k);
    for (int i = 0; i < 100; ++i) {
      const double d = hi * i / 100.0;
      EXPECT_GE(min_magnitude_bound(d, k, 1.0), 2.0 / std::sqrt(1.0 - d) - 1e-12);
    }
  }
}
