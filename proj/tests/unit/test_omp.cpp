#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "helpers.hpp"
#include "omplab/conditions.hpp"
#include "omplab/error.hpp"
#include "omplab/linalg.hpp"
#include "omplab/omp.hpp"
#include "omplab/sensing.hpp"

using namespace omplab;

namespace {

// Plain restatement of the greedy loop with a from-scratch normal-equations
// refit each iteration.
IndexSet reference_omp(const Matrix& a, const Vector& y, std::size_t k) {
  const auto cols = testing_helpers::columns_of(a);
  IndexSet chosen;
  Vector r = y;
  for (std::size_t it = 0; it < k; ++it) {
    std::size_t best = a.cols();
    double best_c = -1.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      double c = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) c += cols[j][i] * r[i];
      if (std::fabs(c) > best_c) {
        best_c = std::fabs(c);
        best = j;
      }
    }
    chosen.push_back(best);
    oracle::Columns sub;
    for (std::size_t j : chosen) sub.push_back(cols[j]);
    const auto coef = oracle::normal_equations(sub, y);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double fit = 0.0;
      for (std::size_t c = 0; c < sub.size(); ++c) fit += sub[c][i] * coef[c];
      r[i] = y[i] - fit;
    }
  }
  return chosen;
}

}  // namespace

TEST(OmpRun, IdentitySingleSpike) {
  const Vector y{0, 0, 3, 0, 0};
  const OmpResult r = omp_run(Matrix::identity(5), y, StopRule::residual_at_most(0.0));
  EXPECT_EQ(r.recovered_support, IndexSet{2});
  EXPECT_EQ(r.iterations(), 1u);
  EXPECT_EQ(r.stopped_by, StopReason::rule_met);
  ASSERT_EQ(r.estimate.values().size(), 1u);
  EXPECT_EQ(r.estimate.values()[0], 3.0);
}

TEST(OmpRun, WorkedExampleTwoIterations) {
  const auto ex = lemma1_example_instance(0.5);
  const ProblemInstance inst = generate_measurement(ex.matrix, ex.signal, {});
  const OmpResult r = omp_run(ex.matrix, inst.measurement, StopRule::max_iterations(2));
  EXPECT_EQ(r.recovered_support, (IndexSet{0, 1}));
  EXPECT_EQ(r.selection_order, (IndexSet{0, 1}));
  EXPECT_EQ(r.estimate.support(), (IndexSet{0, 1}));
  EXPECT_NEAR(r.estimate.values()[0], 1.0, 1e-14);
  EXPECT_NEAR(r.estimate.values()[1], 1.0, 1e-14);
}

TEST(OmpRun, GuaranteedInstancesMatchExhaustiveOracle) {
  // Noisy instances meeting the sufficient conditions; the oracle confirms
  // supp(x) is also the best K-term least-squares fit over all supports.
  std::size_t verified = 0;
  for (std::uint64_t seed = 0; seed < 300 && verified < 10; ++seed) {
    const Matrix a = gaussian_sensing_matrix(64, 20, seed, true);
    const double eps = 0.01;
    const SparseSignal probe = random_sparse_signal(20, 2, 1.0, 1.0, seed);
    const ConditionVerdict v0 = check_theorem1_conditions(a, probe, eps);
    if (!v0.ric_ok) continue;
    const SparseSignal x = random_sparse_signal(20, 2, 1.01 * v0.min_mag_bound, 4.0, seed + 1);
    ASSERT_TRUE(check_theorem1_conditions(a, x, eps).overall);
    const auto inst = generate_measurement(a, x, {NoiseKind::l2_sphere, eps, seed + 2});
    const OmpResult r = omp_run(a, inst.measurement, StopRule::residual_at_most(eps));
    EXPECT_EQ(r.recovered_support, x.support()) << "seed " << seed;
    EXPECT_EQ(r.iterations(), 2u);
    const auto cols = testing_helpers::columns_of(a);
    EXPECT_EQ(oracle::best_k_support(cols, inst.measurement, 2), x.support()) << "seed " << seed;
    ++verified;
  }
  EXPECT_EQ(verified, 10u);
}

TEST(OmpRun, AgreesWithReferenceLoop) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix a = gaussian_sensing_matrix(10, 20, seed, true);
    const SparseSignal x = random_sparse_signal(20, 3, 0.5, 3.0, seed + 7);
    const auto inst = generate_measurement(a, x, {NoiseKind::l2_ball, 0.1, seed});
    const OmpResult r = omp_run(a, inst.measurement, StopRule::max_iterations(5));
    EXPECT_EQ(r.selection_order, reference_omp(a, inst.measurement, 5)) << "seed " << seed;
  }
}

TEST(OmpRun, TraceInvariants) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix a = gaussian_sensing_matrix(12, 24, seed, seed % 2 == 0);
    const SparseSignal x = random_sparse_signal(24, 4, 1.0, 4.0, seed + 3);
    const auto inst = generate_measurement(a, x, {NoiseKind::l2_sphere, 0.05, seed});
    OmpOptions opts;
    opts.ground_truth = x.support();
    const OmpResult r = omp_run(a, inst.measurement, StopRule::max_iterations(8), opts);
    EXPECT_EQ(r.recovered_support.size(), r.trace.size());
    std::set<std::size_t> seen;
    double prev = norm2(inst.measurement);
    for (const auto& rec : r.trace) {
      EXPECT_TRUE(seen.insert(rec.selected_index).second);
      EXPECT_LE(rec.residual_norm, prev + 1e-12);
      EXPECT_GE(rec.correlation, 0.0);
      ASSERT_TRUE(rec.in_true_support.has_value());
      EXPECT_EQ(*rec.in_true_support,
                std::binary_search(x.support().begin(), x.support().end(), rec.selected_index));
      prev = rec.residual_norm;
    }
    for (std::size_t i : r.estimate.support())
      EXPECT_TRUE(std::binary_search(r.recovered_support.begin(), r.recovered_support.end(), i));
    const Matrix a_s = submatrix_columns(a, r.recovered_support);
    EXPECT_LE(norm_inf(multiply_transpose(a_s, r.residual)), 1e-9);
  }
}

TEST(OmpRun, NoTruthMeansNoAnnotation) {
  const Matrix a = gaussian_sensing_matrix(6, 8, 1, true);
  const OmpResult r = omp_run(a, Vector(6, 1.0), StopRule::max_iterations(2));
  for (const auto& rec : r.trace) {
    EXPECT_FALSE(rec.in_true_support.has_value());
    EXPECT_FALSE(rec.margin.has_value());
  }
}

TEST(OmpRun, PreLoopStop) {
  const OmpResult r = omp_run(Matrix::identity(3), Vector{0.01, 0.0, 0.0}, StopRule::residual_at_most(0.1));
  EXPECT_TRUE(r.recovered_support.empty());
  EXPECT_EQ(r.iterations(), 0u);
  EXPECT_EQ(r.stopped_by, StopReason::rule_met);
}

TEST(OmpRun, MaxIterationsBoundedByMinDimension) {
  const Matrix a = gaussian_sensing_matrix(4, 8, 2, true);
  EXPECT_THROW(omp_run(a, Vector(4, 1.0), StopRule::max_iterations(5)), ValidationError);
  const OmpResult r = omp_run(a, Vector(4, 1.0), StopRule::max_iterations(4));
  EXPECT_EQ(r.iterations(), 4u);
}

TEST(OmpRun, ResidualRuleBudgetExhausted) {
  // y has a component outside span(e1, e2) that no iteration can remove.
  const Matrix a(3, 2, {1, 0, 0, 0, 1, 0});
  const OmpResult r = omp_run(a, Vector{1.0, 1.0, 1.0}, StopRule::residual_at_most(0.5));
  EXPECT_EQ(r.iterations(), 2u);
  EXPECT_EQ(r.stopped_by, StopReason::budget_exhausted);
}

TEST(OmpRun, RankFailureIsReported) {
  const Matrix a(2, 3, {1, 0, 1, 0, 1, 1e-14});
  const OmpResult r = omp_run(a, Vector{1.0, 1e-3}, StopRule::max_iterations(2));
  EXPECT_EQ(r.stopped_by, StopReason::rank_failure);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(OmpRun, TieBreaksToSmallestIndex) {
  const Matrix a = Matrix::identity(3);
  const OmpResult r = omp_run(a, Vector{1.0, 1.0, 1.0}, StopRule::max_iterations(1));
  EXPECT_EQ(r.selection_order, IndexSet{0});
}

TEST(OmpRun, Deterministic) {
  const Matrix a = gaussian_sensing_matrix(10, 20, 5, true);
  const Vector y = multiply(a, random_sparse_signal(20, 3, 1.0, 2.0, 6).dense());
  const OmpResult r1 = omp_run(a, y, StopRule::residual_at_most(0.0));
  const OmpResult r2 = omp_run(a, y, StopRule::residual_at_most(0.0));
  EXPECT_EQ(r1.selection_order, r2.selection_order);
  EXPECT_EQ(r1.residual, r2.residual);
  EXPECT_EQ(r1.estimate, r2.estimate);
}

TEST(OmpRun, NoiselessExactnessUnderSharpCondition) {
  std::size_t tested = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t k = 1 + seed % 3;
    const auto shape = testing_helpers::guaranteed_shape(k);
    const Matrix a = gaussian_sensing_matrix(shape.m, shape.n, seed, true);
    const SparseSignal x = random_sparse_signal(shape.n, k, 1.0, 4.0, seed + 99);
    const ConditionVerdict v = check_theorem1_conditions(a, x, 0.0);
    if (!v.ric_ok) continue;
    ++tested;
    const OmpResult r = omp_run(a, multiply(a, x.dense()), StopRule::max_iterations(x.sparsity()));
    ASSERT_EQ(r.recovered_support, x.support()) << "seed " << seed;
    const Vector diff = subtract(r.estimate.dense(), x.dense());
    EXPECT_LE(norm2(diff), 1e-8 * norm2(x.values()));
  }
  EXPECT_GT(tested, 100u);
}

TEST(OmpRun, Validation) {
  EXPECT_THROW(omp_run(Matrix::identity(3), Vector{1, 2}, StopRule::max_iterations(1)), ValidationError);
  EXPECT_THROW(omp_run(Matrix::identity(3), Vector{1, 2, 3}, StopRule::residual_at_most(-1.0)),
               ValidationError);
  EXPECT_THROW(omp_run(Matrix::identity(3), Vector{1, 2, 3}, StopRule::max_iterations(0)), ValidationError);
}
