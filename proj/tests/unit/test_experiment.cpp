#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "omplab/error.hpp"
#include "omplab/experiment.hpp"

using namespace omplab;
namespace fs = std::filesystem;

namespace {
ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}
}  // namespace

TEST(Config, ParsesListsRangesAndEnums) {
  const ExperimentConfig c = parse(
      "# comment\n"
      "m = 12, 16\n"
      "n = 18\n"
      "k = 1:3\n"
      "eps = 0, 0.05\n"
      "trials = 7\n"
      "ensemble = gaussian_raw\n"
      "noise = l2_ball\n"
      "signs = positive\n"
      "min_mag_policy = fixed\n"
      "min_mag = 2.5\n"
      "master_seed = 99\n"
      "parallelism = 3\n"
      "check_conditions = false\n");
  EXPECT_EQ(c.m_values, (std::vector<std::size_t>{12, 16}));
  EXPECT_EQ(c.k_values, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(c.eps_values, (std::vector<double>{0.0, 0.05}));
  EXPECT_EQ(c.trials, 7u);
  EXPECT_EQ(c.ensemble, Ensemble::gaussian_raw);
  EXPECT_EQ(c.noise, NoiseKind::l2_ball);
  EXPECT_EQ(c.signs, SignPattern::positive);
  EXPECT_EQ(c.min_mag_policy, MinMagPolicy::fixed);
  EXPECT_EQ(c.min_mag, 2.5);
  EXPECT_EQ(c.master_seed, 99u);
  EXPECT_EQ(c.parallelism, 3u);
  EXPECT_FALSE(c.check_conditions);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse("bogus = 1\n"), ValidationError);
  EXPECT_THROW(parse("m 12\n"), ValidationError);
  EXPECT_THROW(parse("trials = x\n"), ValidationError);
  EXPECT_THROW(parse("k = 3:1\n"), ValidationError);
  EXPECT_THROW(parse("margin_factor = 1.0\n"), ValidationError);
  EXPECT_THROW(parse("n = 3\nk = 3\n"), ValidationError);
  EXPECT_THROW(parse("ensemble = fourier\n"), ValidationError);
}

TEST(Theorem1Validation, SmallCellSucceedsConditionally) {
  // At 16 x 24 the exact delta_3 essentially never meets 1/sqrt(3); the
  // 64-row cell is where condition-holding trials actually occur.
  ExperimentConfig c;
  c.m_values = {16, 64};
  c.n_values = {24};
  c.k_values = {2};
  c.eps_values = {0.05};
  c.trials = 200;
  const Theorem1Outcome out = theorem1_validation(c);
  ASSERT_EQ(out.table.rows.size(), 2u);
  EXPECT_TRUE(out.counterexamples.empty());
  for (const auto& row : out.table.rows) {
    EXPECT_EQ(row.trials, 200u);
    ASSERT_TRUE(row.conditions_held_count.has_value());
    if (*row.conditions_held_count > 0) EXPECT_EQ(row.conditional_success_rate.value(), 1.0);
  }
  EXPECT_GT(out.table.rows[1].conditions_held_count.value(), 50u);
}

TEST(Theorem1Validation, NoiselessCells) {
  ExperimentConfig c;
  c.m_values = {12, 20};
  c.n_values = {18};
  c.k_values = {1, 2};
  c.eps_values = {0.0};
  c.trials = 50;
  const Theorem1Outcome out = theorem1_validation(c);
  EXPECT_TRUE(out.counterexamples.empty());
  std::size_t held = 0;
  for (const auto& r : out.table.rows) {
    held += r.conditions_held_count.value();
    if (r.conditional_success_rate) EXPECT_EQ(*r.conditional_success_rate, 1.0);
  }
  EXPECT_GT(held, 0u);
}

TEST(Theorem1Validation, WorkedExampleFamilyAllSucceed) {
  ExperimentConfig c;
  c.ensemble = Ensemble::lemma1_family;
  c.k_values = {2};
  c.eps_values = {0.0, 0.05};
  c.trials = 20;
  const Theorem1Outcome out = theorem1_validation(c);
  ASSERT_EQ(out.table.rows.size(), 10u);
  for (const auto& r : out.table.rows) {
    EXPECT_EQ(r.conditions_held_count.value(), 20u);
    EXPECT_EQ(r.conditional_success_rate.value(), 1.0);
  }
  const std::string csv = table_csv(out.table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "delta,m,n,K,epsilon,trials,exact_support_rate,conditions_held_count,"
            "conditional_success_rate,mean_iterations,rank_failures");
}

TEST(Theorem1Validation, BudgetErrorNamesCell) {
  ExperimentConfig c;
  c.n_values = {40};
  c.k_values = {6};
  c.trials = 1;
  try {
    theorem1_validation(c);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("n=40"), std::string::npos) << what;
    EXPECT_NE(what.find("C(40, 7)"), std::string::npos) << what;
  }
}

TEST(Theorem1Validation, CounterexamplesAreSerializedAndFail) {
  Theorem1Outcome fake;
  Counterexample ce;
  ce.instance = generate_measurement(Matrix::identity(2), SparseSignal(2, {0}, {1.0}), {});
  fake.counterexamples.push_back(ce);
  const fs::path dir = fs::temp_directory_path() / "omplab_test_counterexamples";
  fs::remove_all(dir);
  EXPECT_THROW(require_no_counterexamples(fake, dir), GuaranteeViolation);
  EXPECT_FALSE(fs::is_empty(dir));
  fs::remove_all(dir);
  EXPECT_NO_THROW(require_no_counterexamples(Theorem1Outcome{}, dir));
}

TEST(PhaseTable, HeaderAndAbsentConditions) {
  ExperimentConfig c;
  c.m_values = {20};
  c.n_values = {60};
  c.k_values = {6};
  c.trials = 10;
  const ExperimentTable t = phase_table(c);  // C(60, 7) exceeds the budget
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_FALSE(t.rows[0].conditions_held_count.has_value());
  const std::string csv = table_csv(t);
  const std::string header =
      "m,n,K,epsilon,trials,exact_support_rate,conditions_held_count,"
      "conditional_success_rate,mean_iterations,rank_failures\n";
  ASSERT_EQ(csv.substr(0, header.size()), header);
  const std::string row = csv.substr(header.size());
  EXPECT_NE(row.find(",,,"), std::string::npos) << row;
}

TEST(PhaseTable, NearOrthogonalColumnsRecoverSingleSpike) {
  ExperimentConfig c;
  c.ensemble = Ensemble::gaussian_raw;
  c.m_values = {400};
  c.n_values = {400};
  c.k_values = {1};
  c.trials = 50;
  c.check_conditions = false;
  const ExperimentTable t = phase_table(c);
  EXPECT_GE(t.rows[0].exact_support_rate, 0.98);
}

TEST(PhaseTable, InvariantToParallelism) {
  ExperimentConfig c;
  c.m_values = {10, 14};
  c.n_values = {20};
  c.k_values = {1, 2, 3};
  c.eps_values = {0.0, 0.02};
  c.trials = 15;
  const std::string base = table_csv(phase_table(c));
  for (unsigned p : {2u, 4u, 8u}) {
    c.parallelism = p;
    EXPECT_EQ(table_csv(phase_table(c)), base) << "parallelism " << p;
  }
}

TEST(PhaseTable, RateNonIncreasingInK) {
  ExperimentConfig c;
  c.m_values = {32};
  c.n_values = {64};
  c.k_values = {1, 2, 3, 4, 5, 6, 7, 8};
  c.trials = 60;
  c.check_conditions = false;
  c.min_mag_policy = MinMagPolicy::fixed;
  const ExperimentTable t = phase_table(c);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double p = t.rows[i - 1].exact_support_rate, q = t.rows[i].exact_support_rate;
    const double sigma = std::sqrt((p * (1 - p) + q * (1 - q)) / 60.0);
    EXPECT_LE(q, p + 3.0 * sigma + 1e-12) << "K=" << t.rows[i].k;
  }
}
