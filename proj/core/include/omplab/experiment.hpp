#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omplab/conditions.hpp"
#include "omplab/omp.hpp"
#include "omplab/ric.hpp"
#include "omplab/sensing.hpp"

namespace omplab {

enum class Ensemble { gaussian_normalized, gaussian_raw, lemma1_family };
enum class MinMagPolicy { theorem_bound, fixed };

/// Monte Carlo sweep description. Cells are the cartesian product of the
/// m, n, K and epsilon lists (for lemma1_family: delta x K x epsilon, with
/// m = n = 3). See README.md for the key = value file format.
struct ExperimentConfig {
  std::vector<std::size_t> m_values{16};
  std::vector<std::size_t> n_values{24};
  std::vector<std::size_t> k_values{2};
  std::vector<double> eps_values{0.0};
  std::vector<double> delta_values{0.1, 0.2, 0.3, 0.4, 0.5};  // lemma1_family only
  std::size_t trials = 100;
  MinMagPolicy min_mag_policy = MinMagPolicy::theorem_bound;
  double margin_factor = 1.01;
  // Fixed policy magnitude; also used when the theorem bound is zero
  // (eps = 0) or undefined (delta_{K+1} too large).
  double min_mag = 1.0;
  double dynamic_range = 4.0;
  SignPattern signs = SignPattern::random;
  Ensemble ensemble = Ensemble::gaussian_normalized;
  NoiseKind noise = NoiseKind::l2_sphere;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 1;
  std::uint64_t ric_budget = kDefaultRicBudget;
  bool check_conditions = true;  // phase_table only
  std::filesystem::path failure_dir = "theorem1_failures";

  /// Throws ValidationError on empty ranges or out-of-domain values.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& p);

struct ExperimentRow {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double epsilon = 0.0;
  std::optional<double> delta;  // lemma1_family cells
  std::size_t trials = 0;
  double exact_support_rate = 0.0;
  std::optional<std::size_t> conditions_held_count;
  std::optional<double> conditional_success_rate;  // absent when no trial met the conditions
  double mean_iterations = 0.0;
  std::size_t rank_failures = 0;
};

struct ExperimentTable {
  Ensemble ensemble = Ensemble::gaussian_normalized;
  std::vector<ExperimentRow> rows;
};

/// Header row plus one line per cell. Gaussian ensembles use exactly
///   m,n,K,epsilon,trials,exact_support_rate,conditions_held_count,
///   conditional_success_rate,mean_iterations,rank_failures
/// lemma1_family tables prepend a delta column. Absent values are empty.
void write_table_csv(std::ostream& os, const ExperimentTable& table);
std::string table_csv(const ExperimentTable& table);

/// A trial where both recovery conditions held and OMP still missed.
struct Counterexample {
  std::size_t cell = 0;
  std::size_t trial = 0;
  double epsilon = 0.0;
  ProblemInstance instance;
  ConditionVerdict verdict;
  OmpResult result;
};

struct Theorem1Outcome {
  ExperimentTable table;
  std::vector<Counterexample> counterexamples;  // must be empty
};

/// Per trial: draw A, compute delta_{K+1} exactly, draw x with
/// min |x_i| = margin_factor * min_magnitude_bound (when the RIC condition
/// holds), add noise at eps and run OMP with residual_at_most(eps).
/// Trials violating either condition are still run and counted in the
/// unconditioned rate but excluded from the conditional one.
///
/// Throws CapacityError naming the first cell whose C(n, K+1) exceeds the
/// budget. Output is a pure function of the config; parallelism only
/// changes wall time.
Theorem1Outcome theorem1_validation(const ExperimentConfig& config);

/// Writes each counterexample under dir/cell<c>_trial<t>/ and throws
/// GuaranteeViolation if there is at least one.
void require_no_counterexamples(const Theorem1Outcome& outcome, const std::filesystem::path& dir);

/// Unconditioned exact-support rates. Condition columns are filled only
/// when check_conditions is set and C(n, K+1) fits the RIC budget.
ExperimentTable phase_table(const ExperimentConfig& config);

const char* to_string(Ensemble e) noexcept;

}  // namespace omplab
