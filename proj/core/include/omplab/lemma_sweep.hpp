#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omplab/ric.hpp"

namespace omplab {

struct LemmaSweepOptions {
  std::size_t m = 12;
  std::size_t n = 18;
  std::size_t max_k = 3;
  // Rows of the fallback matrix for the gap inequality. At 12 x 18 the exact
  // delta_{K+1} is above 1 for K >= 2, outside that inequality's hypothesis.
  std::size_t gap_rows = 48;
  double tolerance = 1e-9;
  RicOptions ric{};
  // Violating instances are written here when set.
  std::optional<std::filesystem::path> failure_dir;
};

struct LemmaStats {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();

  void record(double margin, double tolerance) {
    ++checks;
    if (margin < min_margin) min_margin = margin;
    if (margin < -tolerance) ++violations;
  }
};

/// A check whose margin has a closed form (identity matrix, the 3x3 example).
struct ClosedFormCheck {
  std::string label;
  double measured = 0.0;
  double expected = 0.0;
  bool ok = false;
};

struct LemmaSweepReport {
  std::size_t instances = 0;
  // correlation gap, RIC monotonicity, ||A_S^T x||^2 upper bound,
  // projected-column sandwich
  LemmaStats gap, monotonicity, transpose_bound, projection_sandwich;
  std::size_t gap_skipped = 0;         // delta_{K+1} >= 1 on both matrices
  std::size_t gap_on_tall_matrix = 0;  // gap check moved to the gap_rows x n matrix
  std::vector<ClosedFormCheck> closed_form;
  std::vector<std::string> violations;

  bool ok() const noexcept;
};

/// Randomized check of the four supporting inequalities on Gaussian
/// instances with exactly computed RICs. Instance i uses K = 1 + i % max_k;
/// margins are normalized by ||x||^2 where the inequality is quadratic.
LemmaSweepReport lemma_sweep(std::uint64_t seed, std::size_t instances,
                             const LemmaSweepOptions& options = {});

}  // namespace omplab
