#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "omplab/dense.hpp"
#include "omplab/omp.hpp"
#include "omplab/signal.hpp"

namespace omplab {

/// Band around the requested t that a found instance's exact RIC must hit.
inline constexpr double kSharpnessDeltaTolerance = 1e-6;

/// A K-sparse x and an (K+1)-column A with delta_{K+1} ~= t on which
/// noiseless OMP with max_iterations(K) misses supp(x).
struct FailureInstance {
  std::size_t k = 0;
  double target_t = 0.0;
  Matrix matrix;
  SparseSignal signal;
  double verified_delta = 0.0;
  double sharp_bound = 0.0;  // 1/sqrt(K+1)
  OmpResult omp_trace;
  std::uint64_t candidates_tried = 0;
};

struct FailureVerification {
  double delta = 0.0;
  bool delta_in_band = false;      // |delta - t| <= 1e-6
  bool above_sharp_bound = false;  // delta >= 1/sqrt(K+1) - 1e-10
  bool first_selection_wrong = false;
  bool support_missed = false;
  OmpResult trace;

  bool ok() const noexcept {
    return delta_in_band && above_sharp_bound && first_selection_wrong && support_missed;
  }
};

/// Recomputes delta_{K+1} exactly and reruns noiseless OMP(K) on A x.
FailureVerification verify_failure_instance(const Matrix& a, const SparseSignal& x, double t);

/// Searches Gram-structured (K+1)-column matrices for a failure instance.
///
/// Candidate 0 is the symmetric family: support Gram block alpha I + beta 1 1^T,
/// one extra column with equal correlation to every support column,
/// spectrum {1 - d, 1 (K-1 times), 1 + d} and x = 1. Later candidates randomly
/// perturb the angle, diagonal, magnitudes and off-diagonal entries, then
/// rescale the spectrum about 1 to hit the target. Each candidate is
/// certified by verify_failure_instance before it is returned; an empty
/// result after `search_budget` candidates is a legitimate outcome.
///
/// Throws ValidationError unless K >= 2 and 1/sqrt(K+1) <= t < 1.
std::optional<FailureInstance> sharpness_probe(std::size_t k, double t,
                                               std::uint64_t search_budget, std::uint64_t seed);

/// dir/A.mat, dir/x.sig, dir/trace.csv, dir/meta.txt
void save_failure_instance(const std::filesystem::path& dir, const FailureInstance& fi);

/// Loads a saved instance and re-verifies it. Throws ValidationError when
/// the files are malformed or re-verification fails.
FailureInstance load_failure_instance(const std::filesystem::path& dir);

}  // namespace omplab
