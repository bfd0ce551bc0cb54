#pragma once

#include <cstddef>
#include <cstdint>

#include "omplab/dense.hpp"
#include "omplab/signal.hpp"

namespace omplab {

enum class NoiseKind { none, l2_ball, l2_sphere };

/// Bounded noise v with ||v||_2 <= epsilon.
///
/// l2_ball draws uniformly from the open ball; l2_sphere puts v on the
/// sphere of radius epsilon, the worst case inside the l2 noise model.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

/// y = A x + v
struct ProblemInstance {
  Matrix matrix;
  SparseSignal signal;
  Vector noise;
  Vector measurement;
};

enum class SignPattern { random, positive };

/// Noise vector of length `m` drawn per `spec`.
Vector generate_noise(std::size_t m, const NoiseSpec& spec);

ProblemInstance generate_measurement(const Matrix& a, const SparseSignal& x, const NoiseSpec& noise);

/// i.i.d. N(0, 1/m) entries filled column by column from CounterRng(seed).
/// With `normalize_columns` each column is rescaled to unit l2 norm.
Matrix gaussian_sensing_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                               bool normalize_columns);

/// Support uniform over K-subsets of [0, n); magnitudes uniform in
/// [min_mag, min_mag * dynamic_range].
SparseSignal random_sparse_signal(std::size_t n, std::size_t k, double min_mag,
                                  double dynamic_range, std::uint64_t seed,
                                  SignPattern signs = SignPattern::random);

/// The 3x3 example A = diag(sqrt(1+d), sqrt(1-d), sqrt(1+d)), x = (1, 1, 0),
/// S = {0}. Its RIC of order 3 equals d.
struct Lemma1Example {
  Matrix matrix;
  SparseSignal signal;
  IndexSet subset;
};

Lemma1Example lemma1_example_instance(double delta);

}  // namespace omplab
