#include "omplab/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "omplab/error.hpp"
#include "omplab/rng.hpp"

namespace omplab {

namespace {

// Per-generator stream tags, so equal seeds give unrelated draws.
constexpr std::uint64_t kMatrixStream = 0x6d6174;
constexpr std::uint64_t kSignalStream = 0x736967;
constexpr std::uint64_t kNoiseStream = 0x6e6f69;

Vector unit_gaussian_direction(std::size_t m, CounterRng& rng) {
  Vector g(m);
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (double& x : g) x = rng.normal();
    nrm = norm2(g);
  }
  for (double& x : g) x /= nrm;
  return g;
}

}  // namespace

Vector generate_noise(std::size_t m, const NoiseSpec& spec) {
  if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
    throw ValidationError("noise epsilon must be finite and non-negative");
  }
  Vector v(m, 0.0);
  if (spec.kind == NoiseKind::none || spec.epsilon == 0.0 || m == 0) return v;

  CounterRng rng(derive_seed(spec.seed, kNoiseStream));
  v = unit_gaussian_direction(m, rng);
  if (spec.kind == NoiseKind::l2_sphere) {
    for (double& x : v) x *= spec.epsilon;
    return v;
  }
  // Uniform in the ball: radius eps * u^(1/m), u in [0, 1).
  const double radius = spec.epsilon * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
  for (double& x : v) x *= radius;
  // Rounding in the direction normalization can push the norm onto the
  // boundary; the ball is open.
  while (norm2(v) >= spec.epsilon) {
    for (double& x : v) x *= 1.0 - 0x1.0p-50;
  }
  return v;
}

ProblemInstance generate_measurement(const Matrix& a, const SparseSignal& x, const NoiseSpec& noise) {
  if (a.cols() != x.dimension()) {
    throw ValidationError("generate_measurement: matrix has " + std::to_string(a.cols()) +
                          " columns but signal dimension is " + std::to_string(x.dimension()));
  }
  ProblemInstance inst{a, x, generate_noise(a.rows(), noise), {}};
  inst.measurement = multiply(a, x.dense());
  for (std::size_t i = 0; i < inst.measurement.size(); ++i) inst.measurement[i] += inst.noise[i];
  return inst;
}

Matrix gaussian_sensing_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                               bool normalize_columns) {
  if (m == 0 || n == 0) throw ValidationError("sensing matrix dimensions must be positive");
  CounterRng rng(derive_seed(seed, kMatrixStream));
  Matrix a(m, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t j = 0; j < n; ++j) {
    auto c = a.col(j);
    for (double& x : c) x = scale * rng.normal();
    if (normalize_columns) {
      const double nrm = norm2(c);
      if (nrm > 0.0) {
        for (double& x : c) x /= nrm;
      }
    }
  }
  return a;
}

SparseSignal random_sparse_signal(std::size_t n, std::size_t k, double min_mag,
                                  double dynamic_range, std::uint64_t seed, SignPattern signs) {
  if (k < 1 || k > n) {
    throw ValidationError("random_sparse_signal: need 1 <= K <= n (K=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
  }
  if (!(min_mag > 0.0) || !std::isfinite(min_mag)) {
    throw ValidationError("random_sparse_signal: min_mag must be positive and finite");
  }
  if (!(dynamic_range >= 1.0) || !std::isfinite(dynamic_range)) {
    throw ValidationError("random_sparse_signal: dynamic_range must be >= 1");
  }
  CounterRng rng(derive_seed(seed, kSignalStream));

  // Partial Fisher-Yates: the first k slots form a uniform k-subset.
  IndexSet pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
    std::swap(pool[i], pool[j]);
  }
  IndexSet support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(support.begin(), support.end());

  const double span = min_mag * dynamic_range - min_mag;
  Vector values(k);
  for (double& v : values) {
    double mag = min_mag + rng.uniform() * span;
    mag = std::max(mag, min_mag);
    const bool negative = signs == SignPattern::random && (rng.next_u64() >> 63) != 0;
    v = negative ? -mag : mag;
  }
  return SparseSignal(n, std::move(support), std::move(values));
}

Lemma1Example lemma1_example_instance(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ValidationError("lemma1_example_instance: delta must lie in [0, 1)");
  }
  const double hi = std::sqrt(1.0 + delta);
  const double lo = std::sqrt(1.0 - delta);
  const double diag[] = {hi, lo, hi};
  return {Matrix::diagonal(diag), SparseSignal(3, {0, 1}, {1.0, 1.0}), IndexSet{0}};
}

}  // namespace omplab
