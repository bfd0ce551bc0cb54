#include "omplab/lemma_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "omplab/conditions.hpp"
#include "omplab/error.hpp"
#include "omplab/linalg.hpp"
#include "omplab/rng.hpp"
#include "omplab/sensing.hpp"
#include "omplab/text_io.hpp"

namespace omplab {

bool LemmaSweepReport::ok() const noexcept {
  const bool closed = std::all_of(closed_form.begin(), closed_form.end(),
                                  [](const ClosedFormCheck& c) { return c.ok; });
  return closed && gap.violations == 0 && monotonicity.violations == 0 &&
         transpose_bound.violations == 0 && projection_sandwich.violations == 0;
}

namespace {

constexpr double kClosedFormTolerance = 1e-12;

IndexSet random_subset(CounterRng& rng, std::size_t n, std::size_t size) {
  IndexSet pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < size; ++i) {
    std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.uniform_below(n - i))]);
  }
  IndexSet s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
  std::sort(s.begin(), s.end());
  return s;
}

// Every proper subset of omega, including the empty set.
std::vector<IndexSet> proper_subsets(const IndexSet& omega) {
  std::vector<IndexSet> out;
  const std::size_t k = omega.size();
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << k); ++mask) {
    IndexSet s;
    for (std::size_t b = 0; b < k; ++b)
      if (mask & (std::uint64_t{1} << b)) s.push_back(omega[b]);
    out.push_back(std::move(s));
  }
  return out;
}

void add_closed_form(LemmaSweepReport& rep, std::string label, double measured, double expected) {
  rep.closed_form.push_back(
      {std::move(label), measured, expected, std::abs(measured - expected) <= kClosedFormTolerance});
}

void dump_instance(const LemmaSweepOptions& opt, std::size_t index, const Matrix& a,
                   const SparseSignal& x, const std::string& prefix = "") {
  if (!opt.failure_dir) return;
  const auto dir = *opt.failure_dir / ("instance" + std::to_string(index));
  std::filesystem::create_directories(dir);
  save_matrix(dir / (prefix + "A.mat"), a);
  save_signal(dir / "x.sig", x);
}

}  // namespace

LemmaSweepReport lemma_sweep(std::uint64_t seed, std::size_t instances,
                             const LemmaSweepOptions& opt) {
  if (instances < 1) throw ValidationError("lemma_sweep: instances must be >= 1");
  if (opt.max_k < 1 || opt.max_k + 1 > opt.n) {
    throw ValidationError("lemma_sweep: need 1 <= max_k and max_k + 1 <= n");
  }
  const double tol = opt.tolerance;
  LemmaSweepReport rep;
  rep.instances = instances;

  // Closed forms. Identity: every RIC is 0 and the gap inequality is tight.
  {
    const Matrix eye = Matrix::identity(6);
    const SparseSignal x(6, {0, 1}, {1.0, 1.0});
    for (const IndexSet& s : {IndexSet{}, IndexSet{0}}) {
      const Lemma1Check c = verify_lemma1(eye, x, s);
      add_closed_form(rep, "identity gap margin, |S| = " + std::to_string(s.size()), c.margin(), 0.0);
    }
    add_closed_form(rep, "identity delta_3", exact_ric(eye, 3).delta, 0.0);
  }
  // The 3x3 example: lhs = 1 - d, rhs = 1 - sqrt(2) d, margin (sqrt(2) - 1) d.
  for (double d : {0.1, 0.3, 0.5}) {
    const Lemma1Example ex = lemma1_example_instance(d);
    const Lemma1Check c = verify_lemma1(ex.matrix, ex.signal, ex.subset);
    add_closed_form(rep, "example gap margin, delta = " + format_shortest(d), c.margin(),
                    (std::sqrt(2.0) - 1.0) * d);
  }

  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t is = derive_seed(seed, i);
    const std::size_t k = 1 + i % opt.max_k;
    const Matrix a = gaussian_sensing_matrix(opt.m, opt.n, derive_seed(is, 1), true);
    const SparseSignal x = random_sparse_signal(opt.n, k, 1.0, 4.0, derive_seed(is, 2));
    CounterRng rng(derive_seed(is, 3));

    // delta[j] = delta_j for j = 1..K+1
    Vector delta(k + 2, 0.0);
    for (std::size_t j = 1; j <= k + 1; ++j) delta[j] = exact_ric(a, j, opt.ric).delta;
    const std::size_t before = rep.gap.violations + rep.monotonicity.violations +
                               rep.transpose_bound.violations +
                               rep.projection_sandwich.violations;

    for (std::size_t j = 1; j <= k; ++j) rep.monotonicity.record(delta[j + 1] - delta[j], tol);

    // The gap inequality needs delta_{K+1} < 1. When the main matrix misses
    // that, check it on a taller matrix with the same column count instead.
    Matrix gap_matrix = a;
    double gap_delta = delta[k + 1];
    if (gap_delta >= 1.0 && opt.gap_rows > opt.m) {
      gap_matrix = gaussian_sensing_matrix(opt.gap_rows, opt.n, derive_seed(is, 4), true);
      gap_delta = exact_ric(gap_matrix, k + 1, opt.ric).delta;
      ++rep.gap_on_tall_matrix;
    }
    if (gap_delta < 1.0) {
      for (const IndexSet& s : proper_subsets(x.support())) {
        const Lemma1Check c = verify_lemma1(gap_matrix, x, s, gap_delta);
        rep.gap.record(c.margin(), tol);
      }
    } else {
      ++rep.gap_skipped;
    }

    // ||A_S^T v||^2 <= (1 + delta_|S|) ||v||^2
    {
      const std::size_t size = 1 + static_cast<std::size_t>(rng.uniform_below(k + 1));
      const Matrix a_s = submatrix_columns(a, random_subset(rng, opt.n, size));
      Vector v(opt.m);
      for (double& e : v) e = rng.normal();
      const Vector atv = multiply_transpose(a_s, v);
      const double ratio = dot(atv, atv) / dot(v, v);
      rep.transpose_bound.record(1.0 + delta[size] - ratio, tol);
    }

    // (1 - d)||z||^2 <= ||P_S1^perp A_{S2 \ S1} z||^2 <= (1 + d)||z||^2, d = delta_|S1 u S2|
    {
      const std::size_t u_size = 1 + static_cast<std::size_t>(rng.uniform_below(k + 1));
      const IndexSet u = random_subset(rng, opt.n, u_size);
      const std::size_t s1_size = static_cast<std::size_t>(rng.uniform_below(u_size));
      IndexSet shuffled = u;
      for (std::size_t p = 0; p < shuffled.size(); ++p) {
        std::swap(shuffled[p], shuffled[p + static_cast<std::size_t>(rng.uniform_below(shuffled.size() - p))]);
      }
      IndexSet s1(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(s1_size));
      IndexSet diff(shuffled.begin() + static_cast<std::ptrdiff_t>(s1_size), shuffled.end());
      std::sort(s1.begin(), s1.end());
      std::sort(diff.begin(), diff.end());

      Vector z(diff.size());
      for (double& e : z) e = rng.normal();
      const Vector w = projection_residual(submatrix_columns(a, s1),
                                           multiply(submatrix_columns(a, diff), z));
      const double ratio = dot(w, w) / dot(z, z);
      const double d = delta[u_size];
      rep.projection_sandwich.record(std::min(ratio - (1.0 - d), (1.0 + d) - ratio), tol);
    }

    const std::size_t after = rep.gap.violations + rep.monotonicity.violations +
                              rep.transpose_bound.violations + rep.projection_sandwich.violations;
    if (after > before) {
      rep.violations.push_back("instance " + std::to_string(i) + " (K=" + std::to_string(k) + ")");
      dump_instance(opt, i, a, x);
      if (!(gap_matrix == a)) dump_instance(opt, i, gap_matrix, x, "gap_");
    }
  }
  return rep;
}

}  // namespace omplab
