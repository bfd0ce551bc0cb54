#include "omplab/ric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "omplab/error.hpp"

namespace omplab {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact at every step; guard the multiplication.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t r1 = r / g;
    const std::uint64_t num1 = num / (i / g);
    if (num1 != 0 && r1 > UINT64_MAX / num1) return UINT64_MAX;
    r = r1 * num1;
  }
  return r;
}

namespace {

struct Partial {
  double delta = -1.0;
  IndexSet witness;
  EigExtremes lambda;
  std::uint64_t examined = 0;
};

// Enumerates all k-subsets whose first index lies in [first_lo, first_hi).
Partial scan_range(const Matrix& g, std::size_t n, std::size_t k, std::size_t first_lo,
                   std::size_t first_hi) {
  Partial best;
  if (first_lo >= first_hi) return best;

  IndexSet c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = first_lo + i;

  std::vector<double> sub(k * k);
  std::vector<double> work(k * k);
  auto refresh_from = [&](std::size_t p) {
    for (std::size_t j = p; j < k; ++j) {
      for (std::size_t i = 0; i < k; ++i) {
        const double v = g(c[i], c[j]);
        sub[j * k + i] = v;
        sub[i * k + j] = v;
      }
    }
  };
  refresh_from(0);

  while (true) {
    std::copy(sub.begin(), sub.end(), work.begin());
    const std::size_t sweeps = detail::jacobi_in_place(work, k, {});
    double lmin = std::numeric_limits<double>::infinity();
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      lmin = std::min(lmin, work[i * k + i]);
      lmax = std::max(lmax, work[i * k + i]);
    }
    const double delta = std::max(lmax - 1.0, 1.0 - lmin);
    ++best.examined;
    if (delta > best.delta) {
      best.delta = delta;
      best.witness = c;
      best.lambda = {lmin, lmax, sweeps};
    }

    // Advance to the next combination in lexicographic order.
    std::size_t p = k;
    while (p > 0 && c[p - 1] == n - k + (p - 1)) --p;
    if (p == 0) break;
    --p;
    ++c[p];
    if (p == 0 && c[0] >= first_hi) break;
    for (std::size_t i = p + 1; i < k; ++i) c[i] = c[i - 1] + 1;
    refresh_from(p);
  }
  return best;
}

}  // namespace

RicReport exact_ric(const Matrix& a, std::size_t k, const RicOptions& options) {
  const std::size_t n = a.cols();
  if (k < 1 || k > n) {
    throw ValidationError("exact_ric: order " + std::to_string(k) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  const std::uint64_t total = binomial(n, k);
  if (total > options.budget) {
    throw CapacityError("exact_ric: C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " +
                        (total == UINT64_MAX ? std::string("overflow") : std::to_string(total)) +
                        " subsets exceeds the enumeration budget of " +
                        std::to_string(options.budget));
  }

  const Matrix g = gram(a);
  const std::size_t first_count = n - k + 1;  // admissible first indices
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::size_t>(options.parallelism, 1, first_count));

  // Contiguous first-index ranges of roughly equal subset counts.
  std::vector<std::size_t> bounds{0};
  if (threads > 1) {
    const std::uint64_t per = total / threads;
    std::uint64_t acc = 0;
    for (std::size_t f = 0; f < first_count && bounds.size() < threads; ++f) {
      acc += binomial(n - 1 - f, k - 1);
      if (acc >= per * bounds.size()) bounds.push_back(f + 1);
    }
  }
  if (bounds.back() != first_count) bounds.push_back(first_count);

  std::vector<Partial> parts(bounds.size() - 1);
  if (parts.size() == 1) {
    parts[0] = scan_range(g, n, k, bounds[0], bounds[1]);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(parts.size());
    for (std::size_t t = 0; t < parts.size(); ++t) {
      pool.emplace_back([&, t] { parts[t] = scan_range(g, n, k, bounds[t], bounds[t + 1]); });
    }
  }

  RicReport report;
  report.order = k;
  report.delta = -1.0;
  for (const Partial& p : parts) {
    report.subsets_examined += p.examined;
    if (p.examined > 0 && p.delta > report.delta) {
      report.delta = p.delta;
      report.witness_subset = p.witness;
      report.witness_lambda = p.lambda;
    }
  }
  return report;
}

}  // namespace omplab
