#include "omplab/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "omplab/conditions.hpp"
#include "omplab/error.hpp"
#include "omplab/linalg.hpp"
#include "omplab/ric.hpp"
#include "omplab/rng.hpp"
#include "omplab/text_io.hpp"

namespace omplab {

FailureVerification verify_failure_instance(const Matrix& a, const SparseSignal& x, double t) {
  if (a.cols() != x.dimension()) throw ValidationError("failure instance: dimension mismatch");
  const std::size_t k = x.sparsity();
  if (k < 1 || k + 1 > a.cols()) throw ValidationError("failure instance: need 1 <= K < n");

  FailureVerification v;
  v.delta = exact_ric(a, k + 1).delta;
  v.delta_in_band = std::abs(v.delta - t) <= kSharpnessDeltaTolerance;
  v.above_sharp_bound = v.delta >= sharp_ric_bound(k) - 1e-10;
  if (k > std::min(a.rows(), a.cols())) return v;
  v.trace = omp_run(a, multiply(a, x.dense()), StopRule::max_iterations(k),
                    OmpOptions{x.support(), kDefaultRankTolerance});
  v.first_selection_wrong = !v.trace.trace.empty() && v.trace.trace.front().in_true_support == false;
  v.support_missed = v.trace.recovered_support != x.support();
  return v;
}

namespace {

struct Candidate {
  Matrix a;
  SparseSignal x;
};

// Symmetric square root of an SPD matrix.
Matrix spd_sqrt(const Matrix& g) {
  const SymEigen e = sym_eigen(g);
  const std::size_t n = g.rows();
  Matrix root(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const double s = std::sqrt(std::max(e.values[c], 0.0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) root(i, j) += e.vectors(i, c) * s * e.vectors(j, c);
  }
  return root;
}

Candidate make_candidate(std::size_t k, double target, std::uint64_t index, std::uint64_t seed) {
  const std::size_t n = k + 1;
  const double kd = static_cast<double>(k);
  double theta = std::atan(std::sqrt(kd));
  double alpha = 1.0;
  std::size_t off_position = 0;
  Vector x(k, 1.0);
  Matrix perturb(n, n);

  CounterRng rng(derive_seed(seed, index));
  if (index > 0) {
    theta += 0.05 * rng.normal();
    alpha += (rng.uniform() - 0.5) * target;
    off_position = static_cast<std::size_t>(rng.uniform_below(n));
    for (double& v : x) v = 1.0 + 0.3 * rng.uniform();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const double e = 0.02 * rng.normal();
        perturb(i, j) = e;
        perturb(j, i) = e;
      }
  }

  // Support block alpha I + beta 1 1^T whose all-ones eigenvalue is p;
  // off-support column correlates gamma with each support column.
  const double p = 1.0 - target * std::cos(theta);
  const double q = target * std::sin(theta);
  const double beta = (p - alpha) / kd;
  const double gamma = q / std::sqrt(kd);
  const double eta = 2.0 - p;

  Matrix g(n, n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) g(i, j) = beta + (i == j ? alpha : 0.0);
    g(j, k) = gamma;
    g(k, j) = gamma;
  }
  g(k, k) = eta;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) g(i, j) += perturb(i, j);

  // Rescale the spectrum about 1 so max(lmax - 1, 1 - lmin) == target.
  const EigExtremes ex = sym_eig_extremes(g);
  const double d = std::max(ex.lambda_max - 1.0, 1.0 - ex.lambda_min);
  if (d > 0.0) {
    const double s = target / d;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) g(i, j) = (i == j ? 1.0 : 0.0) + s * (g(i, j) - (i == j ? 1.0 : 0.0));
  }
  const Matrix root = spd_sqrt(g);

  // Column order: the off-support column moves to off_position.
  IndexSet perm(n);  // perm[new] = old
  for (std::size_t c = 0, src = 0; c < n; ++c) perm[c] = (c == off_position) ? k : src++;
  Matrix a(n, n);
  IndexSet support;
  Vector values;
  for (std::size_t c = 0; c < n; ++c) {
    const auto from = root.col(perm[c]);
    std::copy(from.begin(), from.end(), a.col(c).begin());
    if (perm[c] != k) {
      support.push_back(c);
      values.push_back(x[perm[c]]);
    }
  }
  return {std::move(a), SparseSignal(n, std::move(support), std::move(values))};
}

}  // namespace

std::optional<FailureInstance> sharpness_probe(std::size_t k, double t, std::uint64_t search_budget,
                                               std::uint64_t seed) {
  if (k < 2) throw ValidationError("sharpness_probe: K must be >= 2");
  if (!(t >= sharp_ric_bound(k) && t < 1.0)) {
    throw ValidationError("sharpness_probe: t must lie in [1/sqrt(K+1), 1) = [" +
                          format_shortest(sharp_ric_bound(k)) + ", 1)");
  }
  // At t = 1/sqrt(K+1) exactly the symmetric family only produces a tie, so
  // aim a little above t while staying inside the verification band.
  const double target = t + std::min(0.5 * kSharpnessDeltaTolerance, 0.5 * (1.0 - t));

  for (std::uint64_t c = 0; c < search_budget; ++c) {
    Candidate cand;
    try {
      cand = make_candidate(k, target, c, seed);
    } catch (const Error&) {
      continue;  // perturbation produced an unusable Gram matrix
    }
    FailureVerification v = verify_failure_instance(cand.a, cand.x, t);
    if (!v.ok()) continue;
    FailureInstance fi;
    fi.k = k;
    fi.target_t = t;
    fi.matrix = std::move(cand.a);
    fi.signal = std::move(cand.x);
    fi.verified_delta = v.delta;
    fi.sharp_bound = sharp_ric_bound(k);
    fi.omp_trace = std::move(v.trace);
    fi.candidates_tried = c + 1;
    return fi;
  }
  return std::nullopt;
}

void save_failure_instance(const std::filesystem::path& dir, const FailureInstance& fi) {
  std::filesystem::create_directories(dir);
  save_matrix(dir / "A.mat", fi.matrix);
  save_signal(dir / "x.sig", fi.signal);
  {
    std::ofstream os(dir / "trace.csv");
    write_trace_csv(os, fi.omp_trace);
  }
  std::ofstream meta(dir / "meta.txt");
  meta << "k = " << fi.k << '\n'
       << "t = " << format_exact(fi.target_t) << '\n'
       << "verified_delta = " << format_exact(fi.verified_delta) << '\n'
       << "sharp_bound = " << format_exact(fi.sharp_bound) << '\n'
       << "candidates_tried = " << fi.candidates_tried << '\n';
  if (!meta) throw ValidationError("failed writing " + (dir / "meta.txt").string());
}

FailureInstance load_failure_instance(const std::filesystem::path& dir) {
  std::ifstream meta(dir / "meta.txt");
  if (!meta) throw ValidationError("cannot open " + (dir / "meta.txt").string());
  std::map<std::string, std::string> kv;
  for (std::string line; std::getline(meta, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  if (!kv.count("t") || !kv.count("k")) throw ValidationError("meta.txt lacks k or t");

  FailureInstance fi;
  fi.k = std::stoul(kv["k"]);
  fi.target_t = std::stod(kv["t"]);
  fi.candidates_tried = kv.count("candidates_tried") ? std::stoull(kv["candidates_tried"]) : 0;
  fi.matrix = load_matrix(dir / "A.mat");
  fi.signal = load_signal(dir / "x.sig");
  if (fi.signal.sparsity() != fi.k) throw ValidationError("failure instance: K disagrees with x.sig");

  FailureVerification v = verify_failure_instance(fi.matrix, fi.signal, fi.target_t);
  if (!v.ok()) {
    throw ValidationError("failure instance in " + dir.string() + " does not re-verify (delta = " +
                          format_shortest(v.delta) + ")");
  }
  fi.verified_delta = v.delta;
  fi.sharp_bound = sharp_ric_bound(fi.k);
  fi.omp_trace = std::move(v.trace);
  return fi;
}

}  // namespace omplab
