#include "omplab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "omplab/error.hpp"
#include "omplab/rng.hpp"
#include "omplab/text_io.hpp"

namespace omplab {

const char* to_string(Ensemble e) noexcept {
  switch (e) {
    case Ensemble::gaussian_normalized: return "gaussian_normalized";
    case Ensemble::gaussian_raw: return "gaussian_raw";
    case Ensemble::lemma1_family: return "lemma1_family";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("config: " + what); };
  if (k_values.empty() || eps_values.empty()) fail("k and eps lists must be non-empty");
  if (ensemble == Ensemble::lemma1_family) {
    if (delta_values.empty()) fail("delta list must be non-empty for lemma1_family");
    for (double d : delta_values)
      if (!(d >= 0.0 && d < 1.0)) fail("delta values must lie in [0, 1)");
    for (std::size_t k : k_values)
      if (k < 1 || k > 2) fail("lemma1_family supports K in {1, 2}");
  } else {
    if (m_values.empty() || n_values.empty()) fail("m and n lists must be non-empty");
    for (std::size_t m : m_values)
      if (m < 1) fail("m must be positive");
    for (std::size_t n : n_values)
      for (std::size_t k : k_values)
        if (k + 1 > n) fail("need K + 1 <= n for every cell");
  }
  for (std::size_t k : k_values)
    if (k < 1) fail("K must be positive");
  for (double e : eps_values)
    if (!(e >= 0.0) || !std::isfinite(e)) fail("eps values must be finite and non-negative");
  if (trials < 1) fail("trials must be positive");
  if (min_mag_policy == MinMagPolicy::theorem_bound && !(margin_factor > 1.0)) {
    fail("margin_factor must exceed 1 under the theorem_bound policy");
  }
  if (!(min_mag > 0.0) || !std::isfinite(min_mag)) fail("min_mag must be positive");
  if (!(dynamic_range >= 1.0) || !std::isfinite(dynamic_range)) fail("dynamic_range must be >= 1");
  if (parallelism < 1) fail("parallelism must be positive");
  if (ric_budget < 1) fail("ric_budget must be positive");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ValidationError("config: key '" + key + "' expects an integer, got '" + s + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError("config: key '" + key + "' expects a number, got '" + s + "'");
  }
  return v;
}

// "1,2,5" or inclusive ranges "1:8", mixable.
std::vector<std::size_t> to_size_list(const std::string& key, const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(s)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(to_u64(key, item));
    } else {
      const auto lo = to_u64(key, trim(item.substr(0, colon)));
      const auto hi = to_u64(key, trim(item.substr(colon + 1)));
      if (hi < lo) throw ValidationError("config: empty range in '" + key + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(key, item));
  return out;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("config: key '" + key + "' expects true/false");
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "m") c.m_values = to_size_list(key, val);
    else if (key == "n") c.n_values = to_size_list(key, val);
    else if (key == "k") c.k_values = to_size_list(key, val);
    else if (key == "eps") c.eps_values = to_double_list(key, val);
    else if (key == "delta") c.delta_values = to_double_list(key, val);
    else if (key == "trials") c.trials = to_u64(key, val);
    else if (key == "margin_factor") c.margin_factor = to_double(key, val);
    else if (key == "min_mag") c.min_mag = to_double(key, val);
    else if (key == "dynamic_range") c.dynamic_range = to_double(key, val);
    else if (key == "master_seed") c.master_seed = to_u64(key, val);
    else if (key == "parallelism") c.parallelism = static_cast<unsigned>(to_u64(key, val));
    else if (key == "ric_budget") c.ric_budget = to_u64(key, val);
    else if (key == "check_conditions") c.check_conditions = to_bool(key, val);
    else if (key == "failure_dir") c.failure_dir = val;
    else if (key == "min_mag_policy") {
      if (val == "theorem_bound") c.min_mag_policy = MinMagPolicy::theorem_bound;
      else if (val == "fixed") c.min_mag_policy = MinMagPolicy::fixed;
      else throw ValidationError("config: min_mag_policy must be theorem_bound or fixed");
    } else if (key == "ensemble") {
      if (val == "gaussian_normalized") c.ensemble = Ensemble::gaussian_normalized;
      else if (val == "gaussian_raw") c.ensemble = Ensemble::gaussian_raw;
      else if (val == "lemma1_family") c.ensemble = Ensemble::lemma1_family;
      else throw ValidationError("config: unknown ensemble '" + val + "'");
    } else if (key == "noise") {
      if (val == "none") c.noise = NoiseKind::none;
      else if (val == "l2_ball") c.noise = NoiseKind::l2_ball;
      else if (val == "l2_sphere") c.noise = NoiseKind::l2_sphere;
      else throw ValidationError("config: unknown noise kind '" + val + "'");
    } else if (key == "signs") {
      if (val == "random") c.signs = SignPattern::random;
      else if (val == "positive") c.signs = SignPattern::positive;
      else throw ValidationError("config: signs must be random or positive");
    } else {
      throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw ValidationError("cannot open config " + p.string());
  return parse_config(is);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_table_csv(std::ostream& os, const ExperimentTable& table) {
  const bool with_delta = table.ensemble == Ensemble::lemma1_family;
  if (with_delta) os << "delta,";
  os << "m,n,K,epsilon,trials,exact_support_rate,conditions_held_count,"
        "conditional_success_rate,mean_iterations,rank_failures\n";
  for (const auto& r : table.rows) {
    if (with_delta) os << (r.delta ? format_shortest(*r.delta) : std::string{}) << ',';
    os << r.m << ',' << r.n << ',' << r.k << ',' << format_shortest(r.epsilon) << ',' << r.trials
       << ',' << format_shortest(r.exact_support_rate) << ',';
    if (r.conditions_held_count) os << *r.conditions_held_count;
    os << ',';
    if (r.conditional_success_rate) os << format_shortest(*r.conditional_success_rate);
    os << ',' << format_shortest(r.mean_iterations) << ',' << r.rank_failures << '\n';
  }
}

std::string table_csv(const ExperimentTable& table) {
  std::ostringstream os;
  write_table_csv(os, table);
  return os.str();
}

// ---------------------------------------------------------------------------
// Trial machinery
// ---------------------------------------------------------------------------

namespace {

struct Cell {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double eps = 0.0;
  std::optional<double> delta;
  std::uint64_t seed = 0;
};

std::vector<Cell> expand_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  auto seed_for = [&](const Cell& cell) {
    std::uint64_t s = derive_seed(c.master_seed, static_cast<std::uint64_t>(c.ensemble));
    s = derive_seed(s, cell.m);
    s = derive_seed(s, cell.n);
    s = derive_seed(s, cell.k);
    s = derive_seed(s, std::bit_cast<std::uint64_t>(cell.eps));
    if (cell.delta) s = derive_seed(s, std::bit_cast<std::uint64_t>(*cell.delta));
    return s;
  };
  if (c.ensemble == Ensemble::lemma1_family) {
    for (double d : c.delta_values)
      for (std::size_t k : c.k_values)
        for (double e : c.eps_values) {
          Cell cell{3, 3, k, e, d, 0};
          cell.seed = seed_for(cell);
          cells.push_back(cell);
        }
  } else {
    for (std::size_t m : c.m_values)
      for (std::size_t n : c.n_values)
        for (std::size_t k : c.k_values)
          for (double e : c.eps_values) {
            Cell cell{m, n, k, e, std::nullopt, 0};
            cell.seed = seed_for(cell);
            cells.push_back(cell);
          }
  }
  return cells;
}

std::string describe(const Cell& cell) {
  std::string s = "cell (m=" + std::to_string(cell.m) + ", n=" + std::to_string(cell.n) +
                  ", K=" + std::to_string(cell.k) + ", eps=" + format_shortest(cell.eps);
  if (cell.delta) s += ", delta=" + format_shortest(*cell.delta);
  return s + ")";
}

struct TrialOutcome {
  bool conditions_checked = false;
  bool conditions_held = false;
  bool success = false;
  bool rank_failure = false;
  std::size_t iterations = 0;
  std::optional<Counterexample> counterexample;
};

// Runs fn(i) for i in [0, count) on `threads` workers. Exceptions are
// rethrown for the lowest failing index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_index = count;
  std::exception_ptr err;
  {
    std::vector<std::jthread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(err_mu);
            if (i < err_index) {
              err_index = i;
              err = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (err) std::rethrow_exception(err);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const Cell& cell, std::size_t cell_index,
                       std::size_t trial, bool check_conditions) {
  const std::uint64_t ts = derive_seed(cell.seed, trial);

  Matrix a;
  switch (cfg.ensemble) {
    case Ensemble::gaussian_normalized:
      a = gaussian_sensing_matrix(cell.m, cell.n, derive_seed(ts, 1), true);
      break;
    case Ensemble::gaussian_raw:
      a = gaussian_sensing_matrix(cell.m, cell.n, derive_seed(ts, 1), false);
      break;
    case Ensemble::lemma1_family:
      a = lemma1_example_instance(*cell.delta).matrix;
      break;
  }

  TrialOutcome out;
  std::optional<double> delta_k1;
  if (check_conditions) {
    delta_k1 = exact_ric(a, cell.k + 1, {cfg.ric_budget, 1}).delta;
    out.conditions_checked = true;
  }

  double min_mag = cfg.min_mag;
  if (cfg.min_mag_policy == MinMagPolicy::theorem_bound && delta_k1 &&
      *delta_k1 < sharp_ric_bound(cell.k) &&
      1.0 - std::sqrt(static_cast<double>(cell.k + 1)) * *delta_k1 > 0.0) {
    const double bound = min_magnitude_bound(*delta_k1, cell.k, cell.eps);
    if (bound > 0.0) min_mag = cfg.margin_factor * bound;
  }

  const SparseSignal x =
      random_sparse_signal(cell.n, cell.k, min_mag, cfg.dynamic_range, derive_seed(ts, 2), cfg.signs);
  const NoiseSpec noise{cfg.noise, cell.eps, derive_seed(ts, 3)};
  ProblemInstance inst = generate_measurement(a, x, noise);

  OmpResult res = omp_run(inst.matrix, inst.measurement, StopRule::residual_at_most(cell.eps));
  out.iterations = res.iterations();
  out.rank_failure = res.stopped_by == StopReason::rank_failure;
  out.success = res.recovered_support == x.support() && res.iterations() == cell.k &&
                res.stopped_by == StopReason::rule_met;

  if (delta_k1) {
    const ConditionVerdict v = evaluate_conditions(*delta_k1, cell.k, x.min_magnitude(), cell.eps);
    out.conditions_held = v.overall;
    if (v.overall && !out.success) {
      out.counterexample = Counterexample{cell_index, trial, cell.eps, std::move(inst), v, std::move(res)};
    }
  }
  return out;
}

ExperimentRow aggregate(const Cell& cell, const std::vector<TrialOutcome>& outcomes) {
  ExperimentRow row;
  row.m = cell.m;
  row.n = cell.n;
  row.k = cell.k;
  row.epsilon = cell.eps;
  row.delta = cell.delta;
  row.trials = outcomes.size();
  std::size_t successes = 0;
  std::size_t held = 0;
  std::size_t held_successes = 0;
  std::size_t iterations = 0;
  bool checked = !outcomes.empty();
  for (const auto& o : outcomes) {
    successes += o.success;
    iterations += o.iterations;
    row.rank_failures += o.rank_failure;
    checked = checked && o.conditions_checked;
    if (o.conditions_held) {
      ++held;
      held_successes += o.success;
    }
  }
  const double t = static_cast<double>(outcomes.size());
  row.exact_support_rate = static_cast<double>(successes) / t;
  row.mean_iterations = static_cast<double>(iterations) / t;
  if (checked) {
    row.conditions_held_count = held;
    if (held > 0) {
      row.conditional_success_rate = static_cast<double>(held_successes) / static_cast<double>(held);
    }
  }
  return row;
}

}  // namespace

Theorem1Outcome theorem1_validation(const ExperimentConfig& config) {
  config.validate();
  const auto cells = expand_cells(config);
  for (const auto& cell : cells) {
    const auto subsets = binomial(cell.n, cell.k + 1);
    if (subsets > config.ric_budget) {
      throw CapacityError("theorem1_validation: " + describe(cell) + " needs C(" +
                          std::to_string(cell.n) + ", " + std::to_string(cell.k + 1) + ") = " +
                          (subsets == UINT64_MAX ? std::string("overflow") : std::to_string(subsets)) +
                          " subsets, over the RIC budget of " + std::to_string(config.ric_budget));
    }
  }

  Theorem1Outcome out;
  out.table.ensemble = config.ensemble;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for(config.trials, config.parallelism, [&](std::size_t t) {
      outcomes[t] = run_trial(config, cells[c], c, t, true);
    });
    out.table.rows.push_back(aggregate(cells[c], outcomes));
    for (auto& o : outcomes)
      if (o.counterexample) out.counterexamples.push_back(std::move(*o.counterexample));
  }
  return out;
}

void require_no_counterexamples(const Theorem1Outcome& outcome, const std::filesystem::path& dir) {
  if (outcome.counterexamples.empty()) return;
  for (const auto& ce : outcome.counterexamples) {
    const auto sub = dir / ("cell" + std::to_string(ce.cell) + "_trial" + std::to_string(ce.trial));
    save_instance(sub, ce.instance);
    std::ofstream trace(sub / "trace.csv");
    write_trace_csv(trace, ce.result);
    std::ofstream meta(sub / "meta.txt");
    meta << "epsilon = " << format_exact(ce.epsilon) << '\n'
         << "delta_k1 = " << format_exact(ce.verdict.delta_k1) << '\n'
         << "min_mag_bound = " << format_exact(ce.verdict.min_mag_bound) << '\n'
         << "min_magnitude = " << format_exact(ce.verdict.min_magnitude) << '\n';
  }
  throw GuaranteeViolation("theorem1_validation: " + std::to_string(outcome.counterexamples.size()) +
                           " trial(s) met both recovery conditions but OMP missed the support; "
                           "instances written to " + dir.string());
}

ExperimentTable phase_table(const ExperimentConfig& config) {
  config.validate();
  const auto cells = expand_cells(config);
  ExperimentTable table;
  table.ensemble = config.ensemble;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const bool check =
        config.check_conditions && binomial(cells[c].n, cells[c].k + 1) <= config.ric_budget;
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for(config.trials, config.parallelism, [&](std::size_t t) {
      outcomes[t] = run_trial(config, cells[c], c, t, check);
      outcomes[t].counterexample.reset();
    });
    table.rows.push_back(aggregate(cells[c], outcomes));
  }
  return table;
}

}  // namespace omplab
