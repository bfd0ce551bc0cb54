// omplab: command-line front end for the sparse-recovery library.
//
// Exit codes: 0 success, 2 validation error, 3 capacity/budget error,
// 4 guarantee violation, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "omplab/conditions.hpp"
#include "omplab/error.hpp"
#include "omplab/experiment.hpp"
#include "omplab/lemma_sweep.hpp"
#include "omplab/omp.hpp"
#include "omplab/report_json.hpp"
#include "omplab/rng.hpp"
#include "omplab/ric.hpp"
#include "omplab/sensing.hpp"
#include "omplab/sharpness.hpp"
#include "omplab/text_io.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitGuarantee = 4;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw omplab::ValidationError("cannot open " + path + " for writing");
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace omplab;

  CLI::App app{"Orthogonal matching pursuit, exact RICs and recovery-condition experiments"};
  app.require_subcommand(1);

  // ric
  std::string ric_matrix;
  std::size_t ric_order = 0;
  std::uint64_t ric_budget = kDefaultRicBudget;
  unsigned ric_threads = 1;
  auto* ric = app.add_subcommand("ric", "Exact restricted isometry constant of one order");
  ric->add_option("--matrix", ric_matrix, "Matrix file")->required();
  ric->add_option("--order", ric_order, "Order K")->required();
  ric->add_option("--budget", ric_budget, "Maximum number of K-subsets to enumerate");
  ric->add_option("--parallelism", ric_threads, "Worker threads");

  // omp
  std::string omp_matrix, omp_meas, omp_trace, omp_truth;
  std::optional<std::size_t> omp_max_iter;
  std::optional<double> omp_eps;
  auto* omp = app.add_subcommand("omp", "Run orthogonal matching pursuit");
  omp->add_option("--matrix", omp_matrix, "Matrix file")->required();
  omp->add_option("--measurement", omp_meas, "Measurement vector file")->required();
  auto* max_iter_opt = omp->add_option("--max-iter", omp_max_iter, "Stop after K iterations");
  auto* eps_opt = omp->add_option("--eps", omp_eps, "Stop once ||r|| <= eps");
  max_iter_opt->excludes(eps_opt);
  eps_opt->excludes(max_iter_opt);
  omp->add_option("--trace", omp_trace, "Write the per-iteration trace as CSV");
  omp->add_option("--truth", omp_truth, "Signal file used only to annotate the trace");

  // check
  std::string chk_matrix, chk_signal;
  double chk_eps = 0.0;
  auto* check = app.add_subcommand("check", "Evaluate the sufficient recovery conditions");
  check->add_option("--matrix", chk_matrix, "Matrix file")->required();
  check->add_option("--signal", chk_signal, "Signal file")->required();
  check->add_option("--eps", chk_eps, "Noise bound")->required();

  // compare
  std::size_t cmp_k = 1;
  double cmp_delta = 0.0, cmp_eps = 1.0;
  auto* compare = app.add_subcommand("compare", "Compare with the (sqrt(4K+1)-1)/(2K) bounds");
  compare->add_option("--k", cmp_k, "Sparsity K")->required();
  compare->add_option("--delta", cmp_delta, "delta_{K+1}")->required();
  compare->add_option("--eps", cmp_eps, "Noise bound");

  // validate-theorem1 / phase
  std::string v_config, v_out, p_config, p_out;
  std::optional<unsigned> v_threads, p_threads;
  auto* validate = app.add_subcommand("validate-theorem1", "Zero-failure recovery experiment");
  validate->add_option("--config", v_config, "Config file")->required();
  validate->add_option("--out", v_out, "Output CSV")->required();
  validate->add_option("--parallelism", v_threads, "Override the config's parallelism");
  auto* phase = app.add_subcommand("phase", "Unconditioned success-rate table");
  phase->add_option("--config", p_config, "Config file")->required();
  phase->add_option("--out", p_out, "Output CSV")->required();
  phase->add_option("--parallelism", p_threads, "Override the config's parallelism");

  // sharpness
  std::size_t s_k = 2;
  double s_t = 0.0;
  std::uint64_t s_budget = 100000, s_seed = 1;
  std::string s_out;
  auto* sharp = app.add_subcommand("sharpness", "Search for an OMP failure at delta_{K+1} = t");
  sharp->add_option("--k", s_k, "Sparsity K (>= 2)")->required();
  sharp->add_option("--t", s_t, "Target RIC in [1/sqrt(K+1), 1)")->required();
  sharp->add_option("--budget", s_budget, "Candidates to try");
  sharp->add_option("--seed", s_seed, "Search seed");
  sharp->add_option("--out", s_out, "Directory for a found instance")->required();

  // lemmas
  std::uint64_t l_seed = 1;
  std::size_t l_instances = 500;
  LemmaSweepOptions l_opts;
  std::string l_fail_dir;
  auto* lemmas = app.add_subcommand("lemmas", "Randomized sweep of the supporting inequalities");
  lemmas->add_option("--seed", l_seed, "Seed")->required();
  lemmas->add_option("--instances", l_instances, "Number of random instances")->required();
  lemmas->add_option("--m", l_opts.m, "Rows");
  lemmas->add_option("--n", l_opts.n, "Columns");
  lemmas->add_option("--max-k", l_opts.max_k, "Largest sparsity");
  lemmas->add_option("--gap-rows", l_opts.gap_rows, "Rows of the fallback matrix for the gap inequality");
  lemmas->add_option("--failure-dir", l_fail_dir, "Write violating instances here");

  // generate
  std::size_t g_m = 16, g_n = 24, g_k = 2;
  double g_eps = 0.0, g_min_mag = 1.0, g_dr = 4.0;
  std::uint64_t g_seed = 1;
  bool g_raw = false;
  std::string g_out;
  auto* gen = app.add_subcommand("generate", "Write a random problem instance directory");
  gen->add_option("--m", g_m, "Rows");
  gen->add_option("--n", g_n, "Columns");
  gen->add_option("--k", g_k, "Sparsity");
  gen->add_option("--eps", g_eps, "Sphere noise radius");
  gen->add_option("--min-mag", g_min_mag, "Minimum nonzero magnitude");
  gen->add_option("--dynamic-range", g_dr, "Magnitude range factor");
  gen->add_option("--seed", g_seed, "Seed");
  gen->add_flag("--raw", g_raw, "Do not normalize columns");
  gen->add_option("--out", g_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*ric) {
      const Matrix a = load_matrix(ric_matrix);
      std::cout << to_json(exact_ric(a, ric_order, {ric_budget, ric_threads})) << '\n';
    } else if (*omp) {
      if (!omp_max_iter && !omp_eps) throw ValidationError("omp: pass --max-iter or --eps");
      const Matrix a = load_matrix(omp_matrix);
      const Vector y = load_vector(omp_meas);
      const StopRule rule =
          omp_max_iter ? StopRule::max_iterations(*omp_max_iter) : StopRule::residual_at_most(*omp_eps);
      OmpOptions opts;
      if (!omp_truth.empty()) opts.ground_truth = load_signal(omp_truth).support();
      const OmpResult res = omp_run(a, y, rule, opts);
      if (!omp_trace.empty()) {
        auto os = open_out(omp_trace);
        write_trace_csv(os, res);
      }
      std::cout << to_json(res) << '\n';
    } else if (*check) {
      const Matrix a = load_matrix(chk_matrix);
      const SparseSignal x = load_signal(chk_signal);
      std::cout << to_json(check_theorem1_conditions(a, x, chk_eps)) << '\n';
    } else if (*compare) {
      std::cout << to_json(comparison_report(cmp_k, cmp_delta, cmp_eps)) << '\n';
    } else if (*validate) {
      ExperimentConfig cfg = load_config(v_config);
      if (v_threads) cfg.parallelism = *v_threads;
      const Theorem1Outcome outcome = theorem1_validation(cfg);
      {
        auto os = open_out(v_out);
        write_table_csv(os, outcome.table);
      }
      std::size_t held = 0;
      for (const auto& r : outcome.table.rows) held += r.conditions_held_count.value_or(0);
      std::cerr << "validate-theorem1: " << outcome.table.rows.size() << " cells, " << held
                << " condition-holding trials, " << outcome.counterexamples.size()
                << " counterexamples\n";
      require_no_counterexamples(outcome, cfg.failure_dir);
    } else if (*phase) {
      ExperimentConfig cfg = load_config(p_config);
      if (p_threads) cfg.parallelism = *p_threads;
      auto os = open_out(p_out);
      write_table_csv(os, phase_table(cfg));
    } else if (*sharp) {
      const auto found = sharpness_probe(s_k, s_t, s_budget, s_seed);
      if (found) {
        save_failure_instance(s_out, *found);
        std::cout << to_json(*found) << '\n';
      } else {
        std::cout << "{\n  \"found\": false,\n  \"k\": " << s_k << ",\n  \"t\": "
                  << format_shortest(s_t) << ",\n  \"candidates_tried\": " << s_budget << "\n}\n";
      }
    } else if (*lemmas) {
      if (!l_fail_dir.empty()) l_opts.failure_dir = l_fail_dir;
      const LemmaSweepReport rep = lemma_sweep(l_seed, l_instances, l_opts);
      std::cout << to_json(rep) << '\n';
      if (!rep.ok()) throw GuaranteeViolation("lemma sweep found violations");
    } else if (*gen) {
      const Matrix a = gaussian_sensing_matrix(g_m, g_n, derive_seed(g_seed, 1), !g_raw);
      const SparseSignal x = random_sparse_signal(g_n, g_k, g_min_mag, g_dr, derive_seed(g_seed, 2));
      save_instance(g_out, generate_measurement(a, x, {NoiseKind::l2_sphere, g_eps, derive_seed(g_seed, 3)}));
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const GuaranteeViolation& e) {
    std::cerr << "guarantee violation: " << e.what() << '\n';
    return kExitGuarantee;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SingularSystemError& e) {
    std::cerr << "singular system: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
