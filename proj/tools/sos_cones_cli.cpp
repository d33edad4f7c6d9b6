// Command-line front end: solve one envelope instance, sweep a grid of
// instances, or run the numerical self-checks.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sos_cones/envelope.hpp"
#include "sos_cones/errors.hpp"
#include "sos_cones/kernels.hpp"
#include "sos_cones/selfcheck.hpp"
#include "sos_cones/serialize.hpp"

namespace {

using namespace sos_cones;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveConfig {
  int n = 1;
  int d_r = 1;
  int d = 0;
  int m = 2;
  int p = 2;
  std::uint64_t seed = 1;
  std::string formulation;
  double tol = 1e-7;
  double time_limit = 600.0;
  int max_iters = 500;
  bool zero = false;
  bool verbose = false;
  bool with_instance = true;
  std::string output;
};

struct SweepConfig {
  int n = 1;
  std::vector<int> d_r{1, 2};
  std::vector<int> m{2, 3};
  std::string d_mode = "both";
  int p = 2;
  std::vector<std::string> formulations;
  int seeds = 1;
  std::uint64_t first_seed = 1;
  double tol = 1e-7;
  double time_limit = 600.0;
  int max_iters = 500;
  int threads = 0;
  std::string output;
  std::string table;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

Formulation require_formulation(const std::string& name, int p) {
  const auto f = parse_formulation(name);
  if (!f) throw UsageError("unknown formulation '" + name + "'");
  if (formulation_norm(*f) != p)
    throw UsageError("formulation '" + name + "' does not match p = " + std::to_string(p));
  return *f;
}

SolveOptions options_from(double tol, double time_limit, int max_iters, bool verbose) {
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");
  SolveOptions o;
  o.tol = tol;
  o.time_limit_s = time_limit;
  o.max_iters = max_iters;
  o.verbose = verbose;
  return o;
}

EnvelopeInstance instance_or_usage(int n, int d_r, int m, int p, int d, std::uint64_t seed, bool zero) {
  try {
    return make_instance(n, d_r, m, p, d, seed, zero);
  } catch (const FormulationMismatch& e) {
    throw UsageError(e.what());
  } catch (const ShapeMismatch& e) {
    throw UsageError(e.what());
  }
}

int run_solve(const SolveConfig& cfg) {
  const Formulation f = require_formulation(cfg.formulation, cfg.p);
  const SolveOptions opts = options_from(cfg.tol, cfg.time_limit, cfg.max_iters, cfg.verbose);
  const EnvelopeInstance inst = instance_or_usage(cfg.n, cfg.d_r, cfg.m, cfg.p, cfg.d, cfg.seed, cfg.zero);
  const ResultRow row = run_instance(inst, f, opts);
  Json doc = {{"result", result_to_json(row)},
              {"simd", std::string(kernels::isa_name(kernels::active_isa()))}};
  if (row.st == "co" && row.envelope.size() == inst.U())
    doc["result"]["max_envelope_violation"] = envelope_violation(inst, row.envelope);
  if (cfg.with_instance) doc["instance"] = instance_to_json(inst);
  write_text(cfg.output, doc.dump(2) + "\n");
  return row.st == "co" ? kExitOk : kExitFailed;
}

int thread_budget(int requested, std::size_t jobs) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int budget = requested > 0 ? requested : static_cast<int>(hw);
  if (const char* env = std::getenv("SOS_CONES_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) budget = std::min(budget, cap);
  }
  return std::max(1, std::min(budget, static_cast<int>(jobs)));
}

int run_sweep(const SweepConfig& cfg) {
  struct Job {
    int d_r, d, m;
    std::uint64_t seed;
    Formulation f;
  };
  std::vector<std::string> names = cfg.formulations;
  if (names.empty())
    names = cfg.p == 2 ? std::vector<std::string>{"sosl2", "sos", "sospsd"}
                       : std::vector<std::string>{"sosl1", "sos_ext"};
  std::vector<Formulation> forms;
  for (const auto& name : names) forms.push_back(require_formulation(name, cfg.p));
  if (cfg.d_mode != "dr" && cfg.d_mode != "2dr" && cfg.d_mode != "both")
    throw UsageError("--d-mode must be dr, 2dr or both");
  if (cfg.seeds < 1) throw UsageError("--seeds must be >= 1");
  const SolveOptions opts = options_from(cfg.tol, cfg.time_limit, cfg.max_iters, false);

  std::vector<Job> jobs;
  for (int d_r : cfg.d_r) {
    std::vector<int> ds;
    if (cfg.p == 1 || cfg.d_mode != "2dr") ds.push_back(d_r);
    if (cfg.p == 2 && cfg.d_mode != "dr") ds.push_back(2 * d_r);
    for (int m : cfg.m)
      for (int d : ds)
        for (int k = 0; k < cfg.seeds; ++k)
          for (Formulation f : forms) jobs.push_back({d_r, d, m, cfg.first_seed + k, f});
  }
  // Validate every instance shape before spending time on solves.
  for (const auto& j : jobs)
    if (j.d_r < 1 || j.m < 2 || cfg.n < 1) throw UsageError("sweep needs n, d_r >= 1 and m >= 2");

  std::vector<ResultRow> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      try {
        const EnvelopeInstance inst = make_instance(cfg.n, j.d_r, j.m, cfg.p, j.d, j.seed);
        rows[i] = run_instance(inst, j.f, opts);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        rows[i].n = cfg.n;
        rows[i].d_r = j.d_r;
        rows[i].d = j.d;
        rows[i].m = j.m;
        rows[i].p = cfg.p;
        rows[i].seed = j.seed;
        rows[i].formulation = std::string(formulation_name(j.f));
        rows[i].st = "er";
        rows[i].detail = e.what();
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cerr << "[" << i + 1 << "/" << jobs.size() << "] n=" << cfg.n << " d_r=" << j.d_r
                << " m=" << j.m << " d=" << j.d << " seed=" << j.seed << " "
                << formulation_name(j.f) << ": " << rows[i].st << " (" << rows[i].iter << " it)\n";
    }
  };
  const int threads = thread_budget(cfg.threads, jobs.size());
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  write_text(cfg.output, results_to_json(rows).dump(2) + "\n");
  const std::string table = markdown_table(rows);
  if (!cfg.table.empty()) write_text(cfg.table, table);
  else std::cerr << table;
  const bool crashed = std::any_of(errors.begin(), errors.end(), [](const auto& e) { return !e.empty(); });
  return crashed ? kExitFailed : kExitOk;
}

int run_selftest_command(std::uint64_t seed) {
  const auto results = run_selftest(seed);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << r.worst
              << " tol=" << r.tolerance;
    if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
    std::cout << "\n";
    all = all && r.passed;
  }
  std::cout << (all ? "selftest: all suites passed\n" : "selftest: FAILED\n");
  return all ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial envelope benchmark and cone barrier toolkit"};
  app.require_subcommand(1);

  SolveConfig solve_cfg;
  auto* solve = app.add_subcommand("solve", "Solve one envelope instance and write a JSON result");
  solve->add_option("--n", solve_cfg.n, "Number of variables")->required()->check(CLI::PositiveNumber);
  solve->add_option("--dr", solve_cfg.d_r, "Half-degree of the random polynomials")->required()->check(CLI::PositiveNumber);
  solve->add_option("--d", solve_cfg.d, "Half-degree of the envelope (default: d_r)");
  solve->add_option("--m", solve_cfg.m, "Number of polynomial components")->required();
  solve->add_option("--p", solve_cfg.p, "Norm (1 or 2)")->required()->check(CLI::IsMember({1, 2}));
  solve->add_option("--formulation", solve_cfg.formulation, "sosl2 | sos | sospsd | sosl1 | sos_ext")->required();
  solve->add_option("--seed", solve_cfg.seed, "Seed for points and polynomials");
  solve->add_option("--tol", solve_cfg.tol, "Relative optimality/feasibility tolerance");
  solve->add_option("--time-limit", solve_cfg.time_limit, "Time limit in seconds");
  solve->add_option("--max-iters", solve_cfg.max_iters, "Iteration limit");
  solve->add_option("-o,--output", solve_cfg.output, "Output JSON path (default stdout)");
  solve->add_flag("--zero", solve_cfg.zero, "Use q_2 = ... = q_m = 0");
  solve->add_flag("--verbose", solve_cfg.verbose, "Print solver iterations to stderr");
  solve->add_flag("!--no-instance", solve_cfg.with_instance, "Omit the instance data from the output");

  SweepConfig sweep_cfg;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of instances; write JSON rows and a Markdown table");
  sweep->add_option("--n", sweep_cfg.n, "Number of variables")->check(CLI::PositiveNumber);
  sweep->add_option("--dr", sweep_cfg.d_r, "Comma-separated d_r values")->delimiter(',');
  sweep->add_option("--m", sweep_cfg.m, "Comma-separated m values")->delimiter(',');
  sweep->add_option("--d-mode", sweep_cfg.d_mode, "dr | 2dr | both (p = 2 only)");
  sweep->add_option("--p", sweep_cfg.p, "Norm (1 or 2)")->check(CLI::IsMember({1, 2}));
  sweep->add_option("--formulations", sweep_cfg.formulations, "Comma-separated formulations")->delimiter(',');
  sweep->add_option("--seeds", sweep_cfg.seeds, "Number of seeds per grid point");
  sweep->add_option("--first-seed", sweep_cfg.first_seed, "First seed");
  sweep->add_option("--tol", sweep_cfg.tol, "Relative tolerance");
  sweep->add_option("--time-limit", sweep_cfg.time_limit, "Per-solve time limit in seconds");
  sweep->add_option("--max-iters", sweep_cfg.max_iters, "Iteration limit");
  sweep->add_option("--threads", sweep_cfg.threads, "Worker threads (capped by SOS_CONES_THREADS)");
  sweep->add_option("-o,--output", sweep_cfg.output, "Output JSON path (default stdout)");
  sweep->add_option("--table", sweep_cfg.table, "Markdown table path (default stderr)");

  std::uint64_t selftest_seed = 1;
  auto* selftest = app.add_subcommand("selftest", "Run derivative, homogeneity and membership checks");
  selftest->add_option("--seed", selftest_seed, "Seed for bases and probes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return run_solve(solve_cfg);
    if (*sweep) return run_sweep(sweep_cfg);
    if (*selftest) return run_selftest_command(selftest_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
