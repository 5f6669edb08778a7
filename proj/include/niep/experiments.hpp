#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "niep/altproj.hpp"
#include "niep/manifold.hpp"
#include "niep/newton_cg.hpp"
#include "niep/problem.hpp"

namespace niep::experiments {

enum class ProblemKind { kNiep, kNiepPe };
enum class Algorithm { kNewtonCg, kAltProj };
enum class OutputFormat { kCsv, kJson, kTable };

std::string to_string(ProblemKind p);
std::string to_string(Algorithm a);
ProblemKind parse_problem(const std::string& s);
Algorithm parse_algorithm(const std::string& s);
OutputFormat parse_format(const std::string& s);

struct Example1 {
  SpectrumSpec spectrum;
  Matrix c_hat;  // hidden nonnegative matrix carrying the spectrum
};

struct Example2 {
  SpectrumSpec spectrum;
  PrescribedEntries prescribed;
  Matrix c_hat;
};

/// C_hat uniform on [0,1) entrywise; the spectrum is its eigenvalue list.
Example1 generate_example1(int n, std::uint64_t seed);

/// Same C_hat as generate_example1(n, seed); L = {(i,j) : 0.2 <= C_hat_ij <= 0.3},
/// C_a = C_hat on L and 0 elsewhere.
Example2 generate_example2(int n, std::uint64_t seed);

ProblemInstance make_instance(ProblemKind kind, int n, std::uint64_t seed);

struct StartingPoint {
  ManifoldPoint x0;
  Matrix c0;  // C_hat_a + S0 .* S0, the alternating-projection start
};

StartingPoint starting_point(const ProblemInstance& instance, std::uint64_t seed);

/// Seeds of trial `trial` at size n: order-independent hash of (base, n, trial).
std::uint64_t trial_seed(std::uint64_t base_seed, int n, int trial);
std::uint64_t instance_seed(std::uint64_t trial_seed);
std::uint64_t start_seed(std::uint64_t trial_seed);

struct BenchmarkSpec {
  ProblemKind problem = ProblemKind::kNiep;
  Algorithm algorithm = Algorithm::kNewtonCg;
  std::vector<int> sizes{10, 20, 50, 100};
  int trials = 10;
  std::uint64_t base_seed = 2018;
  SolverConfig solver;
  double altproj_tol = 1e-8;
  int altproj_max_iter = 100000;
  int parallel = 1;
  double verify_tol = 1e-6;

  void validate() const;
};

struct TrialResult {
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
  int outer_iters = 0;       // IT
  int function_evals = 0;    // NF (Newton-CG only)
  int cg_iters = 0;          // NCG (Newton-CG only)
  double final_residual = 0.0;
  double final_grad_norm = 0.0;  // NaN for the alternating projection
  bool converged = false;
  std::string failure;
  int total_backtracks = 0;
  bool step_invariants_ok = true;  // sufficient decrease and model residual at every step
  std::vector<double> residual_trace;
  double convergence_order = 0.0;  // NaN when the trace is too short
  double spectrum_cost = 0.0;
  bool nonnegative = false;
  bool prescribed_exact = false;
  bool verified = false;
};

struct BenchmarkRow {
  ProblemKind problem = ProblemKind::kNiep;
  Algorithm algorithm = Algorithm::kNewtonCg;
  int n = 0;
  int trials = 0;
  double ct_mean = 0.0;
  double it_mean = 0.0;
  double nf_mean = 0.0;
  double ncg_mean = 0.0;
  double res_mean = 0.0;
  double grad_mean = 0.0;
  int failures = 0;
};

struct BenchmarkResult {
  BenchmarkSpec spec;
  std::vector<BenchmarkRow> rows;
  std::vector<std::vector<TrialResult>> trials;  // per row, in trial order
};

/// Newton-CG run on one seeded trial, with certification.
TrialResult run_trial(const BenchmarkSpec& spec, int n, int trial);

/// All trials for every size; failing trials are recorded, never thrown.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

BenchmarkRow aggregate(const BenchmarkSpec& spec, int n, const std::vector<TrialResult>& trials);

/// Step-wise checks on a Newton-CG report: sufficient decrease and linear
/// model residual bounded by eta_k ||G||.
bool step_invariants_hold(const SolverReport& report, const SolverConfig& config);

}  // namespace niep::experiments
