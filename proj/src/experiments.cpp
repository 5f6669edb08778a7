#include "niep/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "niep/diagnostics.hpp"
#include "niep/errors.hpp"
#include "niep/linalg.hpp"

namespace niep::experiments {

std::string to_string(ProblemKind p) { return p == ProblemKind::kNiep ? "niep" : "niep-pe"; }
std::string to_string(Algorithm a) { return a == Algorithm::kNewtonCg ? "newton-cg" : "altproj"; }

ProblemKind parse_problem(const std::string& s) {
  if (s == "niep") return ProblemKind::kNiep;
  if (s == "niep-pe") return ProblemKind::kNiepPe;
  throw InvalidInput("unknown problem '" + s + "' (expected niep or niep-pe)");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "newton-cg") return Algorithm::kNewtonCg;
  if (s == "altproj") return Algorithm::kAltProj;
  throw InvalidInput("unknown algorithm '" + s + "' (expected newton-cg or altproj)");
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  if (s == "table") return OutputFormat::kTable;
  throw InvalidInput("unknown format '" + s + "' (expected csv, json or table)");
}

Example1 generate_example1(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("n must be positive");
  Rng rng(seed);
  Example1 ex;
  ex.c_hat = rng.uniform_matrix(n, n);
  ex.spectrum = canonicalize_spectrum(linalg::eigenvalues(ex.c_hat));
  return ex;
}

Example2 generate_example2(int n, std::uint64_t seed) {
  auto base = generate_example1(n, seed);
  std::vector<IndexPair> entries;
  Matrix c_a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = base.c_hat(i, j);
      if (v >= 0.2 && v <= 0.3) {
        entries.emplace_back(i, j);
        c_a(i, j) = v;
      }
    }
  }
  return {std::move(base.spectrum), make_prescribed(std::move(entries), c_a), std::move(base.c_hat)};
}

ProblemInstance make_instance(ProblemKind kind, int n, std::uint64_t seed) {
  if (kind == ProblemKind::kNiep) return make_niep(generate_example1(n, seed).spectrum);
  auto ex = generate_example2(n, seed);
  return make_niep_pe(ex.spectrum, std::move(ex.prescribed));
}

StartingPoint starting_point(const ProblemInstance& instance, std::uint64_t seed) {
  StartingPoint sp;
  sp.x0 = manifold::random_point(instance, seed);
  sp.c0 = reconstruct(instance, sp.x0);
  return sp;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int n, int trial) {
  return mix_seed(mix_seed(base_seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(trial));
}
std::uint64_t instance_seed(std::uint64_t seed) { return mix_seed(seed, 0); }
std::uint64_t start_seed(std::uint64_t seed) { return mix_seed(seed, 1); }

void BenchmarkSpec::validate() const {
  if (trials < 1) throw InvalidInput("trials must be at least 1");
  if (sizes.empty()) throw InvalidInput("sizes must be nonempty");
  for (int n : sizes)
    if (n < 1) throw InvalidInput("sizes must be positive");
  if (parallel < 1) throw InvalidInput("parallel must be at least 1");
  if (!(altproj_tol > 0.0) || altproj_max_iter < 1) throw InvalidInput("invalid alternating-projection limits");
  solver.validate();
}

bool step_invariants_hold(const SolverReport& report, const SolverConfig& config) {
  for (const auto& rec : report.iterations) {
    if (!rec.step_accepted) continue;
    const double r = rec.residual_norm;
    if (!(rec.next_residual_norm <= (1.0 - config.t * (1.0 - rec.eta)) * r)) return false;
    // The model residual bound is exact in real arithmetic; allow rounding.
    if (!(rec.model_residual <= rec.eta * r * (1.0 + 1e-10) + 1e-14 * r)) return false;
    if (!(rec.sigma <= std::min(config.sigma_max, r) && rec.eta_bar <= std::min(config.eta_bar_max, r)))
      return false;
  }
  return true;
}

TrialResult run_trial(const BenchmarkSpec& spec, int n, int trial) {
  TrialResult out;
  out.n = n;
  out.trial = trial;
  out.seed = trial_seed(spec.base_seed, n, trial);
  out.convergence_order = std::numeric_limits<double>::quiet_NaN();
  out.final_grad_norm = std::numeric_limits<double>::quiet_NaN();
  try {
    const ProblemInstance instance = make_instance(spec.problem, n, instance_seed(out.seed));
    const StartingPoint start = starting_point(instance, start_seed(out.seed));

    diagnostics::SolutionVerdict verdict;
    if (spec.algorithm == Algorithm::kNewtonCg) {
      const SolverReport report = solve(instance, start.x0, spec.solver);
      out.wall_time = report.wall_time;
      out.outer_iters = report.outer_iterations();
      out.function_evals = report.function_evals;
      out.cg_iters = report.total_cg;
      out.final_residual = report.final_residual;
      out.final_grad_norm = report.final_grad_norm;
      out.converged = report.converged;
      out.failure = report.converged ? "" : to_string(report.failure);
      for (const auto& rec : report.iterations) out.total_backtracks += rec.backtracks;
      out.step_invariants_ok = step_invariants_hold(report, spec.solver);
      out.residual_trace = report.residual_trace();
      if (out.residual_trace.size() >= 3) {
        try {
          out.convergence_order = diagnostics::convergence_order(out.residual_trace);
        } catch (const TraceTooShort&) {
        }
      }
      verdict = diagnostics::verify_solution(instance, report.final_point, spec.verify_tol);
    } else {
      const AltProjReport report = altproj_solve(instance, start.c0, spec.altproj_tol, spec.altproj_max_iter);
      out.wall_time = report.wall_time;
      out.outer_iters = report.iterations;
      out.final_residual = report.final_gap;
      out.converged = report.converged;
      out.failure = report.converged ? "" : "max_iter_reached";
      verdict = diagnostics::verify_matrix(instance, report.final_c, spec.verify_tol);
    }
    out.spectrum_cost = verdict.spectrum_cost;
    out.nonnegative = verdict.nonnegative;
    out.prescribed_exact = verdict.prescribed_exact;
    out.verified = verdict.passed;
  } catch (const std::exception& e) {
    out.converged = false;
    out.failure = std::string("error: ") + e.what();
  }
  return out;
}

BenchmarkRow aggregate(const BenchmarkSpec& spec, int n, const std::vector<TrialResult>& trials) {
  BenchmarkRow row;
  row.problem = spec.problem;
  row.algorithm = spec.algorithm;
  row.n = n;
  row.trials = static_cast<int>(trials.size());
  if (trials.empty()) return row;
  for (const auto& t : trials) {
    row.ct_mean += t.wall_time;
    row.it_mean += t.outer_iters;
    row.nf_mean += t.function_evals;
    row.ncg_mean += t.cg_iters;
    row.res_mean += t.final_residual;
    row.grad_mean += t.final_grad_norm;
    if (!t.converged) ++row.failures;
  }
  const double k = static_cast<double>(trials.size());
  row.ct_mean /= k;
  row.it_mean /= k;
  row.nf_mean /= k;
  row.ncg_mean /= k;
  row.res_mean /= k;
  row.grad_mean /= k;
  return row;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  BenchmarkResult result;
  result.spec = spec;
  const auto sizes = spec.sizes.size();
  const auto per_size = static_cast<std::size_t>(spec.trials);
  std::vector<TrialResult> flat(sizes * per_size);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < flat.size(); task = next++) {
      const int n = spec.sizes[task / per_size];
      flat[task] = run_trial(spec, n, static_cast<int>(task % per_size));
    }
  };
  const int threads = std::min<int>(spec.parallel, static_cast<int>(flat.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t s = 0; s < sizes; ++s) {
    std::vector<TrialResult> group(flat.begin() + static_cast<std::ptrdiff_t>(s * per_size),
                                   flat.begin() + static_cast<std::ptrdiff_t>((s + 1) * per_size));
    result.rows.push_back(aggregate(spec, spec.sizes[s], group));
    result.trials.push_back(std::move(group));
  }
  return result;
}

}  // namespace niep::experiments
