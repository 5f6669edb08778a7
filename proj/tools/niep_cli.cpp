// Command-line front end: solve one instance, sweep a benchmark, or run the
// derivative/adjoint verification suite.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "niep/altproj.hpp"
#include "niep/diagnostics.hpp"
#include "niep/errors.hpp"
#include "niep/experiments.hpp"
#include "niep/report.hpp"

namespace {

using namespace niep;
using nlohmann::json;

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int n = std::stoi(item, &used);
    if (used != item.size() || n < 1) throw InvalidInput("bad size '" + item + "'");
    sizes.push_back(n);
  }
  if (sizes.empty()) throw InvalidInput("--sizes must list at least one size");
  return sizes;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

struct SolveOptions {
  std::string problem = "niep";
  std::string algorithm = "newton-cg";
  int n = 10;
  std::uint64_t seed = 1;
  std::string spectrum_file;
  double tol = 1e-8;
  int max_outer = 100;
  int max_iter = 100000;
  std::string out;
  std::string write_spectrum;
};

int run_solve(const SolveOptions& opt) {
  const auto kind = experiments::parse_problem(opt.problem);
  const auto algorithm = experiments::parse_algorithm(opt.algorithm);

  ProblemInstance instance;
  json problem_doc = {{"problem", opt.problem}, {"seed", opt.seed}};
  if (!opt.spectrum_file.empty()) {
    if (kind != experiments::ProblemKind::kNiep)
      throw InvalidInput("--spectrum-file supplies a spectrum only; prescribed entries need --problem niep");
    instance = make_niep(read_spectrum_file(opt.spectrum_file));
    problem_doc["spectrum_file"] = opt.spectrum_file;
  } else {
    instance = experiments::make_instance(kind, opt.n, experiments::instance_seed(opt.seed));
  }
  if (!opt.write_spectrum.empty()) write_spectrum_file(opt.write_spectrum, instance.spectrum);
  problem_doc["n"] = instance.n();
  problem_doc["spectrum"] = report::spectrum_to_json(instance.spectrum);
  if (instance.prescribed) {
    json entries = json::array();
    for (const auto& [i, j] : instance.prescribed->entries)
      entries.push_back({i, j, instance.prescribed->c_a(i, j)});
    problem_doc["prescribed_entries"] = entries;
  }

  const auto start = experiments::starting_point(instance, experiments::start_seed(opt.seed));
  json doc = {{"problem", problem_doc}, {"algorithm", opt.algorithm}};
  bool converged = false;
  if (algorithm == experiments::Algorithm::kNewtonCg) {
    SolverConfig config;
    config.tol = opt.tol;
    config.max_outer = opt.max_outer;
    const auto result = solve(instance, start.x0, config);
    converged = result.converged;
    doc["report"] = report::to_json(result);
    doc["C"] = report::matrix_to_json(reconstruct(instance, result.final_point));
    doc["verification"] = report::to_json(diagnostics::verify_solution(instance, result.final_point, 1e-6));
    std::cerr << "newton-cg: " << (converged ? "converged" : "not converged (" + to_string(result.failure) + ")")
              << ", IT " << result.outer_iterations() << ", NF " << result.function_evals << ", NCG "
              << result.total_cg << ", Res " << result.final_residual << ", grad " << result.final_grad_norm
              << ", CT " << result.wall_time << " s\n";
  } else {
    const auto result = altproj_solve(instance, start.c0, opt.tol, opt.max_iter);
    converged = result.converged;
    doc["report"] = report::to_json(result);
    doc["verification"] = report::to_json(diagnostics::verify_matrix(instance, result.final_c, 1e-6));
    std::cerr << "altproj: " << (converged ? "converged" : "not converged (iteration cap)") << ", IT "
              << result.iterations << ", gap " << result.final_gap << ", CT " << result.wall_time << " s\n";
  }
  if (!opt.out.empty()) emit(doc.dump(2) + "\n", opt.out);
  return converged ? 0 : 1;
}

struct BenchOptions {
  std::string problem = "niep";
  std::string algorithm = "newton-cg";
  std::string sizes = "10,20,50,100";
  int trials = 10;
  std::uint64_t base_seed = 2018;
  std::string format = "table";
  int parallel = 1;
  double tol = 1e-8;
  int max_outer = 100;
  int max_iter = 100000;
  std::string out;
};

int run_bench(const BenchOptions& opt) {
  experiments::BenchmarkSpec spec;
  spec.problem = experiments::parse_problem(opt.problem);
  spec.algorithm = experiments::parse_algorithm(opt.algorithm);
  spec.sizes = parse_sizes(opt.sizes);
  spec.trials = opt.trials;
  spec.base_seed = opt.base_seed;
  spec.parallel = opt.parallel;
  spec.solver.tol = opt.tol;
  spec.solver.max_outer = opt.max_outer;
  spec.altproj_tol = opt.tol;
  spec.altproj_max_iter = opt.max_iter;
  const auto fmt = experiments::parse_format(opt.format);

  const auto result = experiments::run_benchmark(spec);
  emit(report::format(result, fmt), opt.out);
  for (const auto& row : result.rows)
    if (row.failures > 0) return 1;
  return 0;
}

struct VerifyOptions {
  std::string sizes = "2,3,5,10";
  int seeds = 25;
  std::uint64_t base_seed = 7;
  std::string out;
};

int run_verify(const VerifyOptions& opt) {
  json checks = json::array();
  bool all_passed = true;
  for (int n : parse_sizes(opt.sizes)) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < opt.seeds; ++i) seeds.push_back(mix_seed(opt.base_seed, static_cast<std::uint64_t>(n * 1000 + i)));
    for (auto kind : {experiments::ProblemKind::kNiep, experiments::ProblemKind::kNiepPe}) {
      const auto instance = experiments::make_instance(kind, n, mix_seed(opt.base_seed, static_cast<std::uint64_t>(n)));
      for (const auto& check : diagnostics::derivative_test_suite(instance, seeds)) {
        all_passed = all_passed && check.passed;
        json j = report::to_json(check);
        j["problem"] = experiments::to_string(kind);
        checks.push_back(std::move(j));
      }
    }
  }
  json doc = {{"passed", all_passed}, {"checks", checks}};
  emit(doc.dump(2) + "\n", opt.out);
  std::cerr << "verify: " << checks.size() << " checks, " << (all_passed ? "all passed" : "FAILURES") << "\n";
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegative inverse eigenvalue problem solver"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one seeded instance (or a spectrum file)");
  solve_cmd->add_option("--problem", solve_opt.problem, "niep | niep-pe")->capture_default_str();
  solve_cmd->add_option("--algorithm", solve_opt.algorithm, "newton-cg | altproj")->capture_default_str();
  solve_cmd->add_option("--n", solve_opt.n, "Problem size for generated instances")->capture_default_str();
  solve_cmd->add_option("--seed", solve_opt.seed, "Seed for instance and starting point")->capture_default_str();
  solve_cmd->add_option("--spectrum-file", solve_opt.spectrum_file, "Prescribed spectrum, one value per line");
  solve_cmd->add_option("--tol", solve_opt.tol, "Stopping tolerance")->capture_default_str();
  solve_cmd->add_option("--max-outer", solve_opt.max_outer, "Newton-CG outer iteration cap")->capture_default_str();
  solve_cmd->add_option("--max-iter", solve_opt.max_iter, "Alternating projection iteration cap")->capture_default_str();
  solve_cmd->add_option("--out", solve_opt.out, "Write the JSON report here ('-' for stdout)");
  solve_cmd->add_option("--write-spectrum", solve_opt.write_spectrum, "Write the canonical spectrum to a file");

  BenchOptions bench_opt;
  auto* bench_cmd = app.add_subcommand("bench", "Seeded benchmark sweep");
  bench_cmd->add_option("--problem", bench_opt.problem, "niep | niep-pe")->capture_default_str();
  bench_cmd->add_option("--algorithm", bench_opt.algorithm, "newton-cg | altproj")->capture_default_str();
  bench_cmd->add_option("--sizes", bench_opt.sizes, "Comma-separated sizes")->capture_default_str();
  bench_cmd->add_option("--trials", bench_opt.trials, "Trials per size")->capture_default_str();
  bench_cmd->add_option("--base-seed", bench_opt.base_seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--format", bench_opt.format, "csv | json | table")->capture_default_str();
  bench_cmd->add_option("--parallel", bench_opt.parallel, "Concurrent trials")->capture_default_str();
  bench_cmd->add_option("--tol", bench_opt.tol, "Stopping tolerance")->capture_default_str();
  bench_cmd->add_option("--max-outer", bench_opt.max_outer, "Newton-CG outer iteration cap")->capture_default_str();
  bench_cmd->add_option("--max-iter", bench_opt.max_iter, "Alternating projection iteration cap")->capture_default_str();
  bench_cmd->add_option("--out", bench_opt.out, "Output file (default stdout)");

  VerifyOptions verify_opt;
  auto* verify_cmd = app.add_subcommand("verify", "Adjoint / finite-difference / invariant checks");
  verify_cmd->add_option("--sizes", verify_opt.sizes, "Comma-separated sizes")->capture_default_str();
  verify_cmd->add_option("--seeds", verify_opt.seeds, "Seeds per size and problem")->capture_default_str();
  verify_cmd->add_option("--base-seed", verify_opt.base_seed, "Base seed")->capture_default_str();
  verify_cmd->add_option("--out", verify_opt.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve_opt);
    if (*bench_cmd) return run_bench(bench_opt);
    if (*verify_cmd) return run_verify(verify_opt);
  } catch (const niep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
