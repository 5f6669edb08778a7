#include "niep/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace niep::report {

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(const char* pattern, double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json spectrum_to_json(const SpectrumSpec& spec) {
  json values = json::array();
  for (const auto& z : spec.values) values.push_back({z.real(), z.imag()});
  return {{"n", spec.n}, {"pairs", spec.pairs}, {"values", values}};
}

json to_json(const IterationRecord& rec) {
  return {{"k", rec.k},
          {"residual_norm", rec.residual_norm},
          {"next_residual_norm", rec.next_residual_norm},
          {"sigma", rec.sigma},
          {"eta_bar", rec.eta_bar},
          {"eta_hat", rec.eta_hat},
          {"eta", rec.eta},
          {"model_residual", rec.model_residual},
          {"cg_iterations", rec.cg_iterations},
          {"backtracks", rec.backtracks},
          {"direction_norm", rec.direction_norm},
          {"step_accepted", rec.step_accepted}};
}

json to_json(const SolverReport& report) {
  json iterations = json::array();
  for (const auto& rec : report.iterations) iterations.push_back(to_json(rec));
  return {{"converged", report.converged},
          {"failure", to_string(report.failure)},
          {"failure_detail", report.failure_detail},
          {"outer_iterations", report.outer_iterations()},
          {"function_evals", report.function_evals},
          {"total_cg", report.total_cg},
          {"final_residual", report.final_residual},
          {"final_grad_norm", report.final_grad_norm},
          {"wall_time_s", report.wall_time},
          {"iterations", iterations},
          {"final_point",
           {{"S", matrix_to_json(report.final_point.s)},
            {"Q", matrix_to_json(report.final_point.q)},
            {"V", matrix_to_json(report.final_point.v)}}}};
}

json to_json(const AltProjReport& report) {
  return {{"converged", report.converged},
          {"iterations", report.iterations},
          {"final_gap", report.final_gap},
          {"wall_time_s", report.wall_time},
          {"complex_events", report.complex_events},
          {"max_imag_norm", report.max_imag_norm},
          {"C", matrix_to_json(report.final_c)}};
}

json to_json(const diagnostics::SolutionVerdict& verdict) {
  return {{"nonnegative", verdict.nonnegative},
          {"prescribed_exact", verdict.prescribed_exact},
          {"spectrum_cost", number_or_null(verdict.spectrum_cost)},
          {"spectrum_ok", verdict.spectrum_ok},
          {"passed", verdict.passed}};
}

json to_json(const diagnostics::CheckResult& check) {
  return {{"name", check.name},     {"n", check.n},         {"seed", check.seed},
          {"value", check.value},   {"threshold", check.threshold}, {"passed", check.passed}};
}

json to_json(const experiments::TrialResult& t) {
  return {{"n", t.n},
          {"trial", t.trial},
          {"seed", t.seed},
          {"wall_time_s", t.wall_time},
          {"it", t.outer_iters},
          {"nf", t.function_evals},
          {"ncg", t.cg_iters},
          {"res", t.final_residual},
          {"grad", number_or_null(t.final_grad_norm)},
          {"converged", t.converged},
          {"failure", t.failure},
          {"backtracks", t.total_backtracks},
          {"step_invariants_ok", t.step_invariants_ok},
          {"residual_trace", t.residual_trace},
          {"convergence_order", number_or_null(t.convergence_order)},
          {"spectrum_cost", number_or_null(t.spectrum_cost)},
          {"nonnegative", t.nonnegative},
          {"prescribed_exact", t.prescribed_exact},
          {"verified", t.verified}};
}

json to_json(const experiments::BenchmarkRow& row) {
  return {{"problem", experiments::to_string(row.problem)},
          {"algorithm", experiments::to_string(row.algorithm)},
          {"n", row.n},
          {"trials", row.trials},
          {"ct_mean_s", row.ct_mean},
          {"it_mean", row.it_mean},
          {"nf_mean", row.nf_mean},
          {"ncg_mean", row.ncg_mean},
          {"res_mean", number_or_null(row.res_mean)},
          {"grad_mean", number_or_null(row.grad_mean)},
          {"failures", row.failures},
          {"flag", row.failures > 0 ? "*" : ""}};
}

std::string format_csv(const experiments::BenchmarkResult& result) {
  std::ostringstream out;
  out << "problem,algorithm,n,trials,ct_mean_s,it_mean,nf_mean,ncg_mean,res_mean,grad_mean,failures\n";
  for (const auto& row : result.rows) {
    out << experiments::to_string(row.problem) << ',' << experiments::to_string(row.algorithm) << ',' << row.n
        << ',' << row.trials << ',' << fmt("%.6g", row.ct_mean) << ',' << fmt("%.6g", row.it_mean) << ','
        << fmt("%.6g", row.nf_mean) << ',' << fmt("%.6g", row.ncg_mean) << ',' << fmt("%.6e", row.res_mean) << ','
        << fmt("%.6e", row.grad_mean) << ',' << row.failures << '\n';
  }
  return out.str();
}

std::string format_json(const experiments::BenchmarkResult& result) {
  json rows = json::array();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    json row = to_json(result.rows[i]);
    json trials = json::array();
    for (const auto& t : result.trials[i]) trials.push_back(to_json(t));
    row["trial_results"] = std::move(trials);
    rows.push_back(std::move(row));
  }
  json doc = {{"problem", experiments::to_string(result.spec.problem)},
              {"algorithm", experiments::to_string(result.spec.algorithm)},
              {"base_seed", result.spec.base_seed},
              {"trials", result.spec.trials},
              {"rows", rows}};
  return doc.dump(2) + "\n";
}

std::string format_table(const experiments::BenchmarkResult& result) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %5s %12s %9s %8s %9s %13s %12s\n", "Alg.", "n", "CT.", "IT.", "NF.",
                "NCG.", "Res.", "grad.");
  out << line;
  for (const auto& row : result.rows) {
    const bool newton = row.algorithm == experiments::Algorithm::kNewtonCg;
    std::string res = fmt("%.2e", row.res_mean) + (row.failures > 0 ? "*" : "");
    std::snprintf(line, sizeof line, "%-10s %5d %10.4f s %9.1f %8s %9s %13s %12s\n",
                  experiments::to_string(row.algorithm).c_str(), row.n, row.ct_mean, row.it_mean,
                  newton ? fmt("%.1f", row.nf_mean).c_str() : "", newton ? fmt("%.1f", row.ncg_mean).c_str() : "",
                  res.c_str(), fmt("%.2e", row.grad_mean).c_str());
    out << line;
  }
  return out.str();
}

std::string format(const experiments::BenchmarkResult& result, experiments::OutputFormat f) {
  switch (f) {
    case experiments::OutputFormat::kCsv: return format_csv(result);
    case experiments::OutputFormat::kJson: return format_json(result);
    case experiments::OutputFormat::kTable: return format_table(result);
  }
  return {};
}

}  // namespace niep::report
