#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "niep/altproj.hpp"
#include "niep/diagnostics.hpp"
#include "niep/experiments.hpp"
#include "niep/newton_cg.hpp"

namespace niep::report {

using nlohmann::json;

json matrix_to_json(const Matrix& m);
json spectrum_to_json(const SpectrumSpec& spec);

json to_json(const IterationRecord& rec);
json to_json(const SolverReport& report);
json to_json(const AltProjReport& report);
json to_json(const diagnostics::SolutionVerdict& verdict);
json to_json(const diagnostics::CheckResult& check);
json to_json(const experiments::TrialResult& trial);
json to_json(const experiments::BenchmarkRow& row);

/// Header: problem,algorithm,n,trials,ct_mean_s,it_mean,nf_mean,ncg_mean,res_mean,grad_mean,failures
std::string format_csv(const experiments::BenchmarkResult& result);
/// Rows plus per-trial arrays.
std::string format_json(const experiments::BenchmarkResult& result);
/// Aligned text table; Res carries a trailing '*' when some trial failed.
std::string format_table(const experiments::BenchmarkResult& result);
std::string format(const experiments::BenchmarkResult& result, experiments::OutputFormat fmt);

}  // namespace niep::report
