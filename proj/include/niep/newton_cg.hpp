#pragma once

#include <optional>
#include <string>
#include <vector>

#include "niep/manifold.hpp"
#include "niep/problem.hpp"
#include "niep/residual.hpp"

namespace niep {

struct SolverConfig {
  double sigma_max = 0.01;    // shift cap
  double eta_bar_max = 0.1;   // shifted-residual forcing cap
  double eta_hat_max = 0.9;   // unshifted-residual forcing cap
  double t = 1e-4;            // sufficient-decrease parameter
  double theta_min = 0.1;
  double theta_max = 0.9;
  double tol = 1e-8;
  int max_outer = 100;
  int max_cg = 0;             // 0 means n^2
  int max_backtracks = 60;

  int cg_budget(int n) const { return max_cg > 0 ? max_cg : n * n; }
  /// Throws InvalidInput when a parameter is outside its admissible range.
  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double residual_norm = 0.0;       // ||G(X^k)||_F
  double next_residual_norm = 0.0;  // ||G(X^{k+1})||_F
  double sigma = 0.0;
  double eta_bar = 0.0;
  double eta_hat = 0.0;
  double eta = 0.0;                 // after backtracking
  double model_residual = 0.0;      // ||G(X^k) + DG(X^k)[dX^k]||_F
  int cg_iterations = 0;
  int backtracks = 0;
  double direction_norm = 0.0;      // ||dX^k|| after scaling
  bool step_accepted = false;
};

enum class FailureReason { kNone, kCgBudgetExhausted, kBacktrackExhausted, kMaxOuterReached, kNumerical };

std::string to_string(FailureReason reason);

struct SolverReport {
  bool converged = false;
  std::vector<IterationRecord> iterations;
  ManifoldPoint final_point;
  double final_residual = 0.0;
  double final_grad_norm = 0.0;
  int total_cg = 0;
  int function_evals = 0;  // NF: 1 initial + 1 per outer step + 1 per repeat-loop pass
  double wall_time = 0.0;  // seconds
  FailureReason failure = FailureReason::kNone;
  std::string failure_detail;

  int outer_iterations() const { return static_cast<int>(iterations.size()); }
  /// ||G|| at every iterate, starting from X^0.
  std::vector<double> residual_trace() const;
};

struct NormalEquationSolution {
  ResidualMatrix dz;
  int cg_iterations = 0;
  double shifted_residual = 0.0;    // ||(A + sigma I) dZ + G||_F, recursive
  double unshifted_residual = 0.0;  // ||A dZ + G||_F, recursive
};

/// CG from dZ = 0 on (DG o DG^* + sigma I)[dZ] = -G, stopping at the first
/// iterate meeting both ||(A+sigma)dZ + G|| <= eta_bar ||G|| and
/// ||A dZ + G|| <= eta_hat_max ||G||. The unshifted residual is tracked as
/// ||r + sigma dZ|| with r the CG residual. Throws CgBudgetExhausted.
NormalEquationSolution solve_normal_equation(const Linearization& lin, const ResidualMatrix& g, double sigma,
                                             double eta_bar, double eta_hat_max, int max_cg);

struct Direction {
  TangentVector dx;
  ResidualMatrix ddx;  // DG(X)[dx]
  double eta_hat = 0.0;
};

/// dX = DG^*[dZ] and eta_hat = ||DG[dX] + G|| / ||G||.
Direction compute_direction(const Linearization& lin, const ResidualMatrix& g, const ResidualMatrix& dz);

/// Minimizer of the quadratic model through u(0), u'(0), u(1), clamped to
/// [theta_min, theta_max]; theta_max when the model is not convex.
double quadratic_backtrack_factor(double u0, double u1, double du0, double theta_min, double theta_max);

struct BacktrackResult {
  ManifoldPoint next;
  ResidualMatrix next_residual;
  double eta = 0.0;
  double theta_product = 1.0;
  int backtracks = 0;  // number of repeat-loop passes
  int function_evals = 0;
};

/// Repeat-loop of the damped step: scale the direction until
/// ||G(R_X(dX))|| <= (1 - t(1 - eta)) ||G(X)||. Throws BacktrackExhausted.
BacktrackResult backtrack(const ProblemInstance& instance, const ManifoldPoint& x, const ResidualMatrix& g,
                          const Direction& direction, const SolverConfig& config);

/// Riemannian inexact Newton-CG. Failures are reported, not thrown.
SolverReport solve(const ProblemInstance& instance, const ManifoldPoint& x0, const SolverConfig& config = {});

}  // namespace niep
