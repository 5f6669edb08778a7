#include "niep/newton_cg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "niep/errors.hpp"

namespace niep {

void SolverConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
  if (!in_unit(sigma_max) || !in_unit(eta_bar_max) || !in_unit(eta_hat_max))
    throw InvalidInput("sigma_max, eta_bar_max and eta_hat_max must lie in [0, 1)");
  if (!(t > 0.0 && t < 1.0)) throw InvalidInput("t must lie in (0, 1)");
  if (!(theta_min > 0.0 && theta_min < theta_max && theta_max < 1.0))
    throw InvalidInput("need 0 < theta_min < theta_max < 1");
  if (!(tol > 0.0)) throw InvalidInput("tol must be positive");
  if (max_outer < 0 || max_cg < 0 || max_backtracks < 0) throw InvalidInput("iteration caps must be nonnegative");
}

std::string to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone: return "none";
    case FailureReason::kCgBudgetExhausted: return "cg_budget_exhausted";
    case FailureReason::kBacktrackExhausted: return "backtrack_exhausted";
    case FailureReason::kMaxOuterReached: return "max_outer_reached";
    case FailureReason::kNumerical: return "numerical_failure";
  }
  return "unknown";
}

std::vector<double> SolverReport::residual_trace() const {
  std::vector<double> trace;
  for (const auto& rec : iterations) trace.push_back(rec.residual_norm);
  if (iterations.empty() || iterations.back().step_accepted) trace.push_back(final_residual);
  return trace;
}

NormalEquationSolution solve_normal_equation(const Linearization& lin, const ResidualMatrix& g, double sigma,
                                             double eta_bar, double eta_hat_max, int max_cg) {
  const double g_norm = g.norm();
  NormalEquationSolution out;
  out.dz = ResidualMatrix::Zero(g.rows(), g.cols());
  ResidualMatrix r = -g;
  ResidualMatrix p = r;
  double rr = r.squaredNorm();
  out.shifted_residual = std::sqrt(rr);
  out.unshifted_residual = out.shifted_residual;

  for (int it = 1; it <= max_cg; ++it) {
    const ResidualMatrix ap = lin.normal(p) + sigma * p;
    const double curvature = frobenius_dot(p, ap);
    if (!(curvature > 0.0)) break;
    const double alpha = rr / curvature;
    out.dz += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    out.cg_iterations = it;
    out.shifted_residual = std::sqrt(rr_next);
    out.unshifted_residual = (r + sigma * out.dz).norm();
    if (out.shifted_residual <= eta_bar * g_norm && out.unshifted_residual <= eta_hat_max * g_norm) return out;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  std::ostringstream msg;
  msg << "CG stopped after " << out.cg_iterations << " iterations with shifted residual "
      << out.shifted_residual / g_norm << " and unshifted residual " << out.unshifted_residual / g_norm
      << " (relative to ||G||)";
  throw CgBudgetExhausted(msg.str());
}

Direction compute_direction(const Linearization& lin, const ResidualMatrix& g, const ResidualMatrix& dz) {
  Direction d;
  d.dx = lin.adjoint(dz);
  d.ddx = lin.apply(d.dx);
  d.eta_hat = (d.ddx + g).norm() / g.norm();
  return d;
}

double quadratic_backtrack_factor(double u0, double u1, double du0, double theta_min, double theta_max) {
  const double curvature = u1 - u0 - du0;  // q''/2
  if (!(curvature > 0.0)) return theta_max;
  const double theta = -du0 / (2.0 * curvature);
  return std::min(std::max(theta_min, theta), theta_max);
}

BacktrackResult backtrack(const ProblemInstance& instance, const ManifoldPoint& x, const ResidualMatrix& g,
                          const Direction& direction, const SolverConfig& config) {
  const double g_norm = g.norm();
  const double u0 = g_norm * g_norm;
  const double du0_unit = 2.0 * frobenius_dot(direction.ddx, g);

  BacktrackResult out;
  out.eta = direction.eta_hat;

  auto evaluate = [&](double scale, double& trial_norm) {
    ++out.function_evals;
    try {
      out.next = manifold::retract(x, scale * TangentVector(direction.dx));
    } catch (const SingularInput&) {
      trial_norm = std::numeric_limits<double>::infinity();
      return;
    }
    out.next_residual = residual(instance, out.next);
    trial_norm = out.next_residual.norm();
    if (!std::isfinite(trial_norm)) trial_norm = std::numeric_limits<double>::infinity();
  };

  double trial_norm = 0.0;
  evaluate(1.0, trial_norm);
  while (!(trial_norm <= (1.0 - config.t * (1.0 - out.eta)) * g_norm)) {
    if (out.backtracks >= config.max_backtracks) {
      std::ostringstream msg;
      msg << "no acceptable step after " << out.backtracks << " scalings (step factor " << out.theta_product
          << ")";
      throw BacktrackExhausted(msg.str());
    }
    double theta = config.theta_min;
    if (std::isfinite(trial_norm)) {
      theta = quadratic_backtrack_factor(u0, trial_norm * trial_norm, out.theta_product * du0_unit,
                                         config.theta_min, config.theta_max);
    }
    out.theta_product *= theta;
    out.eta = 1.0 - theta * (1.0 - out.eta);
    ++out.backtracks;
    evaluate(out.theta_product, trial_norm);
  }
  return out;
}

SolverReport solve(const ProblemInstance& instance, const ManifoldPoint& x0, const SolverConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = instance.n();

  SolverReport report;
  ManifoldPoint x = x0;
  ResidualMatrix g = residual(instance, x);
  report.function_evals = 1;
  double g_norm = g.norm();

  auto finish = [&](FailureReason reason, std::string detail) {
    report.failure = reason;
    report.failure_detail = std::move(detail);
  };

  for (int k = 0;; ++k) {
    if (g_norm < config.tol) {
      report.converged = true;
      break;
    }
    if (!std::isfinite(g_norm)) {
      finish(FailureReason::kNumerical, "residual is not finite");
      break;
    }
    if (k >= config.max_outer) {
      finish(FailureReason::kMaxOuterReached, "outer iteration cap reached");
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.residual_norm = g_norm;
    rec.sigma = std::min(config.sigma_max, g_norm);
    rec.eta_bar = std::min(config.eta_bar_max, g_norm);

    const Linearization lin(instance, x);
    try {
      const auto normal = solve_normal_equation(lin, g, rec.sigma, rec.eta_bar, config.eta_hat_max,
                                                config.cg_budget(n));
      rec.cg_iterations = normal.cg_iterations;
      report.total_cg += normal.cg_iterations;

      const Direction direction = compute_direction(lin, g, normal.dz);
      rec.eta_hat = direction.eta_hat;

      const auto step = backtrack(instance, x, g, direction, config);
      report.function_evals += step.function_evals;
      rec.backtracks = step.backtracks;
      rec.eta = step.eta;
      rec.direction_norm = step.theta_product * manifold::norm(x, direction.dx);
      rec.model_residual = (g + step.theta_product * direction.ddx).norm();
      rec.step_accepted = true;

      x = step.next;
      g = step.next_residual;
      g_norm = g.norm();
      rec.next_residual_norm = g_norm;
      report.iterations.push_back(rec);
    } catch (const CgBudgetExhausted& e) {
      report.total_cg += config.cg_budget(n);
      rec.cg_iterations = config.cg_budget(n);
      report.iterations.push_back(rec);
      finish(FailureReason::kCgBudgetExhausted, e.what());
      break;
    } catch (const BacktrackExhausted& e) {
      report.function_evals += config.max_backtracks + 1;
      rec.backtracks = config.max_backtracks;
      report.iterations.push_back(rec);
      finish(FailureReason::kBacktrackExhausted, e.what());
      break;
    } catch (const Error& e) {
      report.iterations.push_back(rec);
      finish(FailureReason::kNumerical, e.what());
      break;
    }
  }

  report.final_point = x;
  report.final_residual = g_norm;
  report.final_grad_norm = manifold::norm(x, apply_adjoint(instance, x, g));
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace niep
