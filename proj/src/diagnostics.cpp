#include "niep/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "niep/errors.hpp"
#include "niep/linalg.hpp"

namespace niep::diagnostics {

Eigen::VectorXd vec(const Matrix& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());  // Eigen storage is column-major
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix vec_transpose_matrix(int n) {
  if (n < 1) throw InvalidInput("vec_transpose_matrix: n must be positive");
  const int nn = n * n;
  Matrix p = Matrix::Zero(nn, nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i + j * n, j + i * n) = 1.0;
  return p;
}

Matrix surjectivity_matrix(const ProblemInstance& instance, const ManifoldPoint& x) {
  const int n = instance.n();
  if (n > kMaxSurjectivityDim)
    throw DimensionTooLarge("surjectivity check assembles a 3n^2 x n^2 matrix; n = " + std::to_string(n) +
                            " exceeds " + std::to_string(kMaxSurjectivityDim));
  const int nn = n * n;
  const Matrix identity_n = Matrix::Identity(n, n);
  const Matrix c = reconstruct(instance, x);

  Matrix stacked = Matrix::Zero(3 * nn, nn);
  stacked.topRows(nn) = vec(instance.s_mask().cwiseProduct(x.s)).asDiagonal();
  stacked.middleRows(nn, nn) = (Matrix::Identity(nn, nn) - vec_transpose_matrix(n)) *
                               (kron(c, identity_n) - kron(identity_n, c.transpose()));
  stacked.bottomRows(nn) = vec(instance.lambda.w).asDiagonal() * kron(x.q, x.q).transpose();
  return stacked;
}

int numerical_rank(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank;
  return rank;
}

SurjectivityReport surjectivity_check(const ProblemInstance& instance, const ManifoldPoint& x, double rank_tol) {
  const Matrix stacked = surjectivity_matrix(instance, x);
  SurjectivityReport report;
  report.n = instance.n();
  report.rows = static_cast<int>(stacked.rows());
  report.cols = static_cast<int>(stacked.cols());
  Eigen::BDCSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  report.largest_singular_value = sv(0);
  report.smallest_singular_value = sv(sv.size() - 1);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++report.rank;
  report.surjective = report.rank == report.cols;
  return report;
}

Matrix adjoint_basis_matrix(const ProblemInstance& instance, const ManifoldPoint& x) {
  const int n = instance.n();
  const int nn = n * n;
  const Linearization lin(instance, x);
  Matrix out(3 * nn, nn);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      ResidualMatrix e = ResidualMatrix::Zero(n, n);
      e(i, j) = 1.0;
      const TangentVector t = lin.adjoint(e);
      const int col = i + j * n;
      out.block(0, col, nn, 1) = vec(t.ds);
      out.block(nn, col, nn, 1) = vec(t.dq);
      out.block(2 * nn, col, nn, 1) = vec(t.dv);
    }
  }
  return out;
}

SolutionVerdict verify_solution(const ProblemInstance& instance, const ManifoldPoint& x, double spec_tol) {
  return verify_matrix(instance, reconstruct(instance, x), spec_tol);
}

SolutionVerdict verify_matrix(const ProblemInstance& instance, const Matrix& c, double spec_tol) {
  SolutionVerdict verdict;
  verdict.nonnegative = c.allFinite() && c.minCoeff() >= 0.0;
  verdict.prescribed_exact = true;
  if (instance.prescribed) {
    for (const auto& [i, j] : instance.prescribed->entries)
      if (c(i, j) != instance.prescribed->c_a(i, j)) verdict.prescribed_exact = false;
  }
  if (c.allFinite()) {
    verdict.spectrum_cost = linalg::match_multisets(linalg::eigenvalues(c), instance.spectrum.values).cost;
    verdict.spectrum_ok = verdict.spectrum_cost <= spec_tol;
  } else {
    verdict.spectrum_cost = std::numeric_limits<double>::infinity();
  }
  verdict.passed = verdict.nonnegative && verdict.prescribed_exact && verdict.spectrum_ok;
  return verdict;
}

double adjoint_identity_error(const ProblemInstance& instance, const ManifoldPoint& x, const TangentVector& xi,
                              const ResidualMatrix& dz, const AdjointFn& adjoint) {
  const double lhs = frobenius_dot(apply_differential(instance, x, xi), dz);
  const double rhs = manifold::inner(x, xi, adjoint(instance, x, dz));
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

double default_fd_step(const ManifoldPoint& x, const TangentVector& xi) {
  return 1e-6 * (1.0 + manifold::norm(x, xi));
}

double differential_fd_error(const ProblemInstance& instance, const ManifoldPoint& x, const TangentVector& xi,
                             double h) {
  const ResidualMatrix plus = pullback_residual(instance, x, h * TangentVector(xi));
  const ResidualMatrix minus = pullback_residual(instance, x, -h * TangentVector(xi));
  const ResidualMatrix exact = apply_differential(instance, x, xi);
  const ResidualMatrix fd = (plus - minus) / (2.0 * h);
  return (fd - exact).norm() / std::max(1.0, exact.norm());
}

ManifoldPoint generic_point(const ProblemInstance& instance, std::uint64_t seed) {
  const ManifoldPoint start = manifold::random_point(instance, mix_seed(seed, 101));
  const TangentVector kick = manifold::random_tangent(instance, start, mix_seed(seed, 102));
  return manifold::retract(start, 0.5 * TangentVector(kick));
}

namespace {

double cost(const ProblemInstance& instance, const ManifoldPoint& x) {
  return 0.5 * residual(instance, x).squaredNorm();
}

}  // namespace

std::vector<CheckResult> derivative_test_suite(const ProblemInstance& instance,
                                               const std::vector<std::uint64_t>& seeds, const AdjointFn& adjoint) {
  std::vector<CheckResult> results;
  const int n = instance.n();
  auto record = [&](std::string name, std::uint64_t seed, double value, double threshold) {
    results.push_back({std::move(name), n, seed, value, threshold, value <= threshold});
  };

  for (const auto seed : seeds) {
    const ManifoldPoint x = generic_point(instance, seed);
    const TangentVector xi = manifold::random_tangent(instance, x, mix_seed(seed, 1));
    Rng rng(mix_seed(seed, 2));
    const ResidualMatrix dz = rng.normal_matrix(n, n);

    record("adjoint_identity", seed, adjoint_identity_error(instance, x, xi, dz, adjoint), 1e-11);
    record("differential_fd", seed, differential_fd_error(instance, x, xi, default_fd_step(x, xi)), 1e-5);

    const double h = default_fd_step(x, xi);
    const double fd_slope = (cost(instance, manifold::retract(x, h * TangentVector(xi))) -
                             cost(instance, manifold::retract(x, -h * TangentVector(xi)))) /
                            (2.0 * h);
    const double slope = manifold::inner(x, adjoint(instance, x, residual(instance, x)), xi);
    record("gradient_fd", seed, std::abs(fd_slope - slope) / std::max(1.0, std::abs(slope)), 1e-5);

    const TangentVector adj = adjoint(instance, x, dz);
    const Matrix omega = x.q.transpose() * adj.dq;
    record("adjoint_q_skew", seed, (omega + omega.transpose()).norm() / (1.0 + adj.dq.norm()), 1e-12);
    const double dv_leak = (adj.dv.array() * (1.0 - instance.lambda.w.array())).abs().maxCoeff();
    record("adjoint_v_mask", seed, dv_leak, 0.0);
    const double ds_leak = (adj.ds.array() * (1.0 - instance.s_mask().array())).abs().maxCoeff();
    record("adjoint_s_mask", seed, ds_leak, 0.0);

    const ManifoldPoint same = manifold::retract(x, TangentVector::zero(n));
    const double rigidity = std::max({(same.s - x.s).cwiseAbs().maxCoeff(), (same.v - x.v).cwiseAbs().maxCoeff(),
                                      (same.q - x.q).norm()});
    record("retraction_rigidity", seed, rigidity, 1e-12);

    const ManifoldPoint moved = manifold::retract(x, xi);
    record("retraction_invariants", seed, static_cast<double>(manifold::check_point(instance, moved).size()), 0.0);
  }
  return results;
}

double convergence_order(const std::vector<double>& trace) {
  if (trace.size() < 3) throw TraceTooShort("convergence order needs at least three residuals");
  const double r0 = trace[trace.size() - 3];
  const double r1 = trace[trace.size() - 2];
  const double r2 = trace[trace.size() - 1];
  if (!(r0 > 0.0 && r1 > 0.0 && r2 > 0.0)) throw TraceTooShort("convergence order needs positive residuals");
  return std::log(r2 / r1) / std::log(r1 / r0);
}

}  // namespace niep::diagnostics
