#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "niep/manifold.hpp"
#include "niep/problem.hpp"
#include "niep/residual.hpp"

namespace niep::diagnostics {

/// Column-stacking vectorization: vec(A)[i + j*n] = A(i, j).
Eigen::VectorXd vec(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);

/// The permutation P with vec(A^T) = P vec(A).
Matrix vec_transpose_matrix(int n);

struct SurjectivityReport {
  int n = 0;
  int rows = 0;  // 3 n^2
  int cols = 0;  // n^2
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
  int rank = 0;
  bool surjective = false;
};

inline constexpr int kMaxSurjectivityDim = 40;

/// Stacked matrix whose null space is ker DG(X)^* at a solution point:
///   [ Diag(vec(M .* S))                         ]
///   [ (I - P)((C (x) I) - (I (x) C^T))            ]
///   [ Diag(vec(W)) (Q (x) Q)^T                  ]
/// with C = C_hat_a + S.*S and M the free-S mask. Throws DimensionTooLarge for n > 40.
Matrix surjectivity_matrix(const ProblemInstance& instance, const ManifoldPoint& x);

/// Rank test on surjectivity_matrix with relative tolerance rank_tol.
SurjectivityReport surjectivity_check(const ProblemInstance& instance, const ManifoldPoint& x,
                                      double rank_tol = 1e-10);

/// 3n^2 x n^2 matrix whose columns are DG(X)^*[E_ij] flattened (dS, dQ, dV).
Matrix adjoint_basis_matrix(const ProblemInstance& instance, const ManifoldPoint& x);

/// Numerical rank (singular values above rank_tol * largest).
int numerical_rank(const Matrix& m, double rank_tol = 1e-10);

struct SolutionVerdict {
  bool nonnegative = false;
  bool prescribed_exact = false;  // trivially true without prescribed entries
  double spectrum_cost = 0.0;     // optimal-matching sum of squared distances
  bool spectrum_ok = false;
  bool passed = false;
};

/// Ground-truth check of C = C_hat_a + S.*S: entrywise nonnegativity,
/// bit-exact prescribed entries, and eigenvalues matching the spectrum.
SolutionVerdict verify_solution(const ProblemInstance& instance, const ManifoldPoint& x, double spec_tol);
/// Same checks on an explicit matrix (used for the alternating-projection output).
SolutionVerdict verify_matrix(const ProblemInstance& instance, const Matrix& c, double spec_tol);

using AdjointFn =
    std::function<TangentVector(const ProblemInstance&, const ManifoldPoint&, const ResidualMatrix&)>;

struct CheckResult {
  std::string name;
  int n = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// |<DG[xi], dZ> - <xi, DG^*[dZ]>| over 1 + |<DG[xi], dZ>|.
double adjoint_identity_error(const ProblemInstance& instance, const ManifoldPoint& x, const TangentVector& xi,
                              const ResidualMatrix& dz, const AdjointFn& adjoint = apply_adjoint);

/// ||central difference of G along xi - DG[xi]||_F / max(1, ||DG[xi]||_F).
double differential_fd_error(const ProblemInstance& instance, const ManifoldPoint& x, const TangentVector& xi,
                             double h);

/// Default finite-difference step 1e-6 * (1 + ||xi||).
double default_fd_step(const ManifoldPoint& x, const TangentVector& xi);

/// Random point for derivative checks: a seeded starting point moved along a
/// random tangent so S has mixed signs.
ManifoldPoint generic_point(const ProblemInstance& instance, std::uint64_t seed);

/// Adjoint identity, finite-difference differential and gradient checks,
/// tangency/mask invariants and retraction rigidity for every seed.
std::vector<CheckResult> derivative_test_suite(const ProblemInstance& instance,
                                               const std::vector<std::uint64_t>& seeds,
                                               const AdjointFn& adjoint = apply_adjoint);

/// log(r_{k+1}/r_k) / log(r_k/r_{k-1}) on the final three residuals.
/// Throws TraceTooShort with fewer than three positive entries.
double convergence_order(const std::vector<double>& trace);

}  // namespace niep::diagnostics
