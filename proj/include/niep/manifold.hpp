#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "niep/problem.hpp"
#include "niep/types.hpp"

namespace niep {

/// Point (S, Q, V) on R^{n x n} x O(n) x V, or Z x O(n) x V when the
/// instance carries prescribed entries.
struct ManifoldPoint {
  Matrix s;
  Matrix q;
  Matrix v;
};

/// Tangent triple in ambient form: dQ = Q * Omega with Omega skew.
struct TangentVector {
  Matrix ds;
  Matrix dq;
  Matrix dv;

  static TangentVector zero(int n);
  TangentVector& operator+=(const TangentVector& o);
  TangentVector& operator*=(double a);
};

TangentVector operator+(TangentVector a, const TangentVector& b);
TangentVector operator*(double a, TangentVector x);

namespace manifold {

inline constexpr double kOrthoTol = 1e-10;

/// Product metric tr(dS1^T dS2) + tr(dQ1^T dQ2) + tr(dV1^T dV2).
/// The base point is unused; the metric is the restricted ambient one.
double inner(const ManifoldPoint& base, const TangentVector& xi, const TangentVector& zeta);
double norm(const ManifoldPoint& base, const TangentVector& xi);

/// (S + dS, qf(Q + dQ), V + dV). Throws SingularInput from qf.
ManifoldPoint retract(const ManifoldPoint& base, const TangentVector& xi);

/// Seeded starting point: S .* S uniform on [0,1) (masked off L in the
/// NIEP-PE variant), Q and V from the real Schur form of C0 = C_hat_a + S .* S,
/// V masked by W.
ManifoldPoint random_point(const ProblemInstance& instance, std::uint64_t seed);

/// Gaussian tangent vector satisfying every tangency constraint at base.
TangentVector random_tangent(const ProblemInstance& instance, const ManifoldPoint& base,
                             std::uint64_t seed);

/// Violations of the point invariants; empty when the point is valid.
std::vector<std::string> check_point(const ProblemInstance& instance, const ManifoldPoint& x,
                                     double ortho_tol = kOrthoTol);

/// Violations of the tangency invariants at base; empty when valid.
std::vector<std::string> check_tangent(const ProblemInstance& instance, const ManifoldPoint& base,
                                       const TangentVector& xi, double skew_tol = 1e-10);

/// Number of free real parameters in a tangent vector.
long tangent_dimension(const ProblemInstance& instance);

}  // namespace manifold
}  // namespace niep
