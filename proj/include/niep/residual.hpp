#pragma once

#include "niep/manifold.hpp"
#include "niep/problem.hpp"

namespace niep {

/// G(S,Q,V) = S.*S - Q(Lambda+V)Q^T, or H = C_hat_a + S.*S - Q(Lambda+V)Q^T
/// when the instance has prescribed entries.
ResidualMatrix residual(const ProblemInstance& instance, const ManifoldPoint& x);

/// The differential and its adjoint frozen at one point. Caches
/// A = Q(Lambda+V)Q^T so repeated applications (inner CG) cost only
/// matrix products.
class Linearization {
 public:
  Linearization(const ProblemInstance& instance, const ManifoldPoint& x);

  /// DG(X)[xi] = 2 S.*dS + [A, dQ Q^T] - Q dV Q^T.
  ResidualMatrix apply(const TangentVector& xi) const;

  /// DG(X)^*[dZ] = (2 S.*dZ,
  ///                1/2 ([A, dZ^T] + [A^T, dZ]) Q,
  ///                -W .* (Q^T dZ Q)).
  /// In the NIEP-PE variant the S-component is additionally masked off L.
  TangentVector adjoint(const ResidualMatrix& dz) const;

  /// DG(X) o DG(X)^* [dZ].
  ResidualMatrix normal(const ResidualMatrix& dz) const { return apply(adjoint(dz)); }

  const Matrix& isospectral_part() const { return a_; }

 private:
  const ProblemInstance* instance_;
  ManifoldPoint x_;
  Matrix a_;
  Matrix s_mask_;
};

ResidualMatrix apply_differential(const ProblemInstance& instance, const ManifoldPoint& x,
                                  const TangentVector& xi);
TangentVector apply_adjoint(const ProblemInstance& instance, const ManifoldPoint& x, const ResidualMatrix& dz);

/// Riemannian gradient of 1/2 ||G||_F^2: DG(X)^*[G(X)].
TangentVector gradient_cost(const ProblemInstance& instance, const ManifoldPoint& x);

/// G(R_X(xi)).
ResidualMatrix pullback_residual(const ProblemInstance& instance, const ManifoldPoint& x,
                                 const TangentVector& xi);

/// C = C_hat_a + S.*S, the nonnegative matrix a point represents.
Matrix reconstruct(const ProblemInstance& instance, const ManifoldPoint& x);

}  // namespace niep
