#pragma once

#include <vector>

#include "niep/types.hpp"

namespace niep::linalg {

struct QrFactors {
  Matrix q;  // orthogonal
  Matrix r;  // upper triangular, strictly positive diagonal
};

/// QR decomposition normalized so that diag(R) > 0; unique for nonsingular A.
/// Throws SingularInput when min |R_ii| < 1e-12 * ||A||_F.
QrFactors qr_positive(const Matrix& a);

/// The orthogonal factor of qr_positive(a).
Matrix qf(const Matrix& a);

struct RealSchur {
  Matrix q;  // orthogonal
  Matrix t;  // quasi-upper-triangular with 1x1 / 2x2 diagonal blocks
};

struct ComplexSchur {
  ComplexMatrix u;  // unitary
  ComplexMatrix t;  // upper triangular
};

/// A = Q T Q^T. Throws ConvergenceFailure if the QR iteration does not settle.
RealSchur real_schur(const Matrix& a);

/// Reorders the diagonal blocks of a real Schur form in place (T and Q both
/// updated, A = Q T Q^T preserved) so that block eigenvalues follow the order
/// of `target` under the optimal eigenvalue matching. Returns false, leaving a
/// valid but partially reordered factorization, if a swap is rejected as too
/// ill-conditioned or a block changes shape.
bool reorder_real_schur(RealSchur& schur, const ComplexList& target);

/// A = U T U^H over the complex field.
ComplexSchur complex_schur(const Matrix& a);

/// Eigenvalues read off the diagonal blocks of a quasi-triangular matrix.
ComplexList quasi_triangular_eigenvalues(const Matrix& t);

/// Eigenvalues of a real square matrix (via real_schur).
ComplexList eigenvalues(const Matrix& a);

struct Assignment {
  std::vector<int> to;  // u[i] is matched with v[to[i]]
  double cost = 0.0;    // sum_i |u[i] - v[to[i]]|^2
};

/// Exact minimum-cost assignment on a square cost matrix (Hungarian method).
Assignment solve_assignment(const Matrix& cost);

/// Optimal bijection between two equal-size multisets of complex numbers
/// under squared modulus distance.
Assignment match_multisets(const ComplexList& u, const ComplexList& v);

}  // namespace niep::linalg
