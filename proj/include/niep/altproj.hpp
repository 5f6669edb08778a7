#pragma once

#include "niep/linalg.hpp"
#include "niep/problem.hpp"

namespace niep {

struct AltProjReport {
  bool converged = false;
  int iterations = 0;
  Matrix final_c;
  double final_gap = 0.0;  // ||C^k - Y^k||_F, imaginary part of Y included
  double wall_time = 0.0;
  int complex_events = 0;       // iterations where ||Im Y||_F > 1e-8
  double max_imag_norm = 0.0;   // largest ||Im Y||_F seen
};

struct SpectralProjection {
  Matrix real_part;     // Re(U T' U^H)
  Matrix imag_part;     // Im(U T' U^H)
};

/// Replaces diag(T) by the prescribed eigenvalues under the optimal
/// assignment (squared modulus distance) and reassembles U T' U^H.
SpectralProjection project_spectral(const ComplexMatrix& u, const ComplexMatrix& t, const SpectrumSpec& spec);

/// Entrywise max(Y, 0).
Matrix project_nonneg(const Matrix& y);

/// C_a on L, max(Y, 0) elsewhere.
Matrix project_prescribed(const Matrix& y, const PrescribedEntries& pe);

/// Alternating projection between the isospectral set and the nonnegative
/// orthant (or the prescribed-entries set when the instance has one).
/// Stops once ||C^k - Y^k||_F < tol or after max_iter sweeps.
AltProjReport altproj_solve(const ProblemInstance& instance, const Matrix& c0, double tol = 1e-8,
                            int max_iter = 100000);

}  // namespace niep
