#include "niep/altproj.hpp"

#include <chrono>
#include <cmath>

#include "niep/errors.hpp"

namespace niep {

SpectralProjection project_spectral(const ComplexMatrix& u, const ComplexMatrix& t, const SpectrumSpec& spec) {
  const auto n = t.rows();
  if (n != spec.n) throw InvalidInput("project_spectral: dimension mismatch");
  ComplexList diag(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = t(i, i);
  const auto match = linalg::match_multisets(diag, spec.values);

  ComplexMatrix t_new = t.triangularView<Eigen::StrictlyUpper>();
  for (Eigen::Index i = 0; i < n; ++i) t_new(i, i) = spec.values[static_cast<std::size_t>(match.to[static_cast<std::size_t>(i)])];
  const ComplexMatrix y = u * t_new * u.adjoint();
  return {y.real(), y.imag()};
}

Matrix project_nonneg(const Matrix& y) { return y.cwiseMax(0.0); }

Matrix project_prescribed(const Matrix& y, const PrescribedEntries& pe) {
  Matrix c = project_nonneg(y);
  for (const auto& [i, j] : pe.entries) c(i, j) = pe.c_a(i, j);
  return c;
}

AltProjReport altproj_solve(const ProblemInstance& instance, const Matrix& c0, double tol, int max_iter) {
  const auto start = std::chrono::steady_clock::now();
  if (c0.rows() != instance.n() || c0.cols() != instance.n()) throw InvalidInput("altproj: C0 has wrong size");
  if (!c0.allFinite() || c0.minCoeff() < 0.0) throw InvalidInput("altproj: C0 must be finite and nonnegative");

  if (instance.prescribed)
    for (const auto& [i, j] : instance.prescribed->entries)
      if (c0(i, j) != instance.prescribed->c_a(i, j))
        throw InvalidInput("altproj: C0 must carry the prescribed entries");

  AltProjReport report;
  Matrix c = c0;
  for (int k = 0; k < max_iter; ++k) {
    const auto schur = linalg::complex_schur(c);
    const auto y = project_spectral(schur.u, schur.t, instance.spectrum);
    const double imag_norm = y.imag_part.norm();
    report.max_imag_norm = std::max(report.max_imag_norm, imag_norm);
    if (imag_norm > 1e-8) ++report.complex_events;

    c = instance.prescribed ? project_prescribed(y.real_part, *instance.prescribed) : project_nonneg(y.real_part);
    const double real_gap = (c - y.real_part).norm();
    report.final_gap = std::sqrt(real_gap * real_gap + imag_norm * imag_norm);
    report.iterations = k + 1;
    if (report.final_gap < tol) {
      report.converged = true;
      break;
    }
  }
  report.final_c = c;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace niep
