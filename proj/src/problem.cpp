#include "niep/problem.hpp"

#include "niep/errors.hpp"

namespace niep {

Matrix ProblemInstance::s_mask() const {
  if (prescribed) return Matrix::Ones(n(), n()) - prescribed->u_hat;
  return Matrix::Ones(n(), n());
}

Matrix ProblemInstance::anchor() const {
  if (prescribed) return prescribed->c_hat_a;
  return Matrix::Zero(n(), n());
}

long ProblemInstance::manifold_dimension() const {
  long dim = lambda.dim_manifold;
  if (prescribed) dim -= static_cast<long>(prescribed->entries.size());
  return dim;
}

ProblemInstance make_niep(const SpectrumSpec& spectrum) {
  return ProblemInstance{spectrum, build_lambda(spectrum), std::nullopt};
}

ProblemInstance make_niep_pe(const SpectrumSpec& spectrum, PrescribedEntries prescribed) {
  if (prescribed.c_a.rows() != spectrum.n)
    throw InvalidInput("prescribed entries dimension does not match the spectrum");
  return ProblemInstance{spectrum, build_lambda(spectrum), std::move(prescribed)};
}

}  // namespace niep
