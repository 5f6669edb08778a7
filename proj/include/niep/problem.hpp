#pragma once

#include <optional>

#include "niep/spectrum.hpp"

namespace niep {

/// NIEP data (spectrum carrier Lambda and mask W), optionally with
/// prescribed entries for the NIEP-PE variant.
struct ProblemInstance {
  SpectrumSpec spectrum;
  LambdaStructure lambda;
  std::optional<PrescribedEntries> prescribed;

  int n() const { return lambda.n; }
  bool has_prescribed() const { return prescribed.has_value(); }

  /// Mask of the free S entries: all ones, or 1 - U_hat in the NIEP-PE variant.
  Matrix s_mask() const;
  /// Additive anchor C_hat_a, or zero.
  Matrix anchor() const;
  /// n^2 + n(n-1)/2 + |J|, minus |L| in the NIEP-PE variant.
  long manifold_dimension() const;
};

ProblemInstance make_niep(const SpectrumSpec& spectrum);
ProblemInstance make_niep_pe(const SpectrumSpec& spectrum, PrescribedEntries prescribed);

}  // namespace niep
