#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "niep/types.hpp"

namespace niep {

using IndexPair = std::pair<int, int>;  // zero-based (row, col)

/// Self-conjugate eigenvalue list in canonical order: conjugate pairs
/// (a + bi, a - bi) with b > 0 first, sorted by (a, b); then reals ascending.
struct SpectrumSpec {
  int n = 0;
  int pairs = 0;  // s
  ComplexList values;
};

/// Canonical block-diagonal carrier of the spectrum and the sparsity data
/// derived from it.
struct LambdaStructure {
  int n = 0;
  Matrix lambda;
  std::vector<IndexPair> fixed;  // I = {(i,j) : i >= j or Lambda_ij != 0}
  std::vector<IndexPair> free;   // J, complement of I
  Matrix w;                      // 1 on J, 0 on I
  long dim_manifold = 0;         // n^2 + n(n-1)/2 + |J|
};

struct PrescribedEntries {
  std::vector<IndexPair> entries;  // L
  Matrix c_a;                      // only entries on L are meaningful
  Matrix u_hat;                    // indicator of L
  Matrix c_hat_a;                  // u_hat .* c_a
};

/// Default conjugate-pairing tolerance: 1e-10 * max(1, max |lambda|).
double default_pair_tolerance(const ComplexList& raw);

/// Pairs every value having |imag| > pair_tol with a conjugate partner
/// (within pair_tol) and snaps pairs to exact conjugate symmetry by
/// averaging. Values with |imag| <= pair_tol become real.
/// Throws UnpairedComplexValue when no partner exists.
SpectrumSpec canonicalize_spectrum(const ComplexList& raw, double pair_tol);
SpectrumSpec canonicalize_spectrum(const ComplexList& raw);

LambdaStructure build_lambda(const SpectrumSpec& spec);

/// Builds U_hat and C_hat_a from the index set L and the anchor matrix C_a.
/// Throws InvalidInput on out-of-range indices or negative prescribed entries.
PrescribedEntries make_prescribed(std::vector<IndexPair> entries, const Matrix& c_a);

// Spectrum text files: one eigenvalue per line, "a" or "a b" (real, imag);
// '#' starts a comment. Values are canonicalized on read.
SpectrumSpec read_spectrum(std::istream& in);
SpectrumSpec read_spectrum_file(const std::string& path);
void write_spectrum(std::ostream& out, const SpectrumSpec& spec);
void write_spectrum_file(const std::string& path, const SpectrumSpec& spec);

}  // namespace niep
