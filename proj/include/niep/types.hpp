#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace niep {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;
using ComplexList = std::vector<Complex>;

// Element of T_{G(X)} R^{n x n}; also the unknown of the normal equation.
using ResidualMatrix = Matrix;

// Frobenius inner product <A, B> = tr(A^T B).
inline double frobenius_dot(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

// Seeded generator: the mt19937_64 stream (fully specified by the standard),
// uniforms built from the top 53 bits so they are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() { return normal_(engine_); }

  Matrix uniform_matrix(int rows, int cols);
  Matrix normal_matrix(int rows, int cols);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// SplitMix64 finalizer; mixes a seed with a tag deterministically.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace niep
