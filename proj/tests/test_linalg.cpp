#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "niep/errors.hpp"
#include "niep/linalg.hpp"
#include "test_util.hpp"

using namespace niep;
using namespace niep::linalg;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

double orthogonality_error(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.rows(), q.cols())).norm();
}

bool is_quasi_triangular(const Matrix& t) {
  const Eigen::Index n = t.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 2; i < n; ++i)
      if (t(i, j) != 0.0) return false;
  // No two consecutive nonzero subdiagonal entries.
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    if (t(i, i - 1) != 0.0 && t(i + 1, i) != 0.0) return false;
  return true;
}

bool contains(const ComplexList& list, Complex z, double tol) {
  for (const auto& v : list)
    if (std::abs(v - z) <= tol) return true;
  return false;
}

}  // namespace

TEST(Qf, IdentityIsFixed) {
  const auto f = qr_positive(Matrix::Identity(2, 2));
  EXPECT_NEAR((f.q - Matrix::Identity(2, 2)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.r - Matrix::Identity(2, 2)).norm(), 0.0, 1e-15);
}

TEST(Qf, ColumnSwap) {
  const Matrix a = mat2(0, 1, 1, 0);
  const auto f = qr_positive(a);
  EXPECT_NEAR((f.q - a).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.r - Matrix::Identity(2, 2)).norm(), 0.0, 1e-15);
}

TEST(Qf, UpperTriangularInput) {
  const Matrix a = mat2(1, 1, 0, 1);
  const auto f = qr_positive(a);
  EXPECT_NEAR((f.q - Matrix::Identity(2, 2)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.r - a).norm(), 0.0, 1e-15);
}

TEST(Qf, RandomFactorization) {
  Rng rng(11);
  for (int n : {1, 2, 5, 17}) {
    const Matrix a = rng.normal_matrix(n, n);
    const auto f = qr_positive(a);
    EXPECT_LE((f.q * f.r - a).norm(), 1e-12 * a.norm());
    EXPECT_LE(orthogonality_error(f.q), 1e-13 * n);
    for (int i = 0; i < n; ++i) {
      EXPECT_GT(f.r(i, i), 0.0);
      for (int j = 0; j < i; ++j) EXPECT_EQ(f.r(i, j), 0.0);
    }
  }
}

TEST(Qf, IdempotentOnOrthogonal) {
  Rng rng(12);
  for (int n : {2, 4, 9}) {
    const Matrix q = qf(rng.normal_matrix(n, n));
    const auto f = qr_positive(q);
    EXPECT_LE((f.q - q).norm(), 1e-12);
    EXPECT_LE((f.r - Matrix::Identity(n, n)).norm(), 1e-12);
  }
}

TEST(Qf, SingularInputThrows) {
  EXPECT_THROW(qr_positive(mat2(1, 2, 2, 4)), SingularInput);
  EXPECT_THROW(qr_positive(Matrix::Zero(3, 3)), SingularInput);
}

TEST(Qf, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(qr_positive(Matrix::Ones(2, 3)), InvalidInput);
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(qr_positive(a), InvalidInput);
}

TEST(RealSchur, DiagonalInput) {
  const auto s = real_schur(mat2(1, 0, 0, 2));
  EXPECT_NEAR(s.t(1, 0), 0.0, 1e-15);
  EXPECT_TRUE(contains({s.t(0, 0), s.t(1, 1)}, 1.0, 1e-14));
  EXPECT_TRUE(contains({s.t(0, 0), s.t(1, 1)}, 2.0, 1e-14));
  EXPECT_LE(orthogonality_error(s.q), 1e-14);
}

TEST(RealSchur, SymmetricSwap) {
  const Matrix a = mat2(0, 1, 1, 0);
  const auto s = real_schur(a);
  const ComplexList d{s.t(0, 0), s.t(1, 1)};
  EXPECT_TRUE(contains(d, 1.0, 1e-14));
  EXPECT_TRUE(contains(d, -1.0, 1e-14));
  EXPECT_LE((s.q * s.t * s.q.transpose() - a).norm(), 1e-14);
}

TEST(RealSchur, ComplexPairBlock) {
  const Matrix a = mat2(1, 2, -2, 1);
  const auto s = real_schur(a);
  EXPECT_TRUE(is_quasi_triangular(s.t));
  EXPECT_LE((s.q * s.t * s.q.transpose() - a).norm(), 1e-14);
  const auto ev = quasi_triangular_eigenvalues(s.t);
  EXPECT_TRUE(contains(ev, {1, 2}, 1e-13));
  EXPECT_TRUE(contains(ev, {1, -2}, 1e-13));
}

TEST(RealSchur, ReconstructionOnRandomMatrices) {
  Rng rng(13);
  for (int n : {1, 2, 3, 7, 20, 50}) {
    const Matrix a = rng.uniform_matrix(n, n);
    const auto s = real_schur(a);
    EXPECT_LE((s.q * s.t * s.q.transpose() - a).norm(), 1e-10 * a.norm()) << "n=" << n;
    EXPECT_LE(orthogonality_error(s.q), 1e-12 * n) << "n=" << n;
    EXPECT_TRUE(is_quasi_triangular(s.t)) << "n=" << n;
  }
}

TEST(RealSchur, Deterministic) {
  Rng rng(14);
  const Matrix a = rng.normal_matrix(12, 12);
  const auto s1 = real_schur(a);
  const auto s2 = real_schur(a);
  EXPECT_EQ(s1.t, s2.t);
  EXPECT_EQ(s1.q, s2.q);
}

TEST(RealSchur, ReorderFollowsTarget) {
  Rng rng(15);
  for (int n : {3, 6, 12}) {
    const Matrix a = rng.uniform_matrix(n, n);
    auto s = real_schur(a);
    ComplexList target = quasi_triangular_eigenvalues(s.t);
    std::reverse(target.begin(), target.end());
    // Reversal swaps the two members of each conjugate pair; restore the
    // (a + bi, a - bi) order inside each pair so blocks can follow exactly.
    for (std::size_t i = 0; i + 1 < target.size(); ++i)
      if (target[i].imag() < 0.0 && target[i + 1] == std::conj(target[i])) {
        std::swap(target[i], target[i + 1]);
        ++i;
      }
    ASSERT_TRUE(reorder_real_schur(s, target));
    EXPECT_LE((s.q * s.t * s.q.transpose() - a).norm(), 1e-10 * a.norm());
    EXPECT_LE(orthogonality_error(s.q), 1e-12 * n);
    EXPECT_TRUE(is_quasi_triangular(s.t));
    const auto after = quasi_triangular_eigenvalues(s.t);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(after[i] - target[i]), 0.0, 1e-8) << "n=" << n << " i=" << i;
  }
}

TEST(ComplexSchur, Examples) {
  const auto d = complex_schur(mat2(1, 0, 0, 2));
  EXPECT_NEAR(std::abs(d.t(1, 0)), 0.0, 1e-15);
  EXPECT_TRUE(contains({d.t(0, 0), d.t(1, 1)}, 1.0, 1e-14));
  EXPECT_TRUE(contains({d.t(0, 0), d.t(1, 1)}, 2.0, 1e-14));

  const auto p = complex_schur(mat2(1, 2, -2, 1));
  EXPECT_TRUE(contains({p.t(0, 0), p.t(1, 1)}, {1, 2}, 1e-13));
  EXPECT_TRUE(contains({p.t(0, 0), p.t(1, 1)}, {1, -2}, 1e-13));

  const auto r = complex_schur(mat2(0, 1, -1, 0));
  EXPECT_TRUE(contains({r.t(0, 0), r.t(1, 1)}, {0, 1}, 1e-14));
  EXPECT_TRUE(contains({r.t(0, 0), r.t(1, 1)}, {0, -1}, 1e-14));
}

TEST(ComplexSchur, ReconstructionAndUnitarity) {
  Rng rng(16);
  for (int n : {1, 4, 15}) {
    const Matrix a = rng.uniform_matrix(n, n);
    const auto s = complex_schur(a);
    EXPECT_LE((s.u * s.t * s.u.adjoint() - a.cast<Complex>()).norm(), 1e-10 * a.norm());
    EXPECT_LE((s.u.adjoint() * s.u - ComplexMatrix::Identity(n, n)).norm(), 1e-12 * n);
    for (int j = 0; j < n; ++j)
      for (int i = j + 1; i < n; ++i) EXPECT_EQ(s.t(i, j), Complex(0.0, 0.0));
  }
}

TEST(Eigenvalues, MirrorSchurExamples) {
  EXPECT_NEAR(match_multisets(eigenvalues(mat2(1, 0, 0, 2)), {1.0, 2.0}).cost, 0.0, 1e-24);
  EXPECT_NEAR(match_multisets(eigenvalues(mat2(0, 1, 1, 0)), {1.0, -1.0}).cost, 0.0, 1e-24);
  EXPECT_NEAR(match_multisets(eigenvalues(mat2(1, 2, -2, 1)), {{1, 2}, {1, -2}}).cost, 0.0, 1e-24);
}

TEST(Eigenvalues, AgreeWithQuasiTriangularBlocks) {
  Rng rng(17);
  for (int n : {3, 8, 25}) {
    const Matrix a = rng.normal_matrix(n, n);
    const auto s = real_schur(a);
    const Matrix rebuilt = s.q * s.t * s.q.transpose();
    EXPECT_LE(match_multisets(eigenvalues(rebuilt), quasi_triangular_eigenvalues(s.t)).cost, 1e-8);
  }
}

TEST(Eigenvalues, SecondOracleFromEigenSolver) {
  Rng rng(18);
  const Matrix a = rng.uniform_matrix(9, 9);
  Eigen::EigenSolver<Matrix> es(a);
  ComplexList expected(es.eigenvalues().data(), es.eigenvalues().data() + 9);
  EXPECT_LE(match_multisets(eigenvalues(a), expected).cost, 1e-20);
}

TEST(MatchMultisets, Examples) {
  EXPECT_NEAR(match_multisets({1.0, 2.0}, {2.0, 1.0}).cost, 0.0, 0.0);
  EXPECT_NEAR(match_multisets({0.0}, {3.0}).cost, 9.0, 0.0);
  const auto m = match_multisets({1.0, {1, 1}}, {{1, 1}, 1.1});
  EXPECT_NEAR(m.cost, 0.01, 1e-15);
  EXPECT_EQ(m.to[0], 1);
  EXPECT_EQ(m.to[1], 0);
}

TEST(MatchMultisets, AgreesWithBruteForce) {
  Rng rng(19);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      ComplexList u, v;
      for (int i = 0; i < n; ++i) {
        u.emplace_back(rng.normal(), rng.normal());
        v.emplace_back(rng.normal(), rng.normal());
      }
      const auto m = match_multisets(u, v);
      EXPECT_NEAR(m.cost, niep::testing::brute_force_matching(u, v), 1e-12) << "n=" << n;
      std::vector<int> seen(static_cast<std::size_t>(n), 0);
      double recomputed = 0.0;
      for (int i = 0; i < n; ++i) {
        ++seen[static_cast<std::size_t>(m.to[static_cast<std::size_t>(i)])];
        recomputed += std::norm(u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(m.to[static_cast<std::size_t>(i)])]);
      }
      for (int c : seen) EXPECT_EQ(c, 1);
      EXPECT_NEAR(recomputed, m.cost, 1e-12);
    }
}

TEST(MatchMultisets, ClusteredValuesNotGreedy) {
  // Greedy nearest-first picks 0 <-> 0.1 and then pays for 1 <-> -0.95.
  const auto m = match_multisets({0.0, 1.0}, {0.1, -0.95});
  EXPECT_NEAR(m.cost, niep::testing::brute_force_matching({0.0, 1.0}, {0.1, -0.95}), 1e-15);
}

TEST(MatchMultisets, SizeMismatchThrows) {
  EXPECT_THROW(match_multisets({1.0}, {1.0, 2.0}), InvalidInput);
}
