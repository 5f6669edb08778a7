#include "niep/linalg.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <string>
#include <vector>

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "niep/errors.hpp"

namespace niep::linalg {

QrFactors qr_positive(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("qf: matrix must be square");
  if (!a.allFinite()) throw InvalidInput("qf: non-finite entries");
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);

  const double scale = a.norm();
  double min_diag = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) min_diag = std::min(min_diag, std::abs(r(i, i)));
  if (n > 0 && !(min_diag > 1e-12 * scale)) {
    throw SingularInput("qf: smallest |R_ii| = " + std::to_string(min_diag) +
                        " below rank tolerance");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  return {std::move(q), std::move(r)};
}

Matrix qf(const Matrix& a) { return qr_positive(a).q; }

RealSchur real_schur(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("real_schur: matrix must be square");
  if (!a.allFinite()) throw InvalidInput("real_schur: non-finite entries");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealSchur out{Matrix(a.rows(), a.rows()), a};
  if (n == 0) return out;
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, out.t.data(), n, &sdim,
                                        wr.data(), wi.data(), out.q.data(), n);
  if (info != 0) throw ConvergenceFailure("real_schur: QR iteration did not converge (info " + std::to_string(info) + ")");
  return out;
}

namespace {

struct Block {
  Eigen::Index start;
  Eigen::Index size;
};

std::vector<Block> diagonal_blocks(const Matrix& t) {
  std::vector<Block> blocks;
  Eigen::Index i = 0;
  while (i < t.rows()) {
    const Eigen::Index size = (i + 1 < t.rows() && t(i + 1, i) != 0.0) ? 2 : 1;
    blocks.push_back({i, size});
    i += size;
  }
  return blocks;
}

}  // namespace

bool reorder_real_schur(RealSchur& schur, const ComplexList& target) {
  const Eigen::Index n = schur.t.rows();
  if (static_cast<Eigen::Index>(target.size()) != n)
    throw InvalidInput("reorder_real_schur: target size mismatch");
  if (n < 2) return true;

  // Rank every diagonal block by the earliest target slot its eigenvalues
  // are matched to, then bubble blocks into that order with dtrexc.
  const ComplexList current = quasi_triangular_eigenvalues(schur.t);
  const Assignment match = match_multisets(current, target);
  std::vector<Block> blocks = diagonal_blocks(schur.t);
  std::vector<int> key;
  for (const auto& b : blocks) {
    int k = match.to[static_cast<std::size_t>(b.start)];
    if (b.size == 2) k = std::min(k, match.to[static_cast<std::size_t>(b.start + 1)]);
    key.push_back(k);
  }

  const lapack_int ln = static_cast<lapack_int>(n);
  Eigen::Index row = 0;
  for (std::size_t placed = 0; placed < blocks.size(); ++placed) {
    std::size_t best = placed;
    for (std::size_t j = placed + 1; j < blocks.size(); ++j)
      if (key[j] < key[best]) best = j;
    if (best != placed) {
      lapack_int ifst = static_cast<lapack_int>(blocks[best].start + 1);
      lapack_int ilst = static_cast<lapack_int>(row + 1);
      const lapack_int info = LAPACKE_dtrexc(LAPACK_COL_MAJOR, 'V', ln, schur.t.data(), ln, schur.q.data(), ln,
                                             &ifst, &ilst);
      if (info != 0) return false;
      const Block moved = blocks[best];
      const int moved_key = key[best];
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(best));
      key.erase(key.begin() + static_cast<std::ptrdiff_t>(best));
      blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(placed), moved);
      key.insert(key.begin() + static_cast<std::ptrdiff_t>(placed), moved_key);
      Eigen::Index start = row;
      for (std::size_t j = placed; j < blocks.size(); ++j) {
        blocks[j].start = start;
        start += blocks[j].size;
      }
      const auto actual = diagonal_blocks(schur.t);
      if (actual.size() != blocks.size()) return false;
      for (std::size_t j = 0; j < blocks.size(); ++j)
        if (actual[j].start != blocks[j].start || actual[j].size != blocks[j].size) return false;
    }
    row += blocks[placed].size;
  }
  return true;
}

ComplexSchur complex_schur(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("complex_schur: matrix must be square");
  if (!a.allFinite()) throw InvalidInput("complex_schur: non-finite entries");
  Eigen::ComplexSchur<ComplexMatrix> schur(a.cast<Complex>(), /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw ConvergenceFailure("complex_schur: QR iteration did not converge");
  return {schur.matrixU(), schur.matrixT()};
}

ComplexList quasi_triangular_eigenvalues(const Matrix& t) {
  const Eigen::Index n = t.rows();
  ComplexList out;
  out.reserve(static_cast<std::size_t>(n));
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      const double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
      const double p = 0.5 * (a + d);
      const double h = 0.5 * (a - d);
      const double disc = h * h + b * c;
      if (disc < 0.0) {
        const double w = std::sqrt(-disc);
        out.emplace_back(p, w);
        out.emplace_back(p, -w);
      } else {
        const double w = std::sqrt(disc);
        out.emplace_back(p + w, 0.0);
        out.emplace_back(p - w, 0.0);
      }
      i += 2;
    } else {
      out.emplace_back(t(i, i), 0.0);
      i += 1;
    }
  }
  return out;
}

ComplexList eigenvalues(const Matrix& a) { return quasi_triangular_eigenvalues(real_schur(a).t); }

Assignment solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw InvalidInput("assignment: cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  Assignment result;
  result.to.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return result;

  // Shortest augmenting path with potentials, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= n; ++j) result.to[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  for (int i = 0; i < n; ++i) result.cost += cost(i, result.to[static_cast<std::size_t>(i)]);
  return result;
}

Assignment match_multisets(const ComplexList& u, const ComplexList& v) {
  if (u.size() != v.size()) throw InvalidInput("match_multisets: sizes differ");
  const auto n = static_cast<Eigen::Index>(u.size());
  Matrix cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cost(i, j) = std::norm(u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)]);
  return solve_assignment(cost);
}

}  // namespace niep::linalg
