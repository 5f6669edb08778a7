#include "niep/manifold.hpp"

#include <cmath>
#include <sstream>

#include "niep/errors.hpp"
#include "niep/linalg.hpp"

namespace niep {

TangentVector TangentVector::zero(int n) {
  return {Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
}

TangentVector& TangentVector::operator+=(const TangentVector& o) {
  ds += o.ds;
  dq += o.dq;
  dv += o.dv;
  return *this;
}

TangentVector& TangentVector::operator*=(double a) {
  ds *= a;
  dq *= a;
  dv *= a;
  return *this;
}

TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
TangentVector operator*(double a, TangentVector x) { return x *= a; }

namespace manifold {

double inner(const ManifoldPoint& /*base*/, const TangentVector& xi, const TangentVector& zeta) {
  return frobenius_dot(xi.ds, zeta.ds) + frobenius_dot(xi.dq, zeta.dq) + frobenius_dot(xi.dv, zeta.dv);
}

double norm(const ManifoldPoint& base, const TangentVector& xi) { return std::sqrt(inner(base, xi, xi)); }

ManifoldPoint retract(const ManifoldPoint& base, const TangentVector& xi) {
  return {base.s + xi.ds, linalg::qf(base.q + xi.dq), base.v + xi.dv};
}

ManifoldPoint random_point(const ProblemInstance& instance, std::uint64_t seed) {
  const int n = instance.n();
  Rng rng(seed);
  const Matrix s = rng.uniform_matrix(n, n).cwiseSqrt().cwiseProduct(instance.s_mask());
  const Matrix c0 = instance.anchor() + s.cwiseProduct(s);
  auto schur = linalg::real_schur(c0);
  linalg::reorder_real_schur(schur, instance.spectrum.values);
  return {s, std::move(schur.q), instance.lambda.w.cwiseProduct(schur.t)};
}

TangentVector random_tangent(const ProblemInstance& instance, const ManifoldPoint& base,
                             std::uint64_t seed) {
  const int n = instance.n();
  Rng rng(seed);
  TangentVector xi;
  xi.ds = rng.normal_matrix(n, n).cwiseProduct(instance.s_mask());
  const Matrix a = rng.normal_matrix(n, n);
  xi.dq = base.q * (0.5 * (a - a.transpose()));
  xi.dv = instance.lambda.w.cwiseProduct(rng.normal_matrix(n, n));
  return xi;
}

namespace {

bool has_mass_outside(const Matrix& values, const Matrix& allowed) {
  return (values.array() * (1.0 - allowed.array())).abs().maxCoeff() != 0.0;
}

}  // namespace

std::vector<std::string> check_point(const ProblemInstance& instance, const ManifoldPoint& x,
                                     double ortho_tol) {
  std::vector<std::string> problems;
  const int n = instance.n();
  if (x.s.rows() != n || x.s.cols() != n || x.q.rows() != n || x.q.cols() != n || x.v.rows() != n ||
      x.v.cols() != n) {
    problems.emplace_back("component dimensions do not match n");
    return problems;
  }
  if (!x.s.allFinite() || !x.q.allFinite() || !x.v.allFinite()) problems.emplace_back("non-finite entries");
  const double ortho = (x.q.transpose() * x.q - Matrix::Identity(n, n)).norm();
  if (!(ortho <= ortho_tol)) {
    std::ostringstream msg;
    msg << "||Q^T Q - I||_F = " << ortho << " exceeds " << ortho_tol;
    problems.push_back(msg.str());
  }
  if (n > 0 && has_mass_outside(x.v, instance.lambda.w)) problems.emplace_back("V is nonzero on I");
  if (n > 0 && instance.has_prescribed() && has_mass_outside(x.s, instance.s_mask()))
    problems.emplace_back("S is nonzero on the prescribed set L");
  return problems;
}

std::vector<std::string> check_tangent(const ProblemInstance& instance, const ManifoldPoint& base,
                                       const TangentVector& xi, double skew_tol) {
  std::vector<std::string> problems;
  const Matrix omega = base.q.transpose() * xi.dq;
  const double skew_err = (omega + omega.transpose()).norm();
  if (!(skew_err <= skew_tol)) {
    std::ostringstream msg;
    msg << "Q^T dQ is not skew: ||sym part|| = " << skew_err;
    problems.push_back(msg.str());
  }
  if (instance.n() > 0 && has_mass_outside(xi.dv, instance.lambda.w)) problems.emplace_back("dV is nonzero on I");
  if (instance.n() > 0 && instance.has_prescribed() && has_mass_outside(xi.ds, instance.s_mask()))
    problems.emplace_back("dS is nonzero on L");
  return problems;
}

long tangent_dimension(const ProblemInstance& instance) {
  // Free entries of dS, the skew Omega in dQ = Q Omega, and the free entries of dV.
  const long n = instance.n();
  const auto ds = static_cast<long>(std::lround(instance.s_mask().sum()));
  const auto dv = static_cast<long>(std::lround(instance.lambda.w.sum()));
  return ds + n * (n - 1) / 2 + dv;
}

}  // namespace manifold
}  // namespace niep
