#include "niep/residual.hpp"

namespace niep {

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix isospectral(const ProblemInstance& instance, const ManifoldPoint& x) {
  return x.q * (instance.lambda.lambda + x.v) * x.q.transpose();
}

}  // namespace

ResidualMatrix residual(const ProblemInstance& instance, const ManifoldPoint& x) {
  ResidualMatrix g = x.s.cwiseProduct(x.s) - isospectral(instance, x);
  if (instance.prescribed) g += instance.prescribed->c_hat_a;
  return g;
}

Matrix reconstruct(const ProblemInstance& instance, const ManifoldPoint& x) {
  Matrix c = x.s.cwiseProduct(x.s);
  if (instance.prescribed) c += instance.prescribed->c_hat_a;
  return c;
}

Linearization::Linearization(const ProblemInstance& instance, const ManifoldPoint& x)
    : instance_(&instance), x_(x), a_(isospectral(instance, x)), s_mask_(instance.s_mask()) {}

ResidualMatrix Linearization::apply(const TangentVector& xi) const {
  const Matrix& q = x_.q;
  return 2.0 * x_.s.cwiseProduct(xi.ds) + commutator(a_, xi.dq * q.transpose()) - q * xi.dv * q.transpose();
}

TangentVector Linearization::adjoint(const ResidualMatrix& dz) const {
  const Matrix& q = x_.q;
  TangentVector out;
  out.ds = 2.0 * x_.s.cwiseProduct(dz);
  if (instance_->has_prescribed()) out.ds = out.ds.cwiseProduct(s_mask_);
  const Matrix at = a_.transpose();
  out.dq = 0.5 * (commutator(a_, dz.transpose()) + commutator(at, dz)) * q;
  out.dv = -instance_->lambda.w.cwiseProduct(q.transpose() * dz * q);
  return out;
}

ResidualMatrix apply_differential(const ProblemInstance& instance, const ManifoldPoint& x,
                                  const TangentVector& xi) {
  return Linearization(instance, x).apply(xi);
}

TangentVector apply_adjoint(const ProblemInstance& instance, const ManifoldPoint& x, const ResidualMatrix& dz) {
  return Linearization(instance, x).adjoint(dz);
}

TangentVector gradient_cost(const ProblemInstance& instance, const ManifoldPoint& x) {
  return apply_adjoint(instance, x, residual(instance, x));
}

ResidualMatrix pullback_residual(const ProblemInstance& instance, const ManifoldPoint& x,
                                 const TangentVector& xi) {
  return residual(instance, manifold::retract(x, xi));
}

}  // namespace niep
