#include <cmath>

#include "bvol/bergman.hpp"
#include "bvol/errors.hpp"

namespace bvol {

double fubini_study_determinant(const CVector& affine) {
  const double n = static_cast<double>(affine.size());
  return std::pow(2.0 * kPi, -n) * std::pow(1.0 + affine.squaredNorm(), -(n + 1.0));
}

LocalGeometry::LocalGeometry(const BergmanPoint& point, const MonomialBasis& basis,
                             const ChartPoint& p)
    : scale_(1.0 / (2.0 * point.k() * kPi)) {
  if (basis.shape() != point.shape()) throw InvalidArgument("LocalGeometry: basis does not match the point");
  MonomialJet jet = eval_monomials(basis, p, DerivativeOrder::first);
  v_ = std::move(jet.values);
  jac_ = std::move(jet.jacobian);
  const CMatrix& r = point.matrix();
  rv_ = r.triangularView<Eigen::Upper>() * v_;
  rj_ = r.triangularView<Eigen::Upper>() * jac_;
  q_ = rv_.squaredNorm();
  t_ = rj_.adjoint() * rv_;
  m_ = rj_.adjoint() * rj_;
  metric_ = scale_ * (m_ / q_ - (t_ * t_.adjoint()) / (q_ * q_));
  const Eigen::PartialPivLU<CMatrix> lu(metric_);
  metric_inv_ = lu.inverse();
  metric_det_ = lu.determinant().real();
  density_ratio_ = metric_det_ / fubini_study_determinant(p.affine());
}

double LocalGeometry::potential() const { return scale_ * std::log(q_); }

double LocalGeometry::tangent(const CMatrix& dr) const {
  const CVector a = dr.triangularView<Eigen::Upper>() * v_;
  return scale_ * 2.0 * rv_.dot(a).real() / q_;
}

LocalGeometry::Jet LocalGeometry::tangent_jet(const CMatrix& dr) const {
  const CVector a = dr.triangularView<Eigen::Upper>() * v_;
  const CMatrix da = dr.triangularView<Eigen::Upper>() * jac_;
  const double p = 2.0 * rv_.dot(a).real();
  const CVector s = da.adjoint() * rv_ + rj_.adjoint() * a;   // J^dagger dH v
  const CMatrix pm = da.adjoint() * rj_ + rj_.adjoint() * da;  // J^dagger dH J

  // Complex Hessian d_{bar a} d_b of P/Q by the quotient rule.
  const double q2 = q_ * q_;
  const CMatrix hess = pm / q_ - (t_ * s.adjoint() + s * t_.adjoint()) / q2 - (p / q2) * m_ +
                       (2.0 * p / (q2 * q_)) * (t_ * t_.adjoint());
  const double lap = scale_ * (metric_inv_ * hess).trace().real();
  return Jet{scale_ * p / q_, lap};
}

double LocalGeometry::laplacian(const CMatrix& dr) const { return tangent_jet(dr).laplacian; }

namespace {

LocalGeometry local_at(const BergmanPoint& point, const ChartPoint& p) {
  return LocalGeometry(point, *cached_basis(point.shape()), p);
}

}  // namespace

double potential(const BergmanPoint& point, const ChartPoint& p) {
  return local_at(point, p).potential();
}

double potential(const HermitianForm& form, BasisShape shape, const ChartPoint& p) {
  const auto basis = cached_basis(shape);
  if (static_cast<std::size_t>(form.matrix().rows()) != basis->size()) {
    throw InvalidArgument("potential: form size does not match the shape");
  }
  const CVector v = eval_monomials(*basis, p, DerivativeOrder::values).values;
  const double q = v.dot(form.matrix() * v).real();
  return std::log(q) / (2.0 * shape.k * kPi);
}

CMatrix metric_tensor(const BergmanPoint& point, const ChartPoint& p) {
  return local_at(point, p).metric();
}

double tangent_function(const BergmanPoint& point, const TangentParam& d, const ChartPoint& p) {
  return local_at(point, p).tangent(d.matrix());
}

double laplacian_of(const BergmanPoint& point, const TangentParam& d, const ChartPoint& p) {
  return local_at(point, p).laplacian(d.matrix());
}

double density_ratio(const BergmanPoint& point, const ChartPoint& p) {
  return local_at(point, p).density_ratio();
}

}  // namespace bvol
