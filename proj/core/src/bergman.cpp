#include "bvol/bergman.hpp"

#include <cmath>
#include <sstream>

#include "bvol/errors.hpp"

namespace bvol {
namespace {

constexpr double kMaxCondition = 1e12;

Complex principal_root(Complex z, Eigen::Index degree) {
  return std::exp(std::log(z) / static_cast<double>(degree));
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw InvalidArgument(std::string(what) + ": expected a square matrix of size >= 2");
  }
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entries");
}

}  // namespace

SLMatrix::SLMatrix(CMatrix entries) : a_(std::move(entries)) {
  require_square(a_, "SLMatrix");
  const Complex det = a_.determinant();
  if (det == Complex(0.0) || !std::isfinite(std::abs(det))) {
    throw ConditioningError("SLMatrix: matrix is singular", INFINITY);
  }
  a_ /= principal_root(det, a_.rows());
  const double residual = std::abs(a_.determinant() - 1.0);
  if (!(residual < 1e-10)) {
    std::ostringstream msg;
    msg << "SLMatrix: |det - 1| = " << residual << " after normalization; matrix is ill-conditioned";
    throw ConditioningError(msg.str(), INFINITY);
  }
}

BergmanPoint::BergmanPoint(CMatrix r, BasisShape shape) : r_(std::move(r)), shape_(shape) {
  require_square(r_, "BergmanPoint");
  if (static_cast<std::size_t>(r_.rows()) != shape_.dimension()) {
    throw InvalidArgument("BergmanPoint: matrix size does not match the section space of the shape");
  }
  double log_product = 0.0;
  for (Eigen::Index i = 0; i < r_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (r_(i, j) != Complex(0.0)) throw InvalidArgument("BergmanPoint: entries below the diagonal must be zero");
    }
    const Complex d = r_(i, i);
    if (d.imag() != 0.0 || !(d.real() > 0.0)) {
      throw InvalidArgument("BergmanPoint: diagonal entries must be real and positive");
    }
    log_product += std::log(d.real());
  }
  if (!(std::abs(std::expm1(log_product)) <= 1e-12)) {
    throw InvalidArgument("BergmanPoint: product of diagonal entries must be 1");
  }
}

BergmanPoint BergmanPoint::identity(BasisShape shape) {
  const auto dim = static_cast<Eigen::Index>(shape.dimension());
  return BergmanPoint(CMatrix::Identity(dim, dim), shape);
}

TangentParam::TangentParam(const BergmanPoint& base, CMatrix dr) : dr_(std::move(dr)) {
  if (dr_.rows() != base.dim() || dr_.cols() != base.dim()) {
    throw InvalidArgument("TangentParam: size does not match the base point");
  }
  if (!dr_.allFinite()) throw InvalidArgument("TangentParam: non-finite entries");
  double trace = 0.0;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < dr_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (dr_(i, j) != Complex(0.0)) throw InvalidArgument("TangentParam: entries below the diagonal must be zero");
    }
    if (dr_(i, i).imag() != 0.0) throw InvalidArgument("TangentParam: diagonal must be real");
    const double rel = dr_(i, i).real() / base.diag(i);
    trace += rel;
    scale = std::max(scale, std::abs(rel));
  }
  if (std::abs(trace) > 1e-12 * std::max(1.0, scale)) {
    throw InvalidArgument("TangentParam: sum of dR_ii / r_ii must vanish");
  }
}

TangentParam TangentParam::zero(const BergmanPoint& base) {
  return TangentParam(base, CMatrix::Zero(base.dim(), base.dim()));
}

HermitianForm::HermitianForm(CMatrix h, Unchecked) : h_(std::move(h)) {}

HermitianForm::HermitianForm(const BergmanPoint& point)
    : h_(point.matrix().adjoint() * point.matrix()) {}

HermitianForm::HermitianForm(const SLMatrix& a) : h_(a.matrix().adjoint() * a.matrix()) {}

HermitianForm HermitianForm::of_matrix(const CMatrix& a) {
  require_square(a, "HermitianForm");
  CMatrix h = a.adjoint() * a;
  h = (0.5 * (h + h.adjoint())).eval();
  if (Eigen::LLT<CMatrix>(h).info() != Eigen::Success) {
    throw InvalidArgument("HermitianForm: matrix is singular");
  }
  return HermitianForm(std::move(h), Unchecked{});
}

HermitianForm hermitian_form(const BergmanPoint& point) { return HermitianForm(point); }
HermitianForm hermitian_form(const SLMatrix& a) { return HermitianForm(a); }

QRFactors canonical_qr(const SLMatrix& a, BasisShape shape) {
  const CMatrix& m = a.matrix();
  const auto dim = m.rows();
  const Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double condition = sv(0) / sv(dim - 1);
  if (!(condition < kMaxCondition)) {
    std::ostringstream msg;
    msg << "canonical_qr: condition number " << condition << " exceeds " << kMaxCondition;
    throw ConditioningError(msg.str(), condition);
  }

  const Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();

  // Rotate each diagonal entry onto the positive real axis.
  double log_product = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double modulus = std::abs(r(i, i));
    const Complex phase = r(i, i) / modulus;
    r.row(i) *= std::conj(phase);
    q.col(i) *= phase;
    r(i, i) = Complex(modulus, 0.0);
    log_product += std::log(modulus);
  }
  // det R = |det A| = 1 up to rounding; remove the residue so that the
  // diagonal product is one to working precision.
  const double fix = std::exp(-log_product / static_cast<double>(dim));
  r *= fix;
  q /= fix;
  for (Eigen::Index i = 0; i < dim; ++i) r(i, i) = Complex(r(i, i).real(), 0.0);
  return QRFactors{std::move(q), BergmanPoint(std::move(r), shape)};
}

QRFactors canonical_qr(const SLMatrix& a) {
  return canonical_qr(a, BasisShape::for_dimension(static_cast<std::size_t>(a.dim())));
}

bool are_equivalent(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("are_equivalent: dimension mismatch");
  }
  const CMatrix ga = a.adjoint() * a;
  const CMatrix gb = b.adjoint() * b;
  const double rho2 = ga.trace().real() / gb.trace().real();
  return (ga - rho2 * gb).norm() <= tol * ga.norm();
}

bool are_equivalent(const SLMatrix& a, const SLMatrix& b, double tol) {
  return are_equivalent(a.matrix(), b.matrix(), tol);
}

CMatrix delta_form(const BergmanPoint& point, const TangentParam& d) {
  const CMatrix& r = point.matrix();
  const CMatrix& dr = d.matrix();
  return dr.adjoint() * r + r.adjoint() * dr;
}

}  // namespace bvol
