#pragma once

// Bergman metrics on CP^n with polarization O(k).
//
// A matrix A in SL(N_k+1, C) defines the metric
//   omega_A = (sqrt(-1) / (2 k pi)) d dbar log |A v|^2,
// where v is the vector of lex-ordered degree-k monomials evaluated in a
// chart. omega_A depends only on H = A^dagger A up to positive scale, so
// every class has a unique representative R = upper triangular with
// positive diagonal and det R = 1 (canonical QR). All pointwise quantities
// below are closed forms in v, its holomorphic Jacobian, and H = R^dagger R.

#include <cstdint>
#include <random>
#include <vector>

#include "bvol/projspace.hpp"
#include "bvol/types.hpp"

namespace bvol {

/// Square matrix rescaled by the principal (N+1)-th root of its determinant,
/// so that det = 1.
class SLMatrix {
 public:
  explicit SLMatrix(CMatrix entries);

  const CMatrix& matrix() const noexcept { return a_; }
  Eigen::Index dim() const noexcept { return a_.rows(); }

 private:
  CMatrix a_;
};

/// Canonical coordinate of a Bergman metric: upper triangular, exact zeros
/// below the diagonal, real positive diagonal with product one.
class BergmanPoint {
 public:
  BergmanPoint(CMatrix r, BasisShape shape);

  static BergmanPoint identity(BasisShape shape);

  const CMatrix& matrix() const noexcept { return r_; }
  BasisShape shape() const noexcept { return shape_; }
  int n() const noexcept { return shape_.n; }
  int k() const noexcept { return shape_.k; }
  Eigen::Index dim() const noexcept { return r_.rows(); }
  /// N_k: index of the last section.
  Eigen::Index top() const noexcept { return r_.rows() - 1; }
  double diag(Eigen::Index i) const { return r_(i, i).real(); }

 private:
  CMatrix r_;
  BasisShape shape_;
};

/// Variation dR of a BergmanPoint: upper triangular with real diagonal and
/// sum_i dR_ii / r_ii = 0, i.e. tangent to det R = 1.
class TangentParam {
 public:
  TangentParam(const BergmanPoint& base, CMatrix dr);

  static TangentParam zero(const BergmanPoint& base);

  const CMatrix& matrix() const noexcept { return dr_; }

 private:
  CMatrix dr_;
};

/// Hermitian positive-definite Gram form A^dagger A.
class HermitianForm {
 public:
  explicit HermitianForm(const BergmanPoint& point);
  explicit HermitianForm(const SLMatrix& a);
  /// Any invertible matrix, without SL normalization.
  static HermitianForm of_matrix(const CMatrix& a);

  const CMatrix& matrix() const noexcept { return h_; }

 private:
  struct Unchecked {};
  HermitianForm(CMatrix h, Unchecked);
  CMatrix h_;
};

struct QRFactors {
  CMatrix q;  // special unitary
  BergmanPoint r;
};

/// A = Q R with Q special unitary and R a BergmanPoint. Householder QR
/// followed by a diagonal phase correction. Throws ConditioningError when
/// the 2-norm condition number of A exceeds 1e12.
QRFactors canonical_qr(const SLMatrix& a, BasisShape shape);
QRFactors canonical_qr(const SLMatrix& a);

/// Whether A and B define the same Bergman metric: A^dagger A = rho^2 B^dagger B
/// with rho^2 = tr(A^dagger A) / tr(B^dagger B), measured in relative
/// Frobenius distance.
bool are_equivalent(const CMatrix& a, const CMatrix& b, double tol = 1e-10);
bool are_equivalent(const SLMatrix& a, const SLMatrix& b, double tol = 1e-10);

HermitianForm hermitian_form(const BergmanPoint& point);
HermitianForm hermitian_form(const SLMatrix& a);

/// delta H = dR^dagger R + R^dagger dR.
CMatrix delta_form(const BergmanPoint& point, const TangentParam& d);

// ---------------------------------------------------------------------------
// Pointwise Kahler data.

/// Everything needed at one (R, p) pair, computed once and reused for any
/// number of tangent directions. The metric matrix uses the convention
/// g(a, b) = d_{bar a} d_b phi; the Laplacian is the trace of g^{-1} against
/// the complex Hessian in the same convention.
class LocalGeometry {
 public:
  LocalGeometry(const BergmanPoint& point, const MonomialBasis& basis, const ChartPoint& p);

  double potential() const;
  const CMatrix& metric() const noexcept { return metric_; }
  double metric_determinant() const noexcept { return metric_det_; }
  /// dV_R / dV_FS at p (both probability measures).
  double density_ratio() const noexcept { return density_ratio_; }

  /// u = (1/(2 k pi)) v^dagger dH v / v^dagger H v for dH induced by dR.
  double tangent(const CMatrix& dr) const;
  /// Laplacian of the tangent function, g^{a bbar} d_a d_bbar u.
  double laplacian(const CMatrix& dr) const;

  struct Jet {
    double value;
    double laplacian;
  };
  Jet tangent_jet(const CMatrix& dr) const;

 private:
  double scale_;  // 1 / (2 k pi)
  double q_;      // v^dagger H v
  CVector rv_;    // R v
  CMatrix rj_;    // R J
  CVector v_;
  CMatrix jac_;
  CVector t_;     // J^dagger H v
  CMatrix m_;     // J^dagger H J
  CMatrix metric_;
  CMatrix metric_inv_;
  double metric_det_ = 0.0;
  double density_ratio_ = 0.0;
};

/// (1/(2 k pi)) log(v^dagger H v) in the chart of p.
double potential(const BergmanPoint& point, const ChartPoint& p);
/// Same for an arbitrary Gram form (e.g. of a GL representative).
double potential(const HermitianForm& form, BasisShape shape, const ChartPoint& p);

CMatrix metric_tensor(const BergmanPoint& point, const ChartPoint& p);
double tangent_function(const BergmanPoint& point, const TangentParam& d, const ChartPoint& p);
double laplacian_of(const BergmanPoint& point, const TangentParam& d, const ChartPoint& p);
double density_ratio(const BergmanPoint& point, const ChartPoint& p);

/// det of the Fubini-Study metric (1/2pi) d dbar log(1 + |w|^2) at affine w.
double fubini_study_determinant(const CVector& affine);

// ---------------------------------------------------------------------------
// Canonical real coordinates on the space of BergmanPoints.
//
// x = (log r_00, ..., log r_{N-1,N-1}, Re r_01, Im r_01, Re r_02, ...), the
// strict upper entries in row-major order; r_NN = exp(-sum of the logs).
// The matching tangent basis is e_i: dr_ii = r_ii, dr_NN = -r_NN (i < N),
// followed by unit Re / Im directions on each strict upper entry.

/// D = N^2 + 2N.
Eigen::Index canonical_dimension(Eigen::Index top);
Eigen::Index canonical_dimension(const BergmanPoint& point);

TangentParam canonical_direction(const BergmanPoint& point, Eigen::Index index);
std::vector<CMatrix> canonical_directions(const BergmanPoint& point);

/// Components of dR in the canonical tangent basis at `point`.
RVector tangent_coordinates(const BergmanPoint& point, const CMatrix& dr);

RVector coordinates(const BergmanPoint& point);
BergmanPoint from_coordinates(const RVector& x, BasisShape shape);

/// (R + h dR) rescaled by the principal root of its determinant.
BergmanPoint retract(const BergmanPoint& point, const TangentParam& d, double h);

/// Bounded random walk in canonical coordinates, started at the identity:
/// `steps` Gaussian steps of size `step`, each coordinate clamped to
/// [-bound, bound].
struct RandomWalk {
  int steps = 8;
  double step = 0.25;
  double bound = 1.0;
};
BergmanPoint random_walk_point(BasisShape shape, std::mt19937_64& rng, const RandomWalk& walk = {});

}  // namespace bvol
