#include "bvol/autgroup.hpp"

#include <cmath>
#include <map>
#include <type_traits>
#include <span>
#include <sstream>
#include <vector>

#include "bvol/errors.hpp"

namespace bvol {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::int64_t bound) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out) || out > bound || out < -bound) {
    throw OverflowError("exact coefficient exceeds the configured bound");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b, std::int64_t bound) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out) || out > bound || out < -bound) {
    throw OverflowError("exact coefficient exceeds the configured bound");
  }
  return out;
}

bool is_unit_triangular(const IntMatrix& a) {
  bool upper = true;
  bool lower = true;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 1) return false;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i > j && a(i, j) != 0) upper = false;
      if (i < j && a(i, j) != 0) lower = false;
    }
  }
  return upper || lower;
}

using Polynomial = std::map<std::vector<int>, Complex>;
using IntPolynomial = std::map<std::vector<int>, std::int64_t>;

// Product of the linear forms L_j = sum_l lin(j, l) Z_l, taken exponents[j]
// times each, accumulated as a map from exponent tuples to coefficients.
template <class Poly, class Lin, class Mul, class Add>
Poly expand_monomial(std::span<const int> exponents, const Lin& lin, Mul mul, Add add) {
  const auto vars = static_cast<std::size_t>(lin.rows());
  Poly poly;
  poly.emplace(std::vector<int>(vars, 0), 1);
  for (std::size_t j = 0; j < vars; ++j) {
    for (int rep = 0; rep < exponents[j]; ++rep) {
      Poly next;
      for (const auto& [e, c] : poly) {
        for (std::size_t l = 0; l < vars; ++l) {
          const auto coeff = lin(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
          if (coeff == static_cast<std::remove_cvref_t<decltype(coeff)>>(0)) continue;
          auto shifted = e;
          ++shifted[l];
          auto [it, inserted] = next.emplace(std::move(shifted), mul(c, coeff));
          if (!inserted) it->second = add(it->second, mul(c, coeff));
        }
      }
      poly = std::move(next);
    }
  }
  return poly;
}

CMatrix sl_normalize(CMatrix a) {
  const Complex det = a.determinant();
  if (det == Complex(0.0)) throw ConditioningError("induced section matrix is singular", INFINITY);
  a /= std::exp(std::log(det) / static_cast<double>(a.rows()));
  return a;
}

}  // namespace

ProjectiveAutomorphism::ProjectiveAutomorphism(CMatrix g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() < 2) {
    throw InvalidArgument("ProjectiveAutomorphism: expected a square matrix of size >= 2");
  }
  if (!g_.allFinite()) throw InvalidArgument("ProjectiveAutomorphism: non-finite entries");
  const Eigen::JacobiSVD<CMatrix> svd(g_);
  const auto& sv = svd.singularValues();
  const double condition = sv(0) / sv(sv.size() - 1);
  if (!(condition < 1e12)) {
    std::ostringstream msg;
    msg << "ProjectiveAutomorphism: condition number " << condition << " exceeds 1e12";
    throw ConditioningError(msg.str(), condition);
  }
  const double modulus = std::abs(g_.determinant());
  g_ /= std::pow(modulus, 1.0 / static_cast<double>(g_.rows()));
}

ProjectiveAutomorphism ProjectiveAutomorphism::from_integer(const IntMatrix& g) {
  ProjectiveAutomorphism out(g.cast<double>().cast<Complex>());
  const double det = std::abs(g.cast<double>().determinant());
  if (std::abs(det - 1.0) > 1e-9) {
    throw InvalidArgument("ProjectiveAutomorphism::from_integer: |det| must be 1");
  }
  out.exact_ = g;
  return out;
}

std::optional<IntMatrix> ProjectiveAutomorphism::exact_inverse() const {
  if (!exact_ || !is_unit_triangular(*exact_)) return std::nullopt;
  return exact_unit_triangular_inverse(*exact_);
}

ProjectiveAutomorphism ProjectiveAutomorphism::operator*(const ProjectiveAutomorphism& other) const {
  if (exact_ && other.exact_) return from_integer(exact_product(*exact_, *other.exact_));
  return ProjectiveAutomorphism(g_ * other.g_);
}

ProjectiveAutomorphism unipotent_gamma(std::int64_t m, int n) {
  if (n < 1) throw InvalidArgument("unipotent_gamma: n must be >= 1");
  IntMatrix g = IntMatrix::Identity(n + 1, n + 1);
  g(n - 1, n) = m;
  return ProjectiveAutomorphism::from_integer(g);
}

bool InducedSectionMatrix::is_unit_upper_triangular() const {
  if (exact) {
    for (Eigen::Index i = 0; i < exact->rows(); ++i) {
      if ((*exact)(i, i) != 1) return false;
      for (Eigen::Index j = 0; j < i; ++j) {
        if ((*exact)(i, j) != 0) return false;
      }
    }
    return true;
  }
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    if (matrix(i, i) != Complex(1.0)) return false;
    for (Eigen::Index j = 0; j < i; ++j) {
      if (matrix(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

IntMatrix exact_product(const IntMatrix& a, const IntMatrix& b, std::int64_t bound) {
  if (a.cols() != b.rows()) throw InvalidArgument("exact_product: shape mismatch");
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      std::int64_t acc = 0;
      for (Eigen::Index l = 0; l < a.cols(); ++l) {
        if (a(i, l) == 0 || b(l, j) == 0) continue;
        acc = checked_add(acc, checked_mul(a(i, l), b(l, j), bound), bound);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

IntMatrix exact_unit_triangular_inverse(const IntMatrix& a) {
  if (a.rows() != a.cols() || !is_unit_triangular(a)) {
    throw InvalidArgument("exact_unit_triangular_inverse: matrix is not unit triangular");
  }
  bool lower = false;
  for (Eigen::Index i = 0; i < a.rows() && !lower; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) lower = lower || a(i, j) != 0;
  }
  const IntMatrix u = lower ? IntMatrix(a.transpose()) : a;
  // Solve U X = I column by column, bottom-up.
  const auto dim = u.rows();
  IntMatrix x = IntMatrix::Identity(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index i = dim - 1; i >= 0; --i) {
      std::int64_t acc = (i == col) ? 1 : 0;
      for (Eigen::Index l = i + 1; l < dim; ++l) {
        if (u(i, l) == 0 || x(l, col) == 0) continue;
        acc = checked_add(acc, -checked_mul(u(i, l), x(l, col), kExactCoefficientBound), kExactCoefficientBound);
      }
      x(i, col) = acc;
    }
  }
  return lower ? IntMatrix(x.transpose()) : x;
}

IntMatrix exact_power(const IntMatrix& a, std::int64_t m, std::int64_t bound) {
  const IntMatrix base = m >= 0 ? a : exact_unit_triangular_inverse(a);
  IntMatrix out = IntMatrix::Identity(a.rows(), a.cols());
  for (std::int64_t s = 0; s < (m >= 0 ? m : -m); ++s) out = exact_product(out, base, bound);
  return out;
}

InducedSectionMatrix induced_section_matrix(const ProjectiveAutomorphism& gamma, const MonomialBasis& basis,
                                            std::int64_t bound) {
  if (gamma.n() != basis.n()) throw InvalidArgument("induced_section_matrix: dimension mismatch");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  InducedSectionMatrix out{CMatrix::Zero(dim, dim), std::nullopt, basis.shape()};

  auto place = [&](const std::vector<int>& e) {
    const auto col = basis.index_of(e);
    if (!col) throw InternalConsistencyError("induced_section_matrix: monomial outside the basis");
    return static_cast<Eigen::Index>(*col);
  };

  if (const auto inverse = gamma.exact_inverse()) {
    IntMatrix exact = IntMatrix::Zero(dim, dim);
    auto mul = [bound](std::int64_t c, std::int64_t x) { return checked_mul(c, x, bound); };
    auto add = [bound](std::int64_t x, std::int64_t y) { return checked_add(x, y, bound); };
    for (Eigen::Index i = 0; i < dim; ++i) {
      const auto poly = expand_monomial<IntPolynomial>(basis[static_cast<std::size_t>(i)].exponents(),
                                                       *inverse, mul, add);
      for (const auto& [e, c] : poly) exact(i, place(e)) = c;
    }
    out.matrix = exact.cast<double>().cast<Complex>();
    if (exact.cast<double>().determinant() != 1.0) out.matrix = sl_normalize(out.matrix);
    out.exact = std::move(exact);
    return out;
  }

  const CMatrix inverse = gamma.matrix().inverse();
  auto mul = [](Complex c, Complex x) { return c * x; };
  auto add = [](Complex x, Complex y) { return x + y; };
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto poly =
        expand_monomial<Polynomial>(basis[static_cast<std::size_t>(i)].exponents(), inverse, mul, add);
    for (const auto& [e, c] : poly) out.matrix(i, place(e)) = c;
  }
  out.matrix = sl_normalize(out.matrix);
  return out;
}

bool power_identity_check(const ProjectiveAutomorphism& gamma1, const MonomialBasis& basis, int m_max) {
  if (!gamma1.exact() || !gamma1.exact_inverse()) {
    throw InvalidArgument("power_identity_check: needs an exact unipotent generator");
  }
  const auto a1 = induced_section_matrix(gamma1, basis);
  for (int m = -m_max; m <= m_max; ++m) {
    const auto gamma_m = ProjectiveAutomorphism::from_integer(exact_power(*gamma1.exact(), m));
    const auto am = induced_section_matrix(gamma_m, basis);
    if (!am.exact || *am.exact != exact_power(*a1.exact, m)) return false;
  }
  return true;
}

BergmanPoint pullback_point(const BergmanPoint& point, const ProjectiveAutomorphism& gamma) {
  const auto basis = cached_basis(point.shape());
  const auto induced = induced_section_matrix(gamma, *basis);
  CMatrix product = point.matrix() * induced.matrix;
  if (induced.is_unit_upper_triangular()) {
    // Upper triangular with the diagonal of R; already canonical.
    const auto qr = canonical_qr(SLMatrix(product), point.shape());
    const auto dim = product.rows();
    if ((qr.q - CMatrix::Identity(dim, dim)).norm() > 1e-10) {
      throw InternalConsistencyError("pullback_point: unipotent pullback required a QR rotation");
    }
    return BergmanPoint(std::move(product), point.shape());
  }
  return canonical_qr(SLMatrix(std::move(product)), point.shape()).r;
}

Complex orbit_separation_entry(const BergmanPoint& point, std::int64_t m) {
  const Eigen::Index top = point.top();
  const CMatrix& r = point.matrix();
  const Complex formula = r(top - 1, top) - static_cast<double>(m) * r(top - 1, top - 1);

  const auto basis = cached_basis(point.shape());
  const auto induced = induced_section_matrix(unipotent_gamma(m, point.n()), *basis);
  const Complex product = (r * induced.matrix)(top - 1, top);
  if (std::abs(product - formula) > 1e-12 * std::max(1.0, std::abs(formula))) {
    std::ostringstream msg;
    msg << "orbit_separation_entry: formula " << formula << " disagrees with product " << product;
    throw InternalConsistencyError(msg.str());
  }
  return formula;
}

RMatrix pullback_jacobian(const BergmanPoint& point, const ProjectiveAutomorphism& gamma, double step) {
  const BergmanPoint image = pullback_point(point, gamma);
  const auto dim = canonical_dimension(point);
  RMatrix jac(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto dir = canonical_direction(point, j);
    const BergmanPoint plus = pullback_point(retract(point, dir, step), gamma);
    const BergmanPoint minus = pullback_point(retract(point, dir, -step), gamma);
    const CMatrix derivative = (plus.matrix() - minus.matrix()) / (2.0 * step);
    jac.col(j) = tangent_coordinates(image, derivative);
  }
  return jac;
}

IsometryDefect isometry_defect(const BergmanPoint& point, const ProjectiveAutomorphism& gamma, MetricKind kind,
                               const QuadratureSpec& quad, SampleTransport transport) {
  const BergmanPoint image = pullback_point(point, gamma);
  const auto source_samples = SampleSet::fubini_study(point.n(), quad);
  GramMatrix source = gram(point, kind, source_samples);
  GramMatrix target = transport == SampleTransport::matched
                          ? gram(image, kind, SampleSet::transported(point.n(), quad, gamma.matrix()))
                          : gram(image, kind, source_samples);
  RMatrix jac = pullback_jacobian(point, gamma);
  const double defect = congruence_defect(source.entries, target.entries, jac);
  return IsometryDefect{defect, std::move(jac), std::move(source), std::move(target)};
}

}  // namespace bvol
