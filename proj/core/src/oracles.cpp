#include "bvol/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bvol/errors.hpp"

namespace bvol::oracle {
namespace {

// Homogeneous coordinates with a 1 in the chart slot.
CVector lift(const ChartPoint& p) {
  const int n = p.n();
  CVector z(n + 1);
  int src = 0;
  for (int i = 0; i <= n; ++i) z[i] = (i == p.chart()) ? Complex(1.0) : p.affine()[src++];
  return z;
}

CVector monomial_values(int n, int k, const ChartPoint& p) {
  const auto exps = lex_sorted_monomials(n, k);
  const CVector z = lift(p);
  CVector v(static_cast<Eigen::Index>(exps.size()));
  for (std::size_t i = 0; i < exps.size(); ++i) {
    Complex term = 1.0;
    for (int j = 0; j <= n; ++j) {
      for (int e = 0; e < exps[i][static_cast<std::size_t>(j)]; ++e) term *= z[j];
    }
    v[static_cast<Eigen::Index>(i)] = term;
  }
  return v;
}

}  // namespace

std::vector<std::vector<int>> enumerate_monomials(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n + 1), 0);
  while (true) {
    int sum = 0;
    for (int x : e) sum += x;
    if (sum == k) out.push_back(e);
    std::size_t pos = 0;
    while (pos < e.size() && e[pos] == k) e[pos++] = 0;
    if (pos == e.size()) break;
    ++e[pos];
  }
  return out;
}

std::vector<std::vector<int>> lex_sorted_monomials(int n, int k) {
  auto out = enumerate_monomials(n, k);
  std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

std::int64_t brute_force_dimension(int n, int k) {
  return static_cast<std::int64_t>(enumerate_monomials(n, k).size());
}

double potential(const CMatrix& a, int n, int k, const ChartPoint& p) {
  const CVector av = a * monomial_values(n, k, p);
  return std::log(av.squaredNorm()) / (2.0 * k * kPi);
}

double tangent(const CMatrix& r, const CMatrix& dr, int n, int k, const ChartPoint& p) {
  const CVector v = monomial_values(n, k, p);
  const CVector rv = r * v;
  const CVector drv = dr * v;
  return 2.0 * rv.dot(drv).real() / rv.squaredNorm() / (2.0 * k * kPi);
}

double tangent_fd(const CMatrix& r, const CMatrix& dr, int n, int k, const ChartPoint& p, double h) {
  return (potential(r + h * dr, n, k, p) - potential(r - h * dr, n, k, p)) / (2.0 * h);
}

CMatrix metric_fd(const CMatrix& r, int n, int k, const ChartPoint& p) {
  return complex_hessian([&](const ChartPoint& q) { return potential(r, n, k, q); }, p);
}

double laplacian_fd(const CMatrix& r, const CMatrix& dr, int n, int k, const ChartPoint& p) {
  const CMatrix g = metric_fd(r, n, k, p);
  const CMatrix hess = complex_hessian([&](const ChartPoint& q) { return tangent(r, dr, n, k, q); }, p);
  return (g.inverse() * hess).trace().real();
}

GramSchmidtQR gram_schmidt_qr(const CMatrix& a) {
  const auto dim = a.cols();
  CMatrix q = a;
  CMatrix r = CMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      r(i, j) = q.col(i).dot(q.col(j));
      q.col(j) -= r(i, j) * q.col(i);
    }
    r(j, j) = q.col(j).norm();
    if (r(j, j) == Complex(0.0)) throw InvalidArgument("gram_schmidt_qr: rank deficient");
    q.col(j) /= r(j, j);
  }
  return {q, r};
}

CMatrix random_complex_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

CMatrix random_special_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  auto [q, r] = gram_schmidt_qr(random_complex_matrix(dim, rng));
  const Complex det = q.determinant();
  q.col(0) /= det / std::abs(det);
  return q;
}

}  // namespace bvol::oracle
