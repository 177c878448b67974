#pragma once

// Slow reference computations that share no code with the closed forms in
// the core library: brute-force monomial enumeration, finite differences of
// the potential, and Gram-Schmidt QR.

#include <cstdint>
#include <vector>

#include "bvol/bergman.hpp"
#include "bvol/projspace.hpp"
#include "bvol/types.hpp"

namespace bvol::oracle {

/// Exponent tuples in [0, k]^(n+1) summing to k, by exhaustive scan.
std::vector<std::vector<int>> enumerate_monomials(int n, int k);
/// Same list sorted by comparing the last coordinate first.
std::vector<std::vector<int>> lex_sorted_monomials(int n, int k);
std::int64_t brute_force_dimension(int n, int k);

/// (1/(2 k pi)) log |A v|^2 with v evaluated term by term.
double potential(const CMatrix& a, int n, int k, const ChartPoint& p);
/// (1/(2 k pi)) * 2 Re <R v, dR v> / |R v|^2, evaluated term by term.
double tangent(const CMatrix& r, const CMatrix& dr, int n, int k, const ChartPoint& p);

/// d/dt of the potential of R + t dR at t = 0, central differences.
double tangent_fd(const CMatrix& r, const CMatrix& dr, int n, int k, const ChartPoint& p, double h = 1e-5);

/// d_{bar a} d_b f for a real function of the affine coordinates, by
/// Richardson-extrapolated central differences with base step h.
template <class F>
CMatrix complex_hessian(F&& f, const ChartPoint& p, double h = 1e-3);

/// complex_hessian of the potential.
CMatrix metric_fd(const CMatrix& r, int n, int k, const ChartPoint& p);
/// tr(g^{-1} Hess u) with g and Hess u both from finite differences.
double laplacian_fd(const CMatrix& r, const CMatrix& dr, int n, int k, const ChartPoint& p);

/// Modified Gram-Schmidt on the columns; diag R holds the column norms.
struct GramSchmidtQR {
  CMatrix q;
  CMatrix r;
};
GramSchmidtQR gram_schmidt_qr(const CMatrix& a);

/// Haar-distributed special unitary matrix.
CMatrix random_special_unitary(Eigen::Index dim, std::mt19937_64& rng);
/// Standard complex Gaussian matrix.
CMatrix random_complex_matrix(Eigen::Index dim, std::mt19937_64& rng);

// ---------------------------------------------------------------------------

template <class F>
CMatrix complex_hessian(F&& f, const ChartPoint& p, double h) {
  const int n = p.n();
  const auto real_dim = 2 * n;
  auto eval = [&](const Eigen::VectorXd& x) {
    CVector w(n);
    for (int a = 0; a < n; ++a) w[a] = Complex(x[2 * a], x[2 * a + 1]);
    return f(ChartPoint(p.chart(), w));
  };
  Eigen::VectorXd x0(real_dim);
  for (int a = 0; a < n; ++a) {
    x0[2 * a] = p.affine()[a].real();
    x0[2 * a + 1] = p.affine()[a].imag();
  }
  auto second = [&](int i, int j, double step) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(real_dim);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(real_dim);
    e[i] = step;
    g[j] = step;
    return (eval(x0 + e + g) - eval(x0 + e - g) - eval(x0 - e + g) + eval(x0 - e - g)) / (4.0 * step * step);
  };
  Eigen::MatrixXd hess(real_dim, real_dim);
  for (int i = 0; i < real_dim; ++i) {
    for (int j = i; j < real_dim; ++j) {
      const double coarse = second(i, j, h);
      const double fine = second(i, j, h / 2.0);
      hess(i, j) = hess(j, i) = (4.0 * fine - coarse) / 3.0;
    }
  }
  CMatrix out(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double xx = hess(2 * a, 2 * b);
      const double yy = hess(2 * a + 1, 2 * b + 1);
      const double yx = hess(2 * a + 1, 2 * b);
      const double xy = hess(2 * a, 2 * b + 1);
      out(a, b) = Complex(xx + yy, yx - xy) / 4.0;
    }
  }
  return out;
}

}  // namespace bvol::oracle
