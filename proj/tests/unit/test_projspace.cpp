#include <algorithm>
#include <cmath>

#include "bvol/errors.hpp"
#include "bvol/oracles.hpp"
#include "bvol/projspace.hpp"
#include "doctest.h"

using namespace bvol;

TEST_SUITE("projspace") {
  TEST_CASE("section_space_dim matches brute-force enumeration") {
    for (int n = 1; n <= 4; ++n) {
      for (int k = 1; k <= 6; ++k) {
        CAPTURE(n);
        CAPTURE(k);
        CHECK(section_space_dim(n, k, 1000) == oracle::brute_force_dimension(n, k));
      }
    }
    CHECK(section_space_dim(1, 1) == 2);
    CHECK(section_space_dim(2, 3) == 10);
  }

  TEST_CASE("section_space_dim rejects bad input") {
    CHECK_THROWS_AS(section_space_dim(0, 1), InvalidArgument);
    CHECK_THROWS_AS(section_space_dim(1, 0), InvalidArgument);
    CHECK_THROWS_AS(section_space_dim(3, 10), InvalidArgument);  // 286 > 200
    CHECK(section_space_dim(3, 10, 1000) == 286);
  }

  TEST_CASE("basis order matches the sorted enumeration") {
    for (int n = 1; n <= 3; ++n) {
      for (int k = 1; k <= 4; ++k) {
        const auto basis = build_basis(n, k);
        const auto expected = oracle::lex_sorted_monomials(n, k);
        REQUIRE(basis.size() == expected.size());
        for (std::size_t i = 0; i < basis.size(); ++i) {
          const auto e = basis[i].exponents();
          CHECK(std::vector<int>(e.begin(), e.end()) == expected[i]);
          CHECK(basis.index_of(e) == i);
        }
      }
    }
  }

  TEST_CASE("last two basis elements are Z_n^k and Z_{n-1} Z_n^{k-1}") {
    const auto basis = build_basis(2, 3);
    const auto last = basis[basis.size() - 1].exponents();
    const auto before = basis[basis.size() - 2].exponents();
    CHECK(std::vector<int>(last.begin(), last.end()) == std::vector<int>{0, 0, 3});
    CHECK(std::vector<int>(before.begin(), before.end()) == std::vector<int>{0, 1, 2});
  }

  TEST_CASE("lex_less is a strict total order") {
    const auto basis = build_basis(2, 3);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK_FALSE(lex_less(basis[i], basis[i]));
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        CHECK(lex_less(basis[i], basis[j]) != lex_less(basis[j], basis[i]));
        CHECK(lex_less(basis[i], basis[j]) == (i < j));
      }
    }
    CHECK_THROWS_AS(lex_less(MultiIndex({1, 0}), MultiIndex({1, 0, 0})), InvalidArgument);
  }

  TEST_CASE("multi-index validation") {
    CHECK_THROWS_AS(MultiIndex({1, -1}), InvalidArgument);
    CHECK_THROWS_AS(MultiIndex({1, 1}, 3), InvalidArgument);
    CHECK(MultiIndex({2, 1}).degree() == 3);
    CHECK_FALSE(build_basis(1, 2).index_of(std::vector<int>{3, 0}).has_value());
  }

  TEST_CASE("chart selection uses argmax with the smallest index on ties") {
    CVector z(3);
    z << Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(0.5, 0.0);
    const auto p = ChartPoint::from_homogeneous(HomogeneousPoint(z));
    CHECK(p.chart() == 0);
    CHECK(std::abs(p.affine()[0] - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(p.affine()[1] - Complex(0.5, 0.0)) < 1e-15);

    const auto q = ChartPoint::in_chart(HomogeneousPoint(z), 2);
    CHECK(q.chart() == 2);
    CHECK(std::abs(q.affine()[0] - Complex(2.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(ChartPoint::in_chart(HomogeneousPoint(CVector::Unit(3, 0)), 1), InvalidArgument);
  }

  TEST_CASE("homogeneous round trip") {
    CVector w(2);
    w << Complex(0.3, -0.2), Complex(-0.7, 0.1);
    const ChartPoint p(1, w);
    const auto z = p.homogeneous().coords();
    CHECK(z[1] == Complex(1.0));
    const auto back = ChartPoint::from_homogeneous(HomogeneousPoint(z));
    CHECK(back.chart() == 1);
    CHECK((back.affine() - w).norm() < 1e-15);
  }

  TEST_CASE("monomial jet derivatives match finite differences") {
    const auto basis = build_basis(2, 3);
    CVector w(2);
    w << Complex(0.4, 0.1), Complex(-0.3, 0.5);
    const ChartPoint p(0, w);
    const auto jet = eval_monomials(basis, p, DerivativeOrder::second);
    const double h = 1e-6;
    for (int a = 0; a < 2; ++a) {
      CVector wp = w;
      CVector wm = w;
      wp[a] += h;
      wm[a] -= h;
      const auto vp = eval_monomials(basis, ChartPoint(0, wp), DerivativeOrder::first);
      const auto vm = eval_monomials(basis, ChartPoint(0, wm), DerivativeOrder::first);
      const CVector dv = (vp.values - vm.values) / (2.0 * h);
      CHECK((dv - jet.jacobian.col(a)).norm() < 1e-8);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        const CVector d2 = (vp.jacobian.row(idx) - vm.jacobian.row(idx)).transpose() / (2.0 * h);
        CHECK((d2 - jet.hessians[i].col(a)).norm() < 1e-7);
      }
    }
  }

  TEST_CASE("FS samples are deterministic and unit norm") {
    for (const auto method : {QuadratureMethod::monte_carlo, QuadratureMethod::low_discrepancy}) {
      QuadratureSpec q;
      q.sample_count = 500;
      q.seed = 9;
      q.method = method;
      const auto a = sample_fs(2, q);
      const auto b = sample_fs(2, q);
      REQUIRE(a.size() == 500);
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].coords() == b[i].coords());
        CHECK(std::abs(a[i].coords().norm() - 1.0) < 1e-14);
      }
      q.seed = 10;
      CHECK(sample_fs(2, q)[0].coords() != a[0].coords());
    }
  }

  TEST_CASE("FS samples reproduce the uniform law of |Z_0|^2 on CP^1") {
    // Under the FS probability measure t = |Z_0|^2 is uniform on [0, 1].
    for (const auto method :
         {QuadratureMethod::monte_carlo, QuadratureMethod::low_discrepancy, QuadratureMethod::polar_grid}) {
      QuadratureSpec q;
      q.sample_count = 40000;
      q.seed = 2;
      q.method = method;
      double m1 = 0.0;
      double m2 = 0.0;
      const auto pts = sample_fs(1, q);
      for (const auto& z : pts) {
        const double t = std::norm(z.coords()[0]);
        m1 += t;
        m2 += t * t;
      }
      m1 /= static_cast<double>(pts.size());
      m2 /= static_cast<double>(pts.size());
      CAPTURE(to_string(method));
      CHECK(m1 == doctest::Approx(0.5).epsilon(0.01));
      CHECK(m2 == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    }
  }

  TEST_CASE("quadrature validation") {
    QuadratureSpec q;
    q.method = QuadratureMethod::polar_grid;
    CHECK_NOTHROW(q.validate(1));
    CHECK_THROWS_AS(q.validate(2), InvalidArgument);
    q.method = QuadratureMethod::monte_carlo;
    q.sample_count = 0;
    CHECK_THROWS_AS(q.validate(1), InvalidArgument);
    CHECK(parse_quadrature_method("low_discrepancy") == QuadratureMethod::low_discrepancy);
    CHECK_THROWS_AS(parse_quadrature_method("simpson"), InvalidArgument);
  }
}
