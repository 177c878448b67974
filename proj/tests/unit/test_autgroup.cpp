#include <cmath>
#include <random>

#include "bvol/autgroup.hpp"
#include "bvol/errors.hpp"
#include "bvol/oracles.hpp"
#include "doctest.h"

using namespace bvol;

namespace {

QuadratureSpec quad(std::size_t count, std::uint64_t seed = 0) {
  QuadratureSpec q;
  q.sample_count = count;
  q.seed = seed;
  return q;
}

}  // namespace

TEST_SUITE("autgroup") {
  TEST_CASE("induced matrix of gamma_m on CP^1, k = 2") {
    // Z_0 -> Z_0 - m Z_1 on the basis (Z_0^2, Z_0 Z_1, Z_1^2).
    const auto basis = build_basis(1, 2);
    for (std::int64_t m = -4; m <= 4; ++m) {
      const auto a = induced_section_matrix(unipotent_gamma(m, 1), basis);
      REQUIRE(a.exact.has_value());
      IntMatrix expected(3, 3);
      expected << 1, -2 * m, m * m, 0, 1, -m, 0, 0, 1;
      CHECK(*a.exact == expected);
      CHECK(a.is_unit_upper_triangular());
      CHECK((a.matrix - expected.cast<double>().cast<Complex>()).norm() == 0.0);
    }
  }

  TEST_CASE("gamma_m pulls Z_{n-1} back to Z_{n-1} - m Z_n") {
    const auto basis = build_basis(2, 1);
    const auto a = induced_section_matrix(unipotent_gamma(3, 2), basis);
    IntMatrix expected = IntMatrix::Identity(3, 3);
    expected(1, 2) = -3;
    CHECK(*a.exact == expected);
  }

  TEST_CASE("power identity and corner entries") {
    for (int n = 1; n <= 3; ++n) {
      for (int k = 1; k <= 3; ++k) {
        const BasisShape shape{n, k};
        if (shape.dimension() > 30) continue;
        const auto basis = cached_basis(shape);
        CHECK(power_identity_check(unipotent_gamma(1, n), *basis, 5));
        const auto top = static_cast<Eigen::Index>(basis->size()) - 1;
        for (std::int64_t m = -5; m <= 5; ++m) {
          const auto a = induced_section_matrix(unipotent_gamma(m, n), *basis);
          CHECK(a.is_unit_upper_triangular());
          CHECK((*a.exact)(top - 1, top) == -m);
        }
      }
    }
  }

  TEST_CASE("exact arithmetic overflows loudly") {
    const auto basis = build_basis(1, 6);
    CHECK_THROWS_AS(induced_section_matrix(unipotent_gamma(std::int64_t{1} << 10, 1), basis, kExactCoefficientBound),
                    OverflowError);
    CHECK_NOTHROW(induced_section_matrix(unipotent_gamma(100, 1), basis));
  }

  TEST_CASE("exact inverse and powers") {
    IntMatrix g = IntMatrix::Identity(3, 3);
    g(0, 1) = 2;
    g(0, 2) = -1;
    g(1, 2) = 5;
    const IntMatrix inv = exact_unit_triangular_inverse(g);
    CHECK(exact_product(g, inv) == IntMatrix::Identity(3, 3));
    CHECK(exact_power(g, -2) == exact_product(inv, inv));
    CHECK(exact_power(g, 0) == IntMatrix::Identity(3, 3));
    IntMatrix lower = g.transpose();
    CHECK(exact_product(lower, exact_unit_triangular_inverse(lower)) == IntMatrix::Identity(3, 3));
  }

  TEST_CASE("general automorphisms use the complex path") {
    std::mt19937_64 rng(6);
    const ProjectiveAutomorphism g(oracle::random_complex_matrix(2, rng));
    CHECK(std::abs(std::abs(g.matrix().determinant()) - 1.0) < 1e-12);
    const auto basis = build_basis(1, 2);
    const auto a = induced_section_matrix(g, basis);
    CHECK_FALSE(a.exact.has_value());
    CHECK(std::abs(a.matrix.determinant() - Complex(1.0)) < 1e-10);

    // Composition: induced(g h) = induced(h) induced(g) up to a scalar.
    const ProjectiveAutomorphism h(oracle::random_complex_matrix(2, rng));
    const CMatrix gh = induced_section_matrix(g * h, basis).matrix;
    const CMatrix prod = induced_section_matrix(h, basis).matrix * a.matrix;
    CHECK(are_equivalent(gh, prod, 1e-10));
  }

  TEST_CASE("ill-conditioned automorphisms are rejected") {
    CMatrix g = CMatrix::Identity(2, 2);
    g(1, 1) = 1e-13;
    CHECK_THROWS_AS(ProjectiveAutomorphism{g}, ConditioningError);
    IntMatrix twice = IntMatrix::Identity(2, 2) * 2;
    CHECK_THROWS_AS(ProjectiveAutomorphism::from_integer(twice), InvalidArgument);
  }

  TEST_CASE("pullback of the FS point along the orbit") {
    const auto fs = BergmanPoint::identity({1, 1});
    for (std::int64_t m = -3; m <= 3; ++m) {
      const auto image = pullback_point(fs, unipotent_gamma(m, 1));
      CMatrix expected = CMatrix::Identity(2, 2);
      expected(0, 1) = static_cast<double>(-m);
      CHECK((image.matrix() - expected).norm() == 0.0);
      CHECK(orbit_separation_entry(fs, m) == Complex(static_cast<double>(-m)));
    }
  }

  TEST_CASE("orbit separation entry is affine in m") {
    std::mt19937_64 rng(10);
    for (const BasisShape shape : {BasisShape{1, 2}, BasisShape{2, 2}}) {
      const auto r = random_walk_point(shape, rng);
      const auto top = r.top();
      const double slope = -r.diag(top - 1);
      for (std::int64_t m = -6; m <= 6; ++m) {
        const Complex e = orbit_separation_entry(r, m);
        CHECK(std::abs(e - (r.matrix()(top - 1, top) + static_cast<double>(m) * slope)) < 1e-12);
        CHECK(std::abs(orbit_separation_entry(r, m + 1) - e) >= r.diag(top - 1) - 1e-12);
      }
    }
  }

  TEST_CASE("pullback by a general automorphism matches the Hermitian form") {
    std::mt19937_64 rng(14);
    const auto r = random_walk_point({1, 2}, rng);
    const ProjectiveAutomorphism g(oracle::random_complex_matrix(2, rng));
    const auto image = pullback_point(r, g);
    const auto basis = build_basis(1, 2);
    CHECK(are_equivalent(image.matrix(), r.matrix() * induced_section_matrix(g, basis).matrix, 1e-10));
  }

  TEST_CASE("pullback metric is the pulled-back potential") {
    // phi_{R A}(w) = phi_R(gamma^{-1} w): evaluate both at matched points.
    std::mt19937_64 rng(15);
    const auto r = random_walk_point({1, 1}, rng);
    const auto gamma = unipotent_gamma(3, 1);
    const auto image = pullback_point(r, gamma);
    QuadratureSpec q;
    q.sample_count = 20;
    for (const auto& z : sample_fs(1, q)) {
      CVector moved = gamma.matrix().inverse() * z.coords();
      const auto p = ChartPoint::in_chart(z, 1);
      const auto pm = ChartPoint::in_chart(HomogeneousPoint(moved), 1);
      // Both charts have Z_1 = 1 since gamma fixes Z_1.
      CHECK(potential(image, p) == doctest::Approx(potential(r, pm)).epsilon(1e-12));
    }
  }

  TEST_CASE("pullback Jacobian of the unipotent action") {
    const auto fs = BergmanPoint::identity({1, 1});
    const RMatrix j = pullback_jacobian(fs, unipotent_gamma(2, 1));
    // x_1 = Re(r_01 - m r_00), so dx_1 / dx_0 = -m r_00.
    RMatrix expected = RMatrix::Identity(3, 3);
    expected(1, 0) = -2.0;
    CHECK((j - expected).norm() < 1e-8);
    CHECK(j.determinant() == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("isometry defect with matched samples") {
    std::mt19937_64 rng(23);
    for (const BasisShape shape : {BasisShape{1, 1}, BasisShape{1, 2}}) {
      const auto r = random_walk_point(shape, rng);
      for (const std::int64_t m : {1, 5}) {
        for (const auto kind : {MetricKind::calabi, MetricKind::mabuchi}) {
          const auto d = isometry_defect(r, unipotent_gamma(m, 1), kind, quad(20000, 2));
          CHECK(d.defect < 0.01);
          // Negative control: dropping the Jacobian breaks the congruence.
          const RMatrix identity = RMatrix::Identity(d.jacobian.rows(), d.jacobian.cols());
          CHECK(congruence_defect(d.source.entries, d.image.entries, identity) > 0.05);
        }
      }
    }
  }

  TEST_CASE("plain sampling shows Monte Carlo noise only") {
    const auto fs = BergmanPoint::identity({1, 1});
    const auto d = isometry_defect(fs, unipotent_gamma(1, 1), MetricKind::mabuchi, quad(50000, 5),
                                   SampleTransport::plain);
    CHECK(d.defect < 0.1);
  }
}
