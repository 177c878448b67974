#include <cmath>
#include <random>

#include "bvol/bergman.hpp"
#include "bvol/errors.hpp"
#include "bvol/oracles.hpp"
#include "doctest.h"

using namespace bvol;

namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ChartPoint origin(int n, int chart = 0) { return ChartPoint(chart, CVector::Zero(n)); }

}  // namespace

TEST_SUITE("bergman") {
  TEST_CASE("SL normalization") {
    CMatrix a(2, 2);
    a << Complex(2.0, 1.0), Complex(0.5, 0.0), Complex(-1.0, 0.0), Complex(3.0, -2.0);
    const SLMatrix s(a);
    CHECK(std::abs(s.matrix().determinant() - Complex(1.0)) < 1e-12);
    CHECK_THROWS_AS(SLMatrix(CMatrix::Zero(3, 3)), ConditioningError);
    CHECK_THROWS_AS(SLMatrix(CMatrix::Zero(2, 3)), InvalidArgument);
  }

  TEST_CASE("BergmanPoint validation") {
    const BasisShape shape{1, 1};
    CHECK_NOTHROW(BergmanPoint(diag2(2.0, 0.5), shape));
    CHECK_THROWS_AS(BergmanPoint(diag2(2.0, 0.4), shape), InvalidArgument);
    CHECK_THROWS_AS(BergmanPoint(diag2(-2.0, -0.5), shape), InvalidArgument);
    CMatrix lower = CMatrix::Identity(2, 2);
    lower(1, 0) = 1e-20;
    CHECK_THROWS_AS(BergmanPoint(lower, shape), InvalidArgument);
    CHECK_THROWS_AS(BergmanPoint(CMatrix::Identity(3, 3), shape), InvalidArgument);
  }

  TEST_CASE("canonical QR of simple matrices") {
    CMatrix rot(2, 2);
    rot << 0.0, 1.0, -1.0, 0.0;
    const auto [q, r] = canonical_qr(SLMatrix(rot));
    CHECK((r.matrix() - CMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((q - rot).norm() < 1e-15);

    CMatrix upper(2, 2);
    upper << 1.0, Complex(3.0, -1.0), 0.0, 1.0;
    const auto f = canonical_qr(SLMatrix(upper));
    CHECK((f.r.matrix() - upper).norm() < 1e-14);
    CHECK((f.q - CMatrix::Identity(2, 2)).norm() < 1e-14);
  }

  TEST_CASE("canonical QR agrees with Gram-Schmidt") {
    std::mt19937_64 rng(21);
    for (int dim = 2; dim <= 6; ++dim) {
      const SLMatrix a(oracle::random_complex_matrix(dim, rng));
      const auto [q, r] = canonical_qr(a);
      const auto gs = oracle::gram_schmidt_qr(a.matrix());
      // det A = 1 forces det Q = 1 and a unit diagonal product, so the
      // positive-diagonal factors are the canonical ones.
      CHECK((q - gs.q).norm() < 1e-10);
      CHECK((r.matrix() - gs.r).norm() < 1e-10);
      CHECK((q * r.matrix() - a.matrix()).norm() < 1e-12);
    }
  }

  TEST_CASE("canonical QR rejects ill-conditioned input") {
    CMatrix a = CMatrix::Identity(3, 3);
    a(2, 2) = 1e-14;
    CHECK_THROWS_AS(canonical_qr(SLMatrix(a)), ConditioningError);
  }

  TEST_CASE("equivalence up to unitary and scale") {
    std::mt19937_64 rng(5);
    const CMatrix a = oracle::random_complex_matrix(3, rng);
    const CMatrix u = oracle::random_special_unitary(3, rng);
    CHECK(are_equivalent(a, 2.5 * u * a));
    CHECK_FALSE(are_equivalent(a, a + 0.01 * CMatrix::Identity(3, 3)));
  }

  TEST_CASE("potential, metric and density at the identity") {
    const ChartPoint z0 = origin(1);
    const auto fs = BergmanPoint::identity({1, 1});
    CHECK(potential(fs, z0) == doctest::Approx(0.0));
    const CMatrix g = metric_tensor(fs, z0);
    CHECK(g(0, 0).real() == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(density_ratio(fs, z0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fubini_study_determinant(CVector::Zero(1)) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));

    // k = 2 with unit coefficients: phi = log(1 + |w|^2 + |w|^4) / (4 pi).
    const auto id2 = BergmanPoint::identity({1, 2});
    CHECK(metric_tensor(id2, z0)(0, 0).real() == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
    CHECK(density_ratio(id2, z0) == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("density ratio of diag(2, 1/2)") {
    const BergmanPoint r(diag2(2.0, 0.5), {1, 1});
    CHECK(density_ratio(r, origin(1, 0)) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(density_ratio(r, origin(1, 1)) == doctest::Approx(16.0).epsilon(1e-14));
  }

  TEST_CASE("tangent function of diag(1, -1) at the poles") {
    const auto fs = BergmanPoint::identity({1, 1});
    const TangentParam d(fs, diag2(1.0, -1.0));
    const double north = tangent_function(fs, d, origin(1, 0));
    const double south = tangent_function(fs, d, origin(1, 1));
    CHECK(north == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(north - south == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  }

  TEST_CASE("first eigenfunctions of the FS Laplacian") {
    // Delta u = -4 pi u for every tangent function at R = I, k = 1.
    const auto fs = BergmanPoint::identity({1, 1});
    QuadratureSpec q;
    q.sample_count = 50;
    for (const auto& z : sample_fs(1, q)) {
      const auto p = ChartPoint::from_homogeneous(z);
      for (const auto& dr : canonical_directions(fs)) {
        const TangentParam d(fs, dr);
        const double u = tangent_function(fs, d, p);
        CHECK(laplacian_of(fs, d, p) == doctest::Approx(-4.0 * kPi * u).epsilon(1e-12).scale(1.0));
      }
    }
  }

  TEST_CASE("closed forms match finite differences") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> normal;
    QuadratureSpec q;
    q.sample_count = 12;
    q.seed = 3;
    for (int n = 1; n <= 2; ++n) {
      const auto pts = sample_fs(n, q);
      for (int k = 1; k <= 3; ++k) {
        const BasisShape shape{n, k};
        if (shape.dimension() > 10) continue;
        for (const auto& z : pts) {
          const auto r = random_walk_point(shape, rng);
          const auto p = ChartPoint::from_homogeneous(z);
          CMatrix dr = CMatrix::Zero(r.dim(), r.dim());
          for (const auto& e : canonical_directions(r)) dr += normal(rng) * e;
          const TangentParam d(r, dr);
          const CMatrix gf = oracle::metric_fd(r.matrix(), n, k, p);
          CHECK((metric_tensor(r, p) - gf).norm() / gf.norm() < 1e-6);
          CHECK(tangent_function(r, d, p) ==
                doctest::Approx(oracle::tangent(r.matrix(), dr, n, k, p)).epsilon(1e-12).scale(1.0));
          CHECK(tangent_function(r, d, p) ==
                doctest::Approx(oracle::tangent_fd(r.matrix(), dr, n, k, p)).epsilon(1e-7).scale(1.0));
          CHECK(laplacian_of(r, d, p) ==
                doctest::Approx(oracle::laplacian_fd(r.matrix(), dr, n, k, p)).epsilon(1e-5).scale(1.0));
        }
      }
    }
  }

  TEST_CASE("density ratio equals the determinant ratio") {
    std::mt19937_64 rng(8);
    const auto r = random_walk_point({2, 2}, rng);
    CVector w(2);
    w << Complex(0.2, 0.3), Complex(-0.5, 0.1);
    const ChartPoint p(1, w);
    const double expected = metric_tensor(r, p).determinant().real() / fubini_study_determinant(w);
    CHECK(density_ratio(r, p) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("potential shifts by a constant under A -> rho Q A") {
    std::mt19937_64 rng(13);
    const auto r = random_walk_point({2, 1}, rng);
    const double rho = 3.7;
    const CMatrix a = rho * oracle::random_special_unitary(r.dim(), rng) * r.matrix();
    QuadratureSpec q;
    q.sample_count = 30;
    for (const auto& z : sample_fs(2, q)) {
      const auto p = ChartPoint::from_homogeneous(z);
      CHECK(potential(HermitianForm::of_matrix(a), r.shape(), p) - potential(r, p) ==
            doctest::Approx(std::log(rho) / kPi).epsilon(1e-12));
    }
    CHECK((canonical_qr(SLMatrix(a), r.shape()).r.matrix() - r.matrix()).norm() < 1e-12);
  }

  TEST_CASE("canonical coordinates round trip") {
    std::mt19937_64 rng(2);
    for (const BasisShape shape : {BasisShape{1, 1}, BasisShape{1, 3}, BasisShape{2, 2}}) {
      const auto r = random_walk_point(shape, rng);
      const auto top = r.top();
      CHECK(canonical_dimension(r) == top * top + 2 * top);
      const auto back = from_coordinates(coordinates(r), shape);
      CHECK((back.matrix() - r.matrix()).norm() < 1e-14);
      for (Eigen::Index i = 0; i < canonical_dimension(r); ++i) {
        const RVector x = tangent_coordinates(r, canonical_direction(r, i).matrix());
        CHECK((x - RVector::Unit(x.size(), i)).norm() < 1e-15);
      }
    }
  }

  TEST_CASE("retraction stays on the slice and follows the direction") {
    std::mt19937_64 rng(4);
    const auto r = random_walk_point({1, 2}, rng);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < canonical_dimension(r); ++i) {
      const auto d = canonical_direction(r, i);
      const auto moved = retract(r, d, h);
      const RVector dx = (coordinates(moved) - coordinates(r)) / h;
      CHECK((dx - RVector::Unit(dx.size(), i)).norm() < 1e-5);
    }
  }

  TEST_CASE("tangent parameters must be tangent to det = 1") {
    const auto fs = BergmanPoint::identity({1, 1});
    CHECK_THROWS_AS(TangentParam(fs, diag2(1.0, 1.0)), InvalidArgument);
    CHECK_NOTHROW(TangentParam::zero(fs));
  }

  TEST_CASE("random walk points are deterministic and bounded") {
    std::mt19937_64 a(99);
    std::mt19937_64 b(99);
    const auto ra = random_walk_point({1, 2}, a);
    const auto rb = random_walk_point({1, 2}, b);
    CHECK(ra.matrix() == rb.matrix());
    CHECK(coordinates(ra).cwiseAbs().maxCoeff() <= 1.0);
  }
}
