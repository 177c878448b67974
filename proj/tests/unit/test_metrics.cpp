#include <cmath>
#include <random>

#include "bvol/autgroup.hpp"
#include "bvol/errors.hpp"
#include "bvol/metrics.hpp"
#include "doctest.h"

using namespace bvol;

namespace {

QuadratureSpec quad(std::size_t count, std::uint64_t seed = 0,
                    QuadratureMethod method = QuadratureMethod::monte_carlo) {
  QuadratureSpec q;
  q.sample_count = count;
  q.seed = seed;
  q.method = method;
  return q;
}

void check_close(double value, double se, double expected) {
  CAPTURE(value);
  CAPTURE(se);
  CAPTURE(expected);
  CHECK(std::abs(value - expected) <= 4.0 * se + 1e-12);
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("Gram matrices at the FS point, k = 1") {
    // Tangent functions are (1/pi)(2t - 1) and (1/pi) sqrt(t(1 - t)) cos(theta)
    // with t = |Z_0|^2 uniform: L2 norms 1/(3 pi^2) and 1/(12 pi^2), and
    // Delta = -4 pi on all of them.
    const auto fs = BergmanPoint::identity({1, 1});
    const auto samples = SampleSet::fubini_study(1, quad(100000, 4));
    const auto m = gram(fs, MetricKind::mabuchi, samples);
    const auto c = gram(fs, MetricKind::calabi, samples);
    const double pi2 = kPi * kPi;
    const double mab[3] = {1.0 / (3.0 * pi2), 1.0 / (12.0 * pi2), 1.0 / (12.0 * pi2)};
    for (int a = 0; a < 3; ++a) {
      check_close(m.entries(a, a), m.std_errors(a, a), mab[a]);
      check_close(c.entries(a, a), c.std_errors(a, a), 16.0 * pi2 * mab[a]);
      for (int b = 0; b < 3; ++b) {
        if (a != b) check_close(m.entries(a, b), m.std_errors(a, b), 0.0);
      }
    }
  }

  TEST_CASE("volume density at the FS point") {
    const auto fs = BergmanPoint::identity({1, 1});
    const auto vd = volume_density(fs, MetricKind::calabi, quad(100000, 6));
    check_close(vd.density.value, vd.density.std_error, 16.0 / (3.0 * std::sqrt(3.0)));
    CHECK(vd.density.std_error > 0.0);
    CHECK(vd.density.std_error < 0.05 * vd.density.value);
  }

  TEST_CASE("Gram health at random points") {
    std::mt19937_64 rng(12);
    for (const BasisShape shape : {BasisShape{1, 1}, BasisShape{1, 3}, BasisShape{2, 1}}) {
      const auto r = random_walk_point(shape, rng);
      for (const auto kind : {MetricKind::calabi, MetricKind::mabuchi}) {
        const auto g = gram(r, kind, quad(5000, 1));
        const auto top = r.top();
        CHECK(g.dim() == top * top + 2 * top);
        CHECK((g.entries.array() == g.entries.transpose().array()).all());
        CHECK(g.is_symmetric());
        CHECK(g.min_eigenvalue() > 0.0);
      }
    }
  }

  TEST_CASE("total volume is one") {
    const auto fs = BergmanPoint::identity({1, 2});
    const auto exact = total_volume(BergmanPoint::identity({1, 1}), quad(1000));
    CHECK(exact.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(exact.std_error == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    std::mt19937_64 rng(31);
    for (int i = 0; i < 5; ++i) {
      const auto r = random_walk_point({1, 2}, rng);
      const auto v = total_volume(r, quad(100000, 8, QuadratureMethod::low_discrepancy));
      check_close(v.value, v.std_error, 1.0);
    }
    const auto v = total_volume(fs, quad(20000, 8, QuadratureMethod::polar_grid));
    CHECK(v.value == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("transported samples estimate the same integrals") {
    std::mt19937_64 rng(17);
    const auto r = random_walk_point({1, 1}, rng);
    const auto gamma = unipotent_gamma(2, 1);
    const auto moved = SampleSet::transported(1, quad(100000, 3), gamma.matrix());
    for (double p : moved.proposal()) CHECK(p > 0.0);
    const auto image = pullback_point(r, gamma);
    const auto v = total_volume(image, moved);
    check_close(v.value, v.std_error, 1.0);

    const auto plain = volume_density(image, MetricKind::mabuchi, quad(200000, 9));
    const auto matched = volume_density(image, MetricKind::mabuchi, moved);
    const double se = std::hypot(plain.density.std_error, matched.density.std_error);
    check_close(matched.density.value, se, plain.density.value);
  }

  TEST_CASE("Mabuchi pairing annihilates constants") {
    const RVector u = RVector::LinSpaced(50, -1.0, 2.0);
    const RVector w = RVector::LinSpaced(50, 0.5, 1.5);
    const RVector c = RVector::Constant(50, 3.0);
    CHECK(std::abs(mabuchi_from_values(u, c, w).value) < 1e-14);
    CHECK(mabuchi_potential_from_values(u, c, w).value != doctest::Approx(0.0));
    CHECK_THROWS_AS(calabi_from_values(u, RVector(3), w), InvalidArgument);
  }

  TEST_CASE("pairings agree with the Gram entries") {
    std::mt19937_64 rng(40);
    const auto r = random_walk_point({1, 2}, rng);
    const auto samples = SampleSet::fubini_study(1, quad(3000, 2));
    const auto gc = gram(r, MetricKind::calabi, samples);
    const auto gm = gram(r, MetricKind::mabuchi, samples);
    const auto d1 = canonical_direction(r, 0);
    const auto d2 = canonical_direction(r, 3);
    CHECK(calabi_pairing(r, d1, d2, samples).value == doctest::Approx(gc.entries(0, 3)).epsilon(1e-12));
    CHECK(mabuchi_pairing(r, d1, d2, samples).value == doctest::Approx(gm.entries(0, 3)).epsilon(1e-12));
  }

  TEST_CASE("too few samples for a positive definite Gram") {
    CHECK_THROWS_AS(volume_density(BergmanPoint::identity({1, 1}), MetricKind::mabuchi, quad(2)),
                    EstimationFailure);
  }

  TEST_CASE("congruence defect") {
    RMatrix g(2, 2);
    g << 2.0, 0.5, 0.5, 1.0;
    const RMatrix j = RMatrix::Identity(2, 2);
    CHECK(congruence_defect(g, g, j) == 0.0);
    CHECK(congruence_defect(g, 2.0 * g, j) == doctest::Approx(1.0));
  }

  TEST_CASE("metric names") {
    CHECK(parse_metric_kind("mabuchi") == MetricKind::mabuchi);
    CHECK(to_string(MetricKind::calabi) == "calabi");
    CHECK_THROWS_AS(parse_metric_kind("ricci"), InvalidArgument);
  }
}
