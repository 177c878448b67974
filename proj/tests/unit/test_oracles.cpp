#include <random>

#include "bvol/oracles.hpp"
#include "doctest.h"

using namespace bvol;

TEST_SUITE("oracles") {
  TEST_CASE("enumeration counts stars and bars") {
    CHECK(oracle::brute_force_dimension(1, 1) == 2);
    CHECK(oracle::brute_force_dimension(1, 4) == 5);
    CHECK(oracle::brute_force_dimension(2, 2) == 6);
    CHECK(oracle::brute_force_dimension(3, 5) == 56);
  }

  TEST_CASE("lex order compares the last coordinate first") {
    const std::vector<std::vector<int>> expected{{2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
    CHECK(oracle::lex_sorted_monomials(2, 2) == expected);
  }

  TEST_CASE("Gram-Schmidt reconstructs the matrix") {
    std::mt19937_64 rng(3);
    const CMatrix a = oracle::random_complex_matrix(4, rng);
    const auto [q, r] = oracle::gram_schmidt_qr(a);
    CHECK((q * r - a).norm() < 1e-12);
    CHECK((q.adjoint() * q - CMatrix::Identity(4, 4)).norm() < 1e-12);
  }

  TEST_CASE("random special unitary has unit determinant") {
    std::mt19937_64 rng(4);
    for (int dim = 2; dim <= 6; ++dim) {
      const CMatrix q = oracle::random_special_unitary(dim, rng);
      CHECK(std::abs(q.determinant() - Complex(1.0)) < 1e-12);
    }
  }

  TEST_CASE("finite-difference metric of the FS potential at the origin") {
    // phi = log(1 + |w|^2) / (2 pi) has d dbar phi = 1 / (2 pi) at w = 0.
    const ChartPoint origin(0, CVector::Zero(1));
    const CMatrix g = oracle::metric_fd(CMatrix::Identity(2, 2), 1, 1, origin);
    CHECK(g(0, 0).real() == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-8));
    CHECK(std::abs(g(0, 0).imag()) < 1e-9);
  }
}
