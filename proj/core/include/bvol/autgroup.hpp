#pragma once

// Automorphisms of CP^n acting on Bergman points.
//
// Convention: the automorphism attached to g in GL(n+1, C) pulls the
// coordinate function Z_i back to (g^{-1} Z)_i, so the pullback of the
// monomial S_i is sum_j A_ij S_j with A the induced section matrix, and the
// pullback of omega_R is omega_{R A}. For gamma_m = I + m E_{n-1,n} this
// gives gamma_m^* Z_{n-1} = Z_{n-1} - m Z_n.

#include <cstdint>
#include <optional>

#include "bvol/bergman.hpp"
#include "bvol/metrics.hpp"
#include "bvol/projspace.hpp"

namespace bvol {

/// Bound on exact induced-matrix coefficients; keeps them exactly
/// representable as doubles.
inline constexpr std::int64_t kExactCoefficientBound = std::int64_t{1} << 53;

class ProjectiveAutomorphism {
 public:
  /// Invertible g rescaled so that |det g| = 1. Throws ConditioningError
  /// when the condition number exceeds 1e12.
  explicit ProjectiveAutomorphism(CMatrix g);
  /// Integer matrix with |det| = 1, kept exactly alongside its floating copy.
  static ProjectiveAutomorphism from_integer(const IntMatrix& g);

  int n() const noexcept { return static_cast<int>(g_.rows()) - 1; }
  const CMatrix& matrix() const noexcept { return g_; }
  const std::optional<IntMatrix>& exact() const noexcept { return exact_; }
  /// Exact integer inverse when g is integral and triangular with unit
  /// diagonal; nullopt otherwise.
  std::optional<IntMatrix> exact_inverse() const;

  ProjectiveAutomorphism operator*(const ProjectiveAutomorphism& other) const;

 private:
  CMatrix g_;
  std::optional<IntMatrix> exact_;
};

/// gamma_m = I + m E_{n-1,n} (zero-indexed).
ProjectiveAutomorphism unipotent_gamma(std::int64_t m, int n);

struct InducedSectionMatrix {
  CMatrix matrix;                  // SL-normalized
  std::optional<IntMatrix> exact;  // integer coefficients when available
  BasisShape shape;

  bool is_unit_upper_triangular() const;
};

/// Row i holds the lex-basis coefficients of the pullback of S_i. Integer
/// automorphisms with an exact inverse are expanded in checked integer
/// arithmetic (OverflowError beyond `bound`); others in complex floating point.
InducedSectionMatrix induced_section_matrix(const ProjectiveAutomorphism& gamma, const MonomialBasis& basis,
                                            std::int64_t bound = kExactCoefficientBound);

/// Integer matrix product with overflow and bound checks.
IntMatrix exact_product(const IntMatrix& a, const IntMatrix& b, std::int64_t bound = kExactCoefficientBound);
/// Inverse of an integer triangular matrix with unit diagonal.
IntMatrix exact_unit_triangular_inverse(const IntMatrix& a);
/// a^m for integer m; negative powers need a unit triangular a.
IntMatrix exact_power(const IntMatrix& a, std::int64_t m, std::int64_t bound = kExactCoefficientBound);

/// Whether induced(gamma1^m) == induced(gamma1)^m exactly for |m| <= m_max.
bool power_identity_check(const ProjectiveAutomorphism& gamma1, const MonomialBasis& basis, int m_max = 5);

/// Canonical point of gamma^* omega_R. For unit upper triangular induced
/// matrices this is R A itself, and the QR rotation is verified to be the
/// identity.
BergmanPoint pullback_point(const BergmanPoint& point, const ProjectiveAutomorphism& gamma);

/// Entry (N_k - 1, N_k) of R A_m from r_{N-1,N} - m r_{N-1,N-1}, cross-checked
/// against the explicit product; throws InternalConsistencyError if the two
/// disagree beyond 1e-12.
Complex orbit_separation_entry(const BergmanPoint& point, std::int64_t m);

/// Jacobian of R -> pullback_point(R, gamma) in canonical coordinates, by
/// central differences along the determinant-preserving retraction.
RMatrix pullback_jacobian(const BergmanPoint& point, const ProjectiveAutomorphism& gamma, double step = 1e-5);

enum class SampleTransport {
  /// Image Gram uses the source FS draws pushed through the automorphism.
  matched,
  /// Both Grams use the same plain FS draws.
  plain,
};

struct IsometryDefect {
  double defect;
  RMatrix jacobian;
  GramMatrix source;
  GramMatrix image;
};

/// ||G(R) - J^T G(gamma^* R) J||_F / ||G(R)||_F.
IsometryDefect isometry_defect(const BergmanPoint& point, const ProjectiveAutomorphism& gamma, MetricKind kind,
                               const QuadratureSpec& quad, SampleTransport transport = SampleTransport::matched);

}  // namespace bvol
