#pragma once

// Projective-space substrate: multi-indices, the ordered monomial basis of
// degree-k sections of O(k) on CP^n, chart evaluation of monomials with
// holomorphic derivatives, and seeded Fubini-Study sampling.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bvol/types.hpp"

namespace bvol {

/// Largest admissible number of sections N_k + 1.
inline constexpr std::int64_t kDefaultDimensionCap = 200;

/// Exponent tuple (k_0, ..., k_n) of a degree-k monomial Z_0^{k_0}...Z_n^{k_n}.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> exponents);
  MultiIndex(std::vector<int> exponents, int degree);

  std::span<const int> exponents() const noexcept { return exponents_; }
  int operator[](std::size_t i) const { return exponents_[i]; }
  std::size_t size() const noexcept { return exponents_.size(); }
  int degree() const noexcept { return degree_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

/// Recursive order that compares the last coordinate first and falls back to
/// the prefix on ties. Strict and total on multi-indices of equal length.
bool lex_less(const MultiIndex& a, const MultiIndex& b);

/// (n+k)! / (n! k!), the number of degree-k monomials in n+1 variables.
/// Throws InvalidArgument for n < 1, k < 1 or a result above `cap`.
std::int64_t section_space_dim(int n, int k, std::int64_t cap = kDefaultDimensionCap);

struct BasisShape {
  int n = 1;
  int k = 1;

  /// N_k + 1.
  std::size_t dimension() const;

  /// The CP^1 shape (n = 1, k = dim - 1) with `dim` sections; any square
  /// matrix of size >= 2 fits it.
  static BasisShape for_dimension(std::size_t dim);

  friend bool operator==(const BasisShape&, const BasisShape&) = default;
};

/// Degree-k monomials on CP^n sorted ascending under lex_less, so that the
/// last entry is Z_n^k and the one before it Z_{n-1} Z_n^{k-1}.
class MonomialBasis {
 public:
  int n() const noexcept { return shape_.n; }
  int k() const noexcept { return shape_.k; }
  BasisShape shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

  std::optional<std::size_t> index_of(std::span<const int> exponents) const;

 private:
  friend MonomialBasis build_basis(int n, int k);
  MonomialBasis() = default;

  BasisShape shape_;
  std::vector<MultiIndex> indices_;
  std::map<std::vector<int>, std::size_t> lookup_;
};

MonomialBasis build_basis(int n, int k);

/// Shared immutable basis for a shape; built once per shape per process.
std::shared_ptr<const MonomialBasis> cached_basis(BasisShape shape);

class HomogeneousPoint {
 public:
  explicit HomogeneousPoint(CVector coords);

  const CVector& coords() const noexcept { return coords_; }
  int n() const noexcept { return static_cast<int>(coords_.size()) - 1; }

 private:
  CVector coords_;
};

/// Affine coordinates Z_j / Z_c (j != c) in the chart {Z_c != 0}.
class ChartPoint {
 public:
  ChartPoint(int chart, CVector affine);

  /// Chart c = argmax |Z_i|, smallest index on ties; all affine coordinates
  /// then lie in the closed unit polydisc.
  static ChartPoint from_homogeneous(const HomogeneousPoint& z);
  /// Same projective point in an explicitly chosen chart (Z_chart != 0).
  static ChartPoint in_chart(const HomogeneousPoint& z, int chart);

  int chart() const noexcept { return chart_; }
  int n() const noexcept { return static_cast<int>(affine_.size()); }
  const CVector& affine() const noexcept { return affine_; }
  /// Homogeneous representative with a 1 in slot `chart`.
  HomogeneousPoint homogeneous() const;

 private:
  int chart_;
  CVector affine_;
};

enum class DerivativeOrder { values, first, second };

/// Monomial values v_i, holomorphic Jacobian dv_i/dw_a and Hessians
/// d^2 v_i / dw_a dw_b at one chart point.
struct MonomialJet {
  CVector values;                 // N_k + 1
  CMatrix jacobian;               // (N_k + 1) x n, empty for DerivativeOrder::values
  std::vector<CMatrix> hessians;  // N_k + 1 matrices n x n, only for second order
};

MonomialJet eval_monomials(const MonomialBasis& basis, const ChartPoint& p,
                           DerivativeOrder order = DerivativeOrder::first);

enum class QuadratureMethod { monte_carlo, low_discrepancy, polar_grid };

std::string_view to_string(QuadratureMethod method);
QuadratureMethod parse_quadrature_method(std::string_view name);

struct QuadratureSpec {
  std::size_t sample_count = 20000;
  std::uint64_t seed = 0;
  QuadratureMethod method = QuadratureMethod::monte_carlo;

  /// Throws InvalidArgument when unusable on CP^n.
  void validate(int n) const;
};

/// Deterministic sample of CP^n distributed by the Fubini-Study probability
/// measure. monte_carlo normalizes standard complex Gaussian vectors,
/// low_discrepancy pushes a shifted Sobol sequence through the same
/// transform, polar_grid (n = 1 only) is an equal-mass tensor grid.
std::vector<HomogeneousPoint> sample_fs(int n, const QuadratureSpec& quad);

}  // namespace bvol
