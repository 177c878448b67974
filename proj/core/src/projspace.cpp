#include "bvol/projspace.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "bvol/errors.hpp"

namespace bvol {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw InvalidArgument("MultiIndex: empty exponent tuple");
  for (int e : exponents_) {
    if (e < 0) throw InvalidArgument("MultiIndex: negative exponent");
  }
  degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

MultiIndex::MultiIndex(std::vector<int> exponents, int degree)
    : MultiIndex(std::move(exponents)) {
  if (degree_ != degree) {
    throw InvalidArgument("MultiIndex: exponents sum to " + std::to_string(degree_) +
                          ", expected degree " + std::to_string(degree));
  }
}

bool lex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw InvalidArgument("lex_less: multi-index lengths differ");
  for (std::size_t j = a.size(); j-- > 0;) {
    if (a[j] != b[j]) return a[j] < b[j];
  }
  return false;
}

std::int64_t section_space_dim(int n, int k, std::int64_t cap) {
  if (n < 1) throw InvalidArgument("section_space_dim: n must be >= 1");
  if (k < 1) throw InvalidArgument("section_space_dim: k must be >= 1");
  // C(n+k, n) built as prod_{i=1..n} (k+i)/i; every partial product is an
  // integer binomial and the sequence is increasing, so stop at the cap.
  std::int64_t result = 1;
  for (int i = 1; i <= n; ++i) {
    result = result * (k + i) / i;
    if (result > cap) {
      throw InvalidArgument("section_space_dim: C(" + std::to_string(n + k) + ", " +
                            std::to_string(n) + ") exceeds dimension cap " +
                            std::to_string(cap));
    }
  }
  return result;
}

std::size_t BasisShape::dimension() const {
  return static_cast<std::size_t>(section_space_dim(n, k));
}

BasisShape BasisShape::for_dimension(std::size_t dim) {
  if (dim < 2) throw InvalidArgument("BasisShape: need at least two sections");
  return BasisShape{1, static_cast<int>(dim) - 1};
}

std::optional<std::size_t> MonomialBasis::index_of(std::span<const int> exponents) const {
  auto it = lookup_.find(std::vector<int>(exponents.begin(), exponents.end()));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

namespace {

void enumerate_compositions(int remaining, std::size_t slot, std::vector<int>& current,
                            std::vector<MultiIndex>& out) {
  if (slot + 1 == current.size()) {
    current[slot] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[slot] = e;
    enumerate_compositions(remaining - e, slot + 1, current, out);
  }
}

}  // namespace

MonomialBasis build_basis(int n, int k) {
  const auto expected = section_space_dim(n, k);
  MonomialBasis basis;
  basis.shape_ = BasisShape{n, k};
  std::vector<int> current(static_cast<std::size_t>(n) + 1, 0);
  basis.indices_.reserve(static_cast<std::size_t>(expected));
  enumerate_compositions(k, 0, current, basis.indices_);
  std::sort(basis.indices_.begin(), basis.indices_.end(), lex_less);
  for (std::size_t i = 0; i < basis.indices_.size(); ++i) {
    const auto e = basis.indices_[i].exponents();
    basis.lookup_.emplace(std::vector<int>(e.begin(), e.end()), i);
  }
  return basis;
}

std::shared_ptr<const MonomialBasis> cached_basis(BasisShape shape) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{shape.n, shape.k}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(build_basis(shape.n, shape.k));
  return slot;
}

HomogeneousPoint::HomogeneousPoint(CVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InvalidArgument("HomogeneousPoint: need n+1 >= 2 coordinates");
  const double norm = coords_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("HomogeneousPoint: coordinates must be finite and not all zero");
  }
}

ChartPoint::ChartPoint(int chart, CVector affine) : chart_(chart), affine_(std::move(affine)) {
  if (affine_.size() < 1) throw InvalidArgument("ChartPoint: need n >= 1 affine coordinates");
  if (chart_ < 0 || chart_ > affine_.size()) throw InvalidArgument("ChartPoint: chart out of range");
}

ChartPoint ChartPoint::from_homogeneous(const HomogeneousPoint& z) {
  const CVector& c = z.coords();
  int best = 0;
  for (int i = 1; i < c.size(); ++i) {
    if (std::abs(c[i]) > std::abs(c[best])) best = i;
  }
  return in_chart(z, best);
}

ChartPoint ChartPoint::in_chart(const HomogeneousPoint& z, int chart) {
  const CVector& c = z.coords();
  if (chart < 0 || chart >= c.size()) throw InvalidArgument("ChartPoint: chart out of range");
  if (c[chart] == Complex(0.0)) throw InvalidArgument("ChartPoint: point lies off the chart");
  CVector affine(c.size() - 1);
  for (int j = 0, a = 0; j < c.size(); ++j) {
    if (j == chart) continue;
    affine[a++] = c[j] / c[chart];
  }
  return ChartPoint(chart, std::move(affine));
}

HomogeneousPoint ChartPoint::homogeneous() const {
  CVector c(affine_.size() + 1);
  for (int j = 0, a = 0; j < c.size(); ++j) {
    c[j] = (j == chart_) ? Complex(1.0) : affine_[a++];
  }
  return HomogeneousPoint(std::move(c));
}

MonomialJet eval_monomials(const MonomialBasis& basis, const ChartPoint& p,
                           DerivativeOrder order) {
  const int n = basis.n();
  if (p.n() != n) throw InvalidArgument("eval_monomials: chart point dimension mismatch");
  const int k = basis.k();
  const auto dim = static_cast<Eigen::Index>(basis.size());

  // powers(a, e) = w_a^e for e in [0, k].
  CMatrix powers(n, k + 1);
  for (int a = 0; a < n; ++a) {
    powers(a, 0) = 1.0;
    for (int e = 1; e <= k; ++e) powers(a, e) = powers(a, e - 1) * p.affine()[a];
  }
  auto pw = [&](int a, int e) { return e < 0 ? Complex(0.0) : powers(a, e); };

  MonomialJet jet;
  jet.values.resize(dim);
  if (order != DerivativeOrder::values) jet.jacobian.resize(dim, n);
  if (order == DerivativeOrder::second) jet.hessians.assign(static_cast<std::size_t>(dim), CMatrix(n, n));

  std::vector<int> e(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto exps = basis[static_cast<std::size_t>(i)].exponents();
    for (int j = 0, a = 0; j <= n; ++j) {
      if (j != p.chart()) e[a++] = exps[j];
    }
    // Product over affine variables with per-variable derivative order d[a].
    auto term = [&](int a1, int a2) {
      Complex value = 1.0;
      for (int a = 0; a < n; ++a) {
        const int d = (a == a1) + (a == a2);
        double coeff = 1.0;
        for (int s = 0; s < d; ++s) coeff *= e[a] - s;
        if (coeff == 0.0) return Complex(0.0);
        value *= coeff * pw(a, e[a] - d);
      }
      return value;
    };
    jet.values[i] = term(-1, -1);
    if (order == DerivativeOrder::values) continue;
    for (int a = 0; a < n; ++a) jet.jacobian(i, a) = term(a, -1);
    if (order != DerivativeOrder::second) continue;
    auto& h = jet.hessians[static_cast<std::size_t>(i)];
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        h(a, b) = term(a, b);
        h(b, a) = h(a, b);
      }
    }
  }
  return jet;
}

std::string_view to_string(QuadratureMethod method) {
  switch (method) {
    case QuadratureMethod::monte_carlo: return "monte_carlo";
    case QuadratureMethod::low_discrepancy: return "low_discrepancy";
    case QuadratureMethod::polar_grid: return "polar_grid";
  }
  return "unknown";
}

QuadratureMethod parse_quadrature_method(std::string_view name) {
  if (name == "monte_carlo") return QuadratureMethod::monte_carlo;
  if (name == "low_discrepancy") return QuadratureMethod::low_discrepancy;
  if (name == "polar_grid") return QuadratureMethod::polar_grid;
  throw InvalidArgument("unknown quadrature method '" + std::string(name) + "'");
}

void QuadratureSpec::validate(int n) const {
  if (sample_count < 1) throw InvalidArgument("QuadratureSpec: sample_count must be >= 1");
  if (n < 1) throw InvalidArgument("QuadratureSpec: n must be >= 1");
  if (method == QuadratureMethod::polar_grid && n != 1) {
    throw InvalidArgument("QuadratureSpec: polar_grid is only available on CP^1");
  }
}

}  // namespace bvol
