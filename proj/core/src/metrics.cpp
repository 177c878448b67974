#include "bvol/metrics.hpp"

#include <cmath>
#include <string>

#include "bvol/errors.hpp"

namespace bvol {

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::calabi ? "calabi" : "mabuchi";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "calabi") return MetricKind::calabi;
  if (name == "mabuchi") return MetricKind::mabuchi;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected calabi or mabuchi)");
}

SampleSet SampleSet::fubini_study(int n, const QuadratureSpec& quad) {
  SampleSet set(n, quad);
  const auto draws = sample_fs(n, quad);
  set.points_.reserve(draws.size());
  for (const auto& z : draws) set.points_.push_back(ChartPoint::from_homogeneous(z));
  set.proposal_.assign(set.points_.size(), 1.0);
  return set;
}

SampleSet SampleSet::transported(int n, const QuadratureSpec& quad, const CMatrix& g) {
  if (g.rows() != n + 1 || g.cols() != n + 1) {
    throw InvalidArgument("SampleSet::transported: automorphism has the wrong size");
  }
  // The pushforward of dV_FS by Z -> gZ is the volume form of the degree-one
  // Bergman metric with matrix g^{-1}.
  const BergmanPoint proposal_point =
      canonical_qr(SLMatrix(g.inverse()), BasisShape{n, 1}).r;
  const auto basis = cached_basis(proposal_point.shape());

  SampleSet set(n, quad);
  const auto draws = sample_fs(n, quad);
  set.points_.reserve(draws.size());
  set.proposal_.reserve(draws.size());
  for (const auto& z : draws) {
    CVector moved = g * z.coords();
    moved /= moved.norm();
    auto p = ChartPoint::from_homogeneous(HomogeneousPoint(std::move(moved)));
    set.proposal_.push_back(LocalGeometry(proposal_point, *basis, p).density_ratio());
    set.points_.push_back(std::move(p));
  }
  return set;
}

DirectionSamples evaluate_directions(const BergmanPoint& point, std::span<const CMatrix> directions,
                                     const SampleSet& samples) {
  if (samples.n() != point.n()) throw InvalidArgument("evaluate_directions: sample dimension mismatch");
  const auto basis = cached_basis(point.shape());
  const auto count = static_cast<Eigen::Index>(samples.size());
  const auto dirs = static_cast<Eigen::Index>(directions.size());
  DirectionSamples out{RMatrix(count, dirs), RMatrix(count, dirs), RVector(count)};
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const LocalGeometry local(point, *basis, samples.points()[idx]);
    out.weights[i] = local.density_ratio() / samples.proposal()[idx];
    for (Eigen::Index d = 0; d < dirs; ++d) {
      const auto jet = local.tangent_jet(directions[static_cast<std::size_t>(d)]);
      out.values(i, d) = jet.value;
      out.laplacians(i, d) = jet.laplacian;
    }
  }
  return out;
}

namespace {

// Mean and standard error of per-sample contributions c_i = w_i x_i y_i.
Estimate weighted_product_mean(const auto& x, const auto& y, const RVector& w) {
  const auto count = w.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const double c = w[i] * x[i] * y[i];
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / static_cast<double>(count);
  double se = 0.0;
  if (count > 1) {
    const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(count - 1));
    se = std::sqrt(var / static_cast<double>(count));
  }
  return Estimate{mean, se};
}

double weighted_mean(const auto& x, const RVector& w) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    num += w[i] * x[i];
    den += w[i];
  }
  return num / den;
}

void require_same_length(const RVector& a, const RVector& b, const RVector& w) {
  if (a.size() != w.size() || b.size() != w.size() || w.size() == 0) {
    throw InvalidArgument("pairing: value and weight vectors must be non-empty and equally long");
  }
}

// Columns fed into the Gram estimator: Laplacians for Calabi, centred
// tangent functions for Mabuchi.
RMatrix gram_columns(const DirectionSamples& s, MetricKind kind) {
  if (kind == MetricKind::calabi) return s.laplacians;
  RMatrix centred = s.values;
  for (Eigen::Index d = 0; d < centred.cols(); ++d) {
    const double mean = weighted_mean(s.values.col(d), s.weights);
    centred.col(d).array() -= mean;
  }
  return centred;
}

GramMatrix assemble_gram(const BergmanPoint& point, MetricKind kind, const QuadratureSpec& quad,
                         const RMatrix& columns, const RVector& weights) {
  const auto dim = columns.cols();
  GramMatrix g{RMatrix(dim, dim), RMatrix(dim, dim), kind, point, quad};
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = a; b < dim; ++b) {
      const auto e = weighted_product_mean(columns.col(a), columns.col(b), weights);
      g.entries(a, b) = g.entries(b, a) = e.value;
      g.std_errors(a, b) = g.std_errors(b, a) = e.std_error;
    }
  }
  return g;
}

}  // namespace

Estimate calabi_from_values(const RVector& lap1, const RVector& lap2, const RVector& weights) {
  require_same_length(lap1, lap2, weights);
  return weighted_product_mean(lap1, lap2, weights);
}

Estimate mabuchi_from_values(const RVector& u1, const RVector& u2, const RVector& weights) {
  require_same_length(u1, u2, weights);
  const RVector c1 = u1.array() - weighted_mean(u1, weights);
  const RVector c2 = u2.array() - weighted_mean(u2, weights);
  return weighted_product_mean(c1, c2, weights);
}

Estimate mabuchi_potential_from_values(const RVector& u1, const RVector& u2, const RVector& weights) {
  require_same_length(u1, u2, weights);
  return weighted_product_mean(u1, u2, weights);
}

Estimate calabi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                        const SampleSet& samples) {
  const std::vector<CMatrix> dirs{d1.matrix(), d2.matrix()};
  const auto s = evaluate_directions(point, dirs, samples);
  return calabi_from_values(s.laplacians.col(0), s.laplacians.col(1), s.weights);
}

Estimate calabi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                        const QuadratureSpec& quad) {
  return calabi_pairing(point, d1, d2, SampleSet::fubini_study(point.n(), quad));
}

Estimate mabuchi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                         const SampleSet& samples) {
  const std::vector<CMatrix> dirs{d1.matrix(), d2.matrix()};
  const auto s = evaluate_directions(point, dirs, samples);
  return mabuchi_from_values(s.values.col(0), s.values.col(1), s.weights);
}

Estimate mabuchi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                         const QuadratureSpec& quad) {
  return mabuchi_pairing(point, d1, d2, SampleSet::fubini_study(point.n(), quad));
}

double GramMatrix::min_eigenvalue() const {
  const Eigen::SelfAdjointEigenSolver<RMatrix> solver(entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool GramMatrix::is_symmetric() const {
  return (entries - entries.transpose()).norm() <= 1e-10 * entries.norm();
}

GramMatrix gram(const BergmanPoint& point, MetricKind kind, const SampleSet& samples) {
  const auto dirs = canonical_directions(point);
  const auto s = evaluate_directions(point, dirs, samples);
  return assemble_gram(point, kind, samples.quad(), gram_columns(s, kind), s.weights);
}

GramMatrix gram(const BergmanPoint& point, MetricKind kind, const QuadratureSpec& quad) {
  return gram(point, kind, SampleSet::fubini_study(point.n(), quad));
}

VolumeDensity volume_density(const BergmanPoint& point, MetricKind kind, const SampleSet& samples) {
  const auto dirs = canonical_directions(point);
  const auto s = evaluate_directions(point, dirs, samples);
  const RMatrix columns = gram_columns(s, kind);
  GramMatrix g = assemble_gram(point, kind, samples.quad(), columns, s.weights);

  const Eigen::LLT<RMatrix> llt(g.entries);
  const Eigen::SelfAdjointEigenSolver<RMatrix> spectrum(g.entries, Eigen::EigenvaluesOnly);
  const auto& eig = spectrum.eigenvalues();
  if (llt.info() != Eigen::Success || !(eig.minCoeff() > 1e-12 * eig.cwiseAbs().maxCoeff())) {
    throw EstimationFailure("volume_density: estimated " + std::string(to_string(kind)) +
                            " Gram matrix is not positive definite (increase sample_count)");
  }
  double log_root_det = 0.0;
  const RMatrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_root_det += std::log(l(i, i));
  const double root_det = std::exp(log_root_det);

  // d log sqrt(det G) = tr(G^{-1} dG) / 2; per-sample t_i = w_i x_i^T G^{-1} x_i.
  const RMatrix solved = llt.solve(columns.transpose());
  const auto count = columns.rows();
  RVector t(count);
  for (Eigen::Index i = 0; i < count; ++i) t[i] = s.weights[i] * columns.row(i).dot(solved.col(i));
  double se = 0.0;
  if (count > 1) {
    const double mean = t.mean();
    const double var = (t.array() - mean).square().sum() / static_cast<double>(count - 1);
    se = root_det * 0.5 * std::sqrt(var / static_cast<double>(count));
  }
  return VolumeDensity{std::move(g), Estimate{root_det, se}};
}

VolumeDensity volume_density(const BergmanPoint& point, MetricKind kind, const QuadratureSpec& quad) {
  return volume_density(point, kind, SampleSet::fubini_study(point.n(), quad));
}

Estimate total_volume(const BergmanPoint& point, const SampleSet& samples) {
  const auto s = evaluate_directions(point, {}, samples);
  const RVector ones = RVector::Ones(s.weights.size());
  return weighted_product_mean(ones, ones, s.weights);
}

Estimate total_volume(const BergmanPoint& point, const QuadratureSpec& quad) {
  return total_volume(point, SampleSet::fubini_study(point.n(), quad));
}

double congruence_defect(const RMatrix& g1, const RMatrix& g2, const RMatrix& jacobian) {
  return (g1 - jacobian.transpose() * g2 * jacobian).norm() / g1.norm();
}

}  // namespace bvol
