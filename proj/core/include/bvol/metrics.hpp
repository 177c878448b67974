#pragma once

// Restricted Calabi and Mabuchi metrics on the Bergman space by importance
// sampling against the Fubini-Study probability measure.
//
// Every integral over CP^n is estimated as (1/N) sum_i F(q_i) w_i with
// w_i = (dV_R / dV_FS)(q_i) / proposal(q_i), where proposal(q) is the density
// of the sampling distribution relative to dV_FS (1 for plain FS samples).
// Volumes are probability-normalized: the total volume of every Bergman
// metric is 1.

#include <span>
#include <string_view>
#include <vector>

#include "bvol/bergman.hpp"
#include "bvol/projspace.hpp"
#include "bvol/types.hpp"

namespace bvol {

enum class MetricKind { calabi, mabuchi };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

/// Evaluation points with their proposal densities. Sample sets built from
/// the same QuadratureSpec share the same underlying FS draws, which gives
/// common random numbers across every estimate that uses them.
class SampleSet {
 public:
  /// Points drawn from dV_FS.
  static SampleSet fubini_study(int n, const QuadratureSpec& quad);
  /// The same FS draws pushed forward by Z -> g Z. Used to estimate
  /// integrals for the pullback of a metric by the automorphism g with the
  /// sample points matched to the source integral.
  static SampleSet transported(int n, const QuadratureSpec& quad, const CMatrix& g);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<ChartPoint>& points() const noexcept { return points_; }
  /// Density of the sampling distribution relative to dV_FS at each point.
  const std::vector<double>& proposal() const noexcept { return proposal_; }
  const QuadratureSpec& quad() const noexcept { return quad_; }

 private:
  SampleSet(int n, QuadratureSpec quad) : n_(n), quad_(quad) {}

  int n_;
  QuadratureSpec quad_;
  std::vector<ChartPoint> points_;
  std::vector<double> proposal_;
};

/// Tangent functions and their Laplacians for a list of directions, one row
/// per sample; weights are the importance weights for the base point.
struct DirectionSamples {
  RMatrix values;      // samples x directions
  RMatrix laplacians;  // samples x directions
  RVector weights;
};

DirectionSamples evaluate_directions(const BergmanPoint& point, std::span<const CMatrix> directions,
                                     const SampleSet& samples);

/// (1/N) sum w lap1 lap2.
Estimate calabi_from_values(const RVector& lap1, const RVector& lap2, const RVector& weights);
/// (1/N) sum w (u1 - mean u1)(u2 - mean u2); means are self-normalized
/// dV-means from the same samples, so constants are annihilated exactly.
Estimate mabuchi_from_values(const RVector& u1, const RVector& u2, const RVector& weights);
/// Uncentred L^2 pairing on potentials, (1/N) sum w u1 u2.
Estimate mabuchi_potential_from_values(const RVector& u1, const RVector& u2, const RVector& weights);

Estimate calabi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                        const SampleSet& samples);
Estimate calabi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                        const QuadratureSpec& quad);
Estimate mabuchi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                         const SampleSet& samples);
Estimate mabuchi_pairing(const BergmanPoint& point, const TangentParam& d1, const TangentParam& d2,
                         const QuadratureSpec& quad);

/// Gram matrix of a restricted metric in the canonical parameter basis.
struct GramMatrix {
  RMatrix entries;
  RMatrix std_errors;
  MetricKind kind;
  BergmanPoint base;
  QuadratureSpec quad;

  Eigen::Index dim() const noexcept { return entries.rows(); }
  double min_eigenvalue() const;
  bool is_symmetric() const;
};

GramMatrix gram(const BergmanPoint& point, MetricKind kind, const SampleSet& samples);
GramMatrix gram(const BergmanPoint& point, MetricKind kind, const QuadratureSpec& quad);

/// Gram matrix together with sqrt(det G) and a delta-method standard error
/// for it.
struct VolumeDensity {
  GramMatrix gram;
  Estimate density;
};

/// sqrt(det G). Throws EstimationFailure when the estimated Gram is not
/// numerically positive definite (min / max eigenvalue at most 1e-12).
VolumeDensity volume_density(const BergmanPoint& point, MetricKind kind, const SampleSet& samples);
VolumeDensity volume_density(const BergmanPoint& point, MetricKind kind, const QuadratureSpec& quad);

/// Integral of dV_R; equal to 1 for every R.
Estimate total_volume(const BergmanPoint& point, const SampleSet& samples);
Estimate total_volume(const BergmanPoint& point, const QuadratureSpec& quad);

/// ||G1 - J^T G2 J||_F / ||G1||_F.
double congruence_defect(const RMatrix& g1, const RMatrix& g2, const RMatrix& jacobian);

}  // namespace bvol
