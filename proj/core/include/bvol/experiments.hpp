#pragma once

// Orbit sweeps along gamma_m = I + m E_{n-1,n} and the partial-sum report.
//
// A "ball" around an orbit point is the cube of half-width epsilon in the
// canonical coordinates, with volume approximated by the midpoint rule:
// density(R A_m) * (2 epsilon)^D.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bvol/autgroup.hpp"
#include "bvol/bergman.hpp"
#include "bvol/metrics.hpp"
#include "bvol/projspace.hpp"

namespace bvol {

enum class BasePointKind { identity, entries, random_walk };

struct BasePointSpec {
  BasePointKind kind = BasePointKind::identity;
  CMatrix entries;        // kind == entries; canonicalized by QR
  std::uint64_t seed = 0;  // kind == random_walk
  RandomWalk walk;

  BergmanPoint resolve(BasisShape shape) const;
};

struct ExperimentConfig {
  int n = 1;
  int k = 1;
  BasePointSpec base_point;
  std::int64_t m_min = -10;
  std::int64_t m_max = 10;
  /// Coordinate half-width; 0.1 r_{N-1,N-1} of the base point when unset.
  std::optional<double> epsilon;
  QuadratureSpec quad;
  MetricKind metric = MetricKind::calabi;
  /// Estimate each orbit point on FS draws pushed through gamma_m.
  bool transport = true;
  std::string csv_path;
  std::string report_path;

  BasisShape shape() const { return BasisShape{n, k}; }
  double resolved_epsilon(const BergmanPoint& base) const;
  /// Throws InvalidArgument; includes epsilon < r_{N-1,N-1} / 2.
  void validate() const;
};

/// JSON text with the schema documented in the README.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Row-major JSON matrix; entries are numbers or [re, im] pairs.
CMatrix parse_matrix(std::string_view json_text);
CMatrix load_matrix(const std::filesystem::path& path);

/// Normalized JSON form of a config, with epsilon resolved.
std::string config_to_json(const ExperimentConfig& cfg);

struct OrbitRecord {
  std::int64_t m = 0;
  Complex entry;         // (N-1, N) entry of R A_m
  RVector coordinates;   // canonical coordinates of R A_m
  double half_width = 0.0;
  std::optional<Estimate> density;
  std::optional<Estimate> ball_volume;
  std::string error;     // set when the estimate failed

  bool ok() const noexcept { return ball_volume.has_value(); }
};

/// One record per m in [m_min, m_max], ascending. Estimation failures are
/// recorded in the record and do not stop the sweep.
std::vector<OrbitRecord> orbit_sweep(const ExperimentConfig& cfg);

/// Columns m, entry, density, density_stderr, ball_volume, ball_volume_stderr;
/// entry is the real part, failed estimates are written as nan.
std::string orbit_csv(const std::vector<OrbitRecord>& records);

struct PartialSum {
  std::int64_t half_range;  // M
  std::int64_t count;       // successful records with |m| <= M
  double value;             // S_M
  double band;              // 3 * sum of standard errors
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_rel_residual = 0.0;
};

struct DivergenceReport {
  std::vector<PartialSum> partial_sums;
  /// S_M against count.
  LinearFit fit;
  bool disjoint = false;
  double min_separation = 0.0;
};

/// Whether all cubes are pairwise disjoint: L-infinity distance of the
/// canonical coordinates above twice the half-width.
bool cubes_disjoint(const std::vector<OrbitRecord>& records, double* min_separation = nullptr);

/// Throws InvalidArgument on an empty record list.
DivergenceReport divergence_report(const std::vector<OrbitRecord>& records);

std::string divergence_report_json(const DivergenceReport& report, const ExperimentConfig& cfg);

/// Least-squares line through (x_i, y_i) and its largest |residual| / |y|.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bvol
