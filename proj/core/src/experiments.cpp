#include "bvol/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bvol/errors.hpp"
#include "json.hpp"

namespace bvol {

std::vector<OrbitRecord> orbit_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const BergmanPoint base = cfg.base_point.resolve(cfg.shape());
  const double eps = cfg.resolved_epsilon(base);
  const auto dim = canonical_dimension(base);
  const double cube = std::pow(2.0 * eps, static_cast<double>(dim));

  std::vector<OrbitRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.m_max - cfg.m_min + 1));
  for (std::int64_t m = cfg.m_min; m <= cfg.m_max; ++m) {
    OrbitRecord rec;
    rec.m = m;
    rec.half_width = eps;
    const auto gamma = unipotent_gamma(m, cfg.n);
    const BergmanPoint image = pullback_point(base, gamma);
    rec.entry = orbit_separation_entry(base, m);
    rec.coordinates = coordinates(image);
    try {
      const auto samples = cfg.transport ? SampleSet::transported(cfg.n, cfg.quad, gamma.matrix())
                                         : SampleSet::fubini_study(cfg.n, cfg.quad);
      const auto vd = volume_density(image, cfg.metric, samples);
      rec.density = vd.density;
      rec.ball_volume = Estimate{vd.density.value * cube, vd.density.std_error * cube};
    } catch (const EstimationFailure& e) {
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string orbit_csv(const std::vector<OrbitRecord>& records) {
  std::string out = "m,entry,density,density_stderr,ball_volume,ball_volume_stderr\n";
  char line[256];
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : records) {
    const Estimate d = r.density.value_or(Estimate{nan, nan});
    const Estimate b = r.ball_volume.value_or(Estimate{nan, nan});
    std::snprintf(line, sizeof line, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n", static_cast<long long>(r.m),
                  r.entry.real(), d.value, d.std_error, b.value, b.std_error);
    out += line;
  }
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("fit_line: need equally many x and y values");
  LinearFit fit;
  const auto count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx > 0.0) {
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
  } else {
    // One distinct abscissa: line through the origin.
    fit.slope = mx != 0.0 ? my / mx : 0.0;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double residual = std::abs(y[i] - (fit.slope * x[i] + fit.intercept));
    const double scale = std::abs(y[i]);
    fit.max_rel_residual = std::max(fit.max_rel_residual, scale > 0.0 ? residual / scale : residual);
  }
  return fit;
}

bool cubes_disjoint(const std::vector<OrbitRecord>& records, double* min_separation) {
  bool disjoint = true;
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < records.size(); ++a) {
    for (std::size_t b = a + 1; b < records.size(); ++b) {
      const double dist = (records[a].coordinates - records[b].coordinates).lpNorm<Eigen::Infinity>();
      closest = std::min(closest, dist);
      if (!(dist > records[a].half_width + records[b].half_width)) disjoint = false;
    }
  }
  if (min_separation) *min_separation = closest;
  return disjoint;
}

DivergenceReport divergence_report(const std::vector<OrbitRecord>& records) {
  if (records.empty()) throw InvalidArgument("divergence_report: no records");
  DivergenceReport report;
  report.disjoint = cubes_disjoint(records, &report.min_separation);

  std::int64_t reach = 0;
  for (const auto& r : records) reach = std::max(reach, r.m < 0 ? -r.m : r.m);
  std::vector<double> x;
  std::vector<double> y;
  for (std::int64_t half = 0; half <= reach; ++half) {
    PartialSum s{half, 0, 0.0, 0.0};
    for (const auto& r : records) {
      if ((r.m < 0 ? -r.m : r.m) > half || !r.ok()) continue;
      ++s.count;
      s.value += r.ball_volume->value;
      s.band += 3.0 * r.ball_volume->std_error;
    }
    if (s.count == 0) continue;
    x.push_back(static_cast<double>(s.count));
    y.push_back(s.value);
    report.partial_sums.push_back(s);
  }
  if (!x.empty()) report.fit = fit_line(x, y);
  return report;
}

std::string divergence_report_json(const DivergenceReport& report, const ExperimentConfig& cfg) {
  using nlohmann::json;
  json sums = json::array();
  for (const auto& s : report.partial_sums) {
    sums.push_back({{"M", s.half_range}, {"count", s.count}, {"value", s.value}, {"band", s.band}});
  }
  json j{{"partial_sums", std::move(sums)},
         {"fit",
          {{"slope", report.fit.slope},
           {"intercept", report.fit.intercept},
           {"max_rel_residual", report.fit.max_rel_residual}}},
         {"disjoint", report.disjoint},
         {"min_separation", report.min_separation},
         {"ball",
          "cube of half-width epsilon in the canonical coordinates (log diagonal, Re/Im of the upper "
          "entries); volume is the density at the centre times (2 epsilon)^D. Metric balls have no "
          "closed form, and these cubes are coordinate cubes, not metric balls."},
         {"config_echo", json::parse(config_to_json(cfg))}};
  return j.dump(2) + "\n";
}

}  // namespace bvol
