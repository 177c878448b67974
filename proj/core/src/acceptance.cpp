#include "bvol/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "bvol/autgroup.hpp"
#include "bvol/errors.hpp"
#include "bvol/experiments.hpp"
#include "bvol/metrics.hpp"
#include "bvol/oracles.hpp"
#include "json.hpp"

namespace bvol {
namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::mt19937_64 criterion_rng(std::uint64_t seed, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

struct Context {
  Profile profile;
  std::uint64_t seed;
  LaplacianFn laplacian;

  QuadratureSpec quad(QuadratureMethod method = QuadratureMethod::monte_carlo) const {
    QuadratureSpec q;
    q.sample_count = profile_samples(profile);
    q.seed = seed;
    q.method = method;
    return q;
  }
};

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome dimension_formula(const Context&) {
  int mismatches = 0;
  int order_mismatches = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 5; ++k) {
      if (section_space_dim(n, k) != oracle::brute_force_dimension(n, k)) ++mismatches;
      const auto expected = oracle::lex_sorted_monomials(n, k);
      const auto basis = build_basis(n, k);
      for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto e = basis[i].exponents();
        if (!std::equal(e.begin(), e.end(), expected[i].begin(), expected[i].end())) {
          ++order_mismatches;
          break;
        }
      }
    }
  }
  return {mismatches == 0 && order_mismatches == 0,
          "15 (n, k) pairs; dimension mismatches " + std::to_string(mismatches) + ", ordering mismatches " +
              std::to_string(order_mismatches)};
}

Outcome qr_round_trip(const Context& ctx) {
  auto rng = criterion_rng(ctx.seed, 2);
  std::uniform_int_distribution<int> dim_dist(2, 6);
  double worst_residual = 0.0;
  double worst_unitarity = 0.0;
  double worst_det = 0.0;
  bool triangular = true;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index dim = dim_dist(rng);
    const SLMatrix a(oracle::random_complex_matrix(dim, rng));
    const auto [q, r] = canonical_qr(a);
    worst_residual = std::max(worst_residual, (a.matrix() - q * r.matrix()).norm());
    worst_unitarity =
        std::max(worst_unitarity, (q.adjoint() * q - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
    double prod = 1.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Complex d = r.matrix()(i, i);
      triangular = triangular && d.imag() == 0.0 && d.real() > 0.0;
      prod *= d.real();
      for (Eigen::Index j = 0; j < i; ++j) triangular = triangular && r.matrix()(i, j) == Complex(0.0);
    }
    worst_det = std::max(worst_det, std::abs(prod - 1.0));
  }

  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  double worst_unique = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index dim = dim_dist(rng);
    const auto shape = BasisShape::for_dimension(static_cast<std::size_t>(dim));
    const CMatrix q0 = oracle::random_special_unitary(dim, rng);
    RVector x(canonical_dimension(dim - 1));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = coord(rng);
    const BergmanPoint r0 = from_coordinates(x, shape);
    const auto [q, r] = canonical_qr(SLMatrix(q0 * r0.matrix()), shape);
    worst_unique = std::max({worst_unique, (q - q0).norm(), (r.matrix() - r0.matrix()).norm()});
  }
  const bool ok = worst_residual < 1e-10 && worst_unitarity < 1e-12 && worst_det < 1e-12 && triangular &&
                  worst_unique < 1e-10;
  return {ok, "max |A-QR| " + sci(worst_residual) + ", max |Q*Q-I| " + sci(worst_unitarity) + ", max |det R-1| " +
                  sci(worst_det) + ", triangular " + (triangular ? "yes" : "no") + ", uniqueness error " +
                  sci(worst_unique)};
}

Outcome gauge_constancy(const Context& ctx) {
  auto rng = criterion_rng(ctx.seed, 3);
  std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
  std::uniform_int_distribution<int> small(1, 2);
  double worst_sigma = 0.0;
  double worst_offset = 0.0;
  double worst_recovery = 0.0;
  for (int t = 0; t < 20; ++t) {
    const BasisShape shape{small(rng), small(rng)};
    const BergmanPoint r = random_walk_point(shape, rng);
    const double rho = std::exp(log_rho(rng));
    const CMatrix a = rho * oracle::random_special_unitary(r.dim(), rng) * r.matrix();
    const HermitianForm form = HermitianForm::of_matrix(a);

    QuadratureSpec q;
    q.sample_count = 100;
    q.seed = ctx.seed + static_cast<std::uint64_t>(t);
    std::vector<double> shifts;
    for (const auto& z : sample_fs(shape.n, q)) {
      const auto p = ChartPoint::from_homogeneous(z);
      shifts.push_back(potential(form, shape, p) - potential(r, p));
    }
    double mean = 0.0;
    for (double s : shifts) mean += s;
    mean /= static_cast<double>(shifts.size());
    double var = 0.0;
    for (double s : shifts) var += (s - mean) * (s - mean);
    worst_sigma = std::max(worst_sigma, std::sqrt(var / static_cast<double>(shifts.size() - 1)));
    worst_offset = std::max(worst_offset, std::abs(mean - std::log(rho) / (shape.k * kPi)));
    worst_recovery = std::max(worst_recovery, (canonical_qr(SLMatrix(a), shape).r.matrix() - r.matrix()).norm());
  }
  return {worst_sigma < 1e-10 && worst_offset < 1e-10 && worst_recovery < 1e-10,
          "max shift sigma " + sci(worst_sigma) + ", max |mean - log(rho)/(k pi)| " + sci(worst_offset) +
              ", max |R' - R| " + sci(worst_recovery)};
}

Outcome analytic_vs_fd(const Context& ctx) {
  auto rng = criterion_rng(ctx.seed, 4);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr double kFloor = 1e-3;
  double worst[3] = {0.0, 0.0, 0.0};
  QuadratureSpec q;
  q.sample_count = 100;
  q.seed = ctx.seed;
  const auto points1 = sample_fs(1, q);
  const auto points2 = sample_fs(2, q);
  for (int t = 0; t < 100; ++t) {
    const BasisShape shape{1 + t % 2, 1 + (t / 2) % 2};
    const BergmanPoint r = random_walk_point(shape, rng);
    const auto p = ChartPoint::from_homogeneous((shape.n == 1 ? points1 : points2)[static_cast<std::size_t>(t)]);
    CMatrix dr = CMatrix::Zero(r.dim(), r.dim());
    for (const auto& e : canonical_directions(r)) dr += normal(rng) * e;
    const TangentParam d(r, dr);

    const CMatrix g_fd = oracle::metric_fd(r.matrix(), shape.n, shape.k, p);
    worst[0] = std::max(worst[0], (metric_tensor(r, p) - g_fd).norm() / g_fd.norm());
    const double u_fd = oracle::tangent_fd(r.matrix(), dr, shape.n, shape.k, p);
    worst[1] = std::max(worst[1], std::abs(tangent_function(r, d, p) - u_fd) / std::max(std::abs(u_fd), kFloor));
    const double lap_fd = oracle::laplacian_fd(r.matrix(), dr, shape.n, shape.k, p);
    worst[2] = std::max(worst[2], std::abs(ctx.laplacian(r, d, p) - lap_fd) / std::max(std::abs(lap_fd), kFloor));
  }
  return {worst[0] < 1e-5 && worst[1] < 1e-5 && worst[2] < 1e-5,
          "max relative error: metric " + sci(worst[0]) + ", tangent " + sci(worst[1]) + ", laplacian " +
              sci(worst[2])};
}

Outcome volume_conservation(const Context& ctx) {
  // Randomized Sobol points; their iid standard error bounds the actual error.
  auto rng = criterion_rng(ctx.seed, 5);
  const auto quad = ctx.quad(QuadratureMethod::low_discrepancy);
  const auto samples = SampleSet::fubini_study(1, quad);
  int failures = 0;
  int checks = 0;
  double worst_z = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const BasisShape shape{1, k};
    std::vector<BergmanPoint> points{BergmanPoint::identity(shape)};
    for (int i = 0; i < 20; ++i) points.push_back(random_walk_point(shape, rng));
    for (const auto& r : points) {
      const auto v = total_volume(r, samples);
      const double dev = std::abs(v.value - 1.0);
      // Rounding allowance for R = I, where every weight is 1 and the error is 0.
      if (!(dev <= 3.0 * v.std_error + 1e-12)) ++failures;
      if (v.std_error > 0.0) worst_z = std::max(worst_z, dev / v.std_error);
      ++checks;
    }
  }
  return {failures == 0, std::to_string(checks) + " volumes (" + std::string(to_string(quad.method)) + ", " +
                             std::to_string(quad.sample_count) + " samples); outside 3 se: " +
                             std::to_string(failures) + ", max |V-1|/se " + sci(worst_z)};
}

Outcome gram_health(const Context& ctx) {
  auto rng = criterion_rng(ctx.seed, 6);
  const auto quad = ctx.quad();
  bool symmetric = true;
  bool dims = true;
  double min_eig = INFINITY;
  int tested = 0;
  for (const BasisShape shape : {BasisShape{1, 1}, BasisShape{1, 2}, BasisShape{2, 1}}) {
    const auto samples = SampleSet::fubini_study(shape.n, quad);
    std::vector<BergmanPoint> points{BergmanPoint::identity(shape)};
    for (int i = 0; i < 2; ++i) points.push_back(random_walk_point(shape, rng));
    for (const auto& r : points) {
      for (const auto kind : {MetricKind::calabi, MetricKind::mabuchi}) {
        const auto g = gram(r, kind, samples);
        const auto top = r.top();
        dims = dims && g.dim() == top * top + 2 * top;
        symmetric = symmetric && (g.entries.array() == g.entries.transpose().array()).all();
        min_eig = std::min(min_eig, g.min_eigenvalue());
        ++tested;
      }
    }
  }
  return {symmetric && dims && min_eig > 0.0,
          std::to_string(tested) + " Gram matrices; exactly symmetric " + (symmetric ? "yes" : "no") +
              ", D = N^2 + 2N " + (dims ? "yes" : "no") + ", min eigenvalue " + sci(min_eig)};
}

Outcome fs_spectral(const Context& ctx) {
  const BasisShape shape{1, 1};
  const BergmanPoint r = BergmanPoint::identity(shape);
  const auto samples = SampleSet::fubini_study(1, ctx.quad());
  const auto calabi = gram(r, MetricKind::calabi, samples);
  const auto mabuchi = gram(r, MetricKind::mabuchi, samples);
  const double c = (calabi.entries.array() * mabuchi.entries.array()).sum() / mabuchi.entries.squaredNorm();
  const double residual = (calabi.entries - c * mabuchi.entries).norm() / calabi.entries.norm();

  // Pointwise ratio from the finite-difference oracle on a subset of samples.
  double ratio_sum = 0.0;
  int ratio_count = 0;
  const auto dirs = canonical_directions(r);
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / 1000);
  for (std::size_t i = 0; i < samples.size(); i += stride) {
    const auto& p = samples.points()[i];
    for (const auto& dr : dirs) {
      const double u = oracle::tangent(r.matrix(), dr, 1, 1, p);
      if (std::abs(u) < 1e-3) continue;
      ratio_sum += oracle::laplacian_fd(r.matrix(), dr, 1, 1, p) / u;
      ++ratio_count;
    }
  }
  const double ratio = ratio_sum / ratio_count;
  const double c_pointwise = ratio * ratio;
  const double mismatch = std::abs(c - c_pointwise) / c_pointwise;
  return {residual < 0.01 && mismatch < 0.01, "c = " + sci(c) + ", off-scalar residual " + sci(residual) +
                                                  ", (mean Delta u / u)^2 = " + sci(c_pointwise) +
                                                  ", relative mismatch " + sci(mismatch)};
}

Outcome unipotent_algebra(const Context& ctx) {
  auto rng = criterion_rng(ctx.seed, 8);
  bool powers = true;
  bool triangular = true;
  bool corner = true;
  double worst_entry = 0.0;
  for (int n = 1; n <= 2; ++n) {
    for (int k = 1; k <= 2; ++k) {
      const BasisShape shape{n, k};
      const auto basis = cached_basis(shape);
      powers = powers && power_identity_check(unipotent_gamma(1, n), *basis, 5);
      const auto top = static_cast<Eigen::Index>(basis->size()) - 1;
      const BergmanPoint r = random_walk_point(shape, rng);
      for (std::int64_t m = -5; m <= 5; ++m) {
        const auto a = induced_section_matrix(unipotent_gamma(m, n), *basis);
        triangular = triangular && a.is_unit_upper_triangular();
        corner = corner && a.exact && (*a.exact)(top - 1, top) == -m;
        const Complex entry = orbit_separation_entry(r, m);
        const Complex direct = (r.matrix() * a.matrix)(top - 1, top);
        worst_entry = std::max(worst_entry, std::abs(entry - direct));
      }
    }
  }
  return {powers && triangular && corner && worst_entry <= 1e-12,
          std::string("A_m = A_1^m ") + (powers ? "yes" : "no") + ", unit upper triangular " +
              (triangular ? "yes" : "no") + ", corner entry = -m " + (corner ? "yes" : "no") +
              ", max entry deviation " + sci(worst_entry)};
}

Outcome isometry(const Context& ctx) {
  auto rng = criterion_rng(ctx.seed, 9);
  const auto quad = ctx.quad();
  double worst = 0.0;
  int checks = 0;
  for (int k = 1; k <= 2; ++k) {
    const BasisShape shape{1, k};
    for (const auto& r : {BergmanPoint::identity(shape), random_walk_point(shape, rng)}) {
      for (const std::int64_t m : {1, 2, 5}) {
        for (const auto kind : {MetricKind::calabi, MetricKind::mabuchi}) {
          worst = std::max(worst, isometry_defect(r, unipotent_gamma(m, 1), kind, quad).defect);
          ++checks;
        }
      }
    }
  }
  return {worst < 0.01, std::to_string(checks) + " (R, m, metric) cases; max defect " + sci(worst)};
}

Outcome divergence(const Context& ctx) {
  ExperimentConfig cfg;
  cfg.n = 1;
  cfg.k = 1;
  cfg.m_min = -10;
  cfg.m_max = 10;
  cfg.quad = ctx.quad();
  const auto records = orbit_sweep(cfg);
  int failed = 0;
  double mean = 0.0;
  double mean_var = 0.0;
  for (const auto& r : records) {
    if (!r.ok()) {
      ++failed;
      continue;
    }
    mean += r.ball_volume->value;
    mean_var += r.ball_volume->std_error * r.ball_volume->std_error;
  }
  const auto count = static_cast<double>(records.size() - static_cast<std::size_t>(failed));
  mean /= count;
  mean_var /= count * count;
  int outliers = 0;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const double combined = std::sqrt(r.ball_volume->std_error * r.ball_volume->std_error + mean_var);
    if (std::abs(r.ball_volume->value - mean) > 3.0 * combined) ++outliers;
  }
  const auto report = divergence_report(records);
  return {failed == 0 && records.size() == 21 && outliers == 0 && report.fit.max_rel_residual < 0.02 &&
              report.disjoint,
          std::to_string(records.size()) + " orbit points, " + std::to_string(failed) + " failed, " +
              std::to_string(outliers) + " outside 3 combined se; mean ball volume " + sci(mean) +
              ", max relative residual " + sci(report.fit.max_rel_residual) + ", disjoint " +
              (report.disjoint ? "yes" : "no")};
}

const std::vector<std::pair<int, std::string>>& criterion_names() {
  static const std::vector<std::pair<int, std::string>> names{
      {1, "dimension formula"},   {2, "QR round trip"},        {3, "gauge constancy"},
      {4, "analytic vs finite differences"}, {5, "total volume conservation"},
      {6, "Gram health"},         {7, "FS spectral cross-check"}, {8, "exact unipotent algebra"},
      {9, "isometry"},            {10, "divergence mechanism"},  {11, "determinism"},
  };
  return names;
}

Outcome run_one(int id, const Context& ctx) {
  switch (id) {
    case 1: return dimension_formula(ctx);
    case 2: return qr_round_trip(ctx);
    case 3: return gauge_constancy(ctx);
    case 4: return analytic_vs_fd(ctx);
    case 5: return volume_conservation(ctx);
    case 6: return gram_health(ctx);
    case 7: return fs_spectral(ctx);
    case 8: return unipotent_algebra(ctx);
    case 9: return isometry(ctx);
    case 10: return divergence(ctx);
    default: break;
  }
  throw InvalidArgument("unknown criterion " + std::to_string(id));
}

}  // namespace

std::string_view to_string(Profile profile) { return profile == Profile::quick ? "quick" : "full"; }

Profile parse_profile(std::string_view name) {
  if (name == "quick") return Profile::quick;
  if (name == "full") return Profile::full;
  throw InvalidArgument("unknown profile '" + std::string(name) + "' (expected quick or full)");
}

std::size_t profile_samples(Profile profile) { return profile == Profile::quick ? 20000 : 200000; }

bool AcceptanceReport::all_passed() const {
  for (const auto& c : criteria) {
    if (!c.passed) return false;
  }
  return true;
}

std::string AcceptanceReport::to_json() const {
  using nlohmann::json;
  json list = json::array();
  for (const auto& c : criteria) {
    list.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  const json j{{"profile", std::string(to_string(profile))},
               {"seed", seed},
               {"criteria", std::move(list)},
               {"all_passed", all_passed()}};
  return j.dump(2) + "\n";
}

AcceptanceReport run_acceptance_suite(const AcceptanceOptions& options) {
  Context ctx{options.profile, options.seed, options.laplacian};
  if (!ctx.laplacian) {
    ctx.laplacian = [](const BergmanPoint& r, const TangentParam& d, const ChartPoint& p) {
      return laplacian_of(r, d, p);
    };
  }
  auto selected = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };

  AcceptanceReport report{options.profile, options.seed, {}};
  for (const auto& [id, name] : criterion_names()) {
    if (!selected(id)) continue;
    CriterionResult result{id, name, false, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      if (id == 11) {
        // Two quick runs of criteria 1-10 must serialize identically.
        AcceptanceOptions inner{Profile::quick, options.seed, options.laplacian, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
        const std::string first = run_acceptance_suite(inner).to_json();
        const std::string second = run_acceptance_suite(inner).to_json();
        result.passed = first == second;
        result.detail = "two quick runs at seed " + std::to_string(options.seed) +
                        (result.passed ? " produced identical reports" : " produced different reports");
      } else {
        auto outcome = run_one(id, ctx);
        result.passed = outcome.passed;
        result.detail = std::move(outcome.detail);
      }
    } catch (const std::exception& e) {
      result.passed = false;
      result.detail = std::string("error: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.criteria.push_back(std::move(result));
  }
  return report;
}

}  // namespace bvol
