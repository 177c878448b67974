// bvol: command-line front end for the Bergman-space volume experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bvol/acceptance.hpp"
#include "bvol/autgroup.hpp"
#include "bvol/errors.hpp"
#include "bvol/experiments.hpp"
#include "bvol/metrics.hpp"
#include "json.hpp"

namespace {

using namespace bvol;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kEstimationFailure = 1, kInvalidConfig = 2, kAcceptanceFailure = 3 };

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

// Options shared by the commands that evaluate a metric at one point.
struct PointOptions {
  int n = 1;
  int k = 1;
  std::string point = "identity";
  std::string metric = "calabi";
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
  std::string method = "monte_carlo";

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "Dimension of CP^n")->check(CLI::PositiveNumber);
    cmd->add_option("--k", k, "Degree of the polarization")->check(CLI::PositiveNumber);
    cmd->add_option("--point", point, "'identity' or a JSON matrix file");
    cmd->add_option("--metric", metric, "calabi or mabuchi");
    cmd->add_option("--samples", samples, "Quadrature sample count");
    cmd->add_option("--seed", seed, "Quadrature seed");
    cmd->add_option("--method", method, "monte_carlo, low_discrepancy or polar_grid");
  }

  BergmanPoint resolve_point() const {
    const BasisShape shape{n, k};
    section_space_dim(n, k);
    if (point == "identity") return BergmanPoint::identity(shape);
    const CMatrix m = load_matrix(point);
    if (m.rows() != static_cast<Eigen::Index>(shape.dimension()) || m.cols() != m.rows()) {
      throw InvalidArgument("point matrix must be " + std::to_string(shape.dimension()) + " x " +
                            std::to_string(shape.dimension()));
    }
    return canonical_qr(SLMatrix(m), shape).r;
  }

  QuadratureSpec quad() const {
    QuadratureSpec q;
    q.sample_count = samples;
    q.seed = seed;
    q.method = parse_quadrature_method(method);
    q.validate(n);
    return q;
  }
};

int cmd_dims(int n, int k) {
  std::cout << section_space_dim(n, k) << "\n";
  return kOk;
}

int cmd_basis(int n, int k) {
  const auto basis = build_basis(n, k);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::cout << i << ":";
    for (int e : basis[i].exponents()) std::cout << " " << e;
    std::cout << "\n";
  }
  return kOk;
}

int cmd_qr(const std::string& path) {
  const CMatrix a = load_matrix(path);
  const auto [q, r] = canonical_qr(SLMatrix(a));
  std::cout << json{{"q", matrix_json(q)}, {"r", matrix_json(r.matrix())}}.dump(2) << "\n";
  return kOk;
}

int cmd_gram(const PointOptions& opt) {
  const auto g = gram(opt.resolve_point(), parse_metric_kind(opt.metric), opt.quad());
  std::cout << json{{"metric", opt.metric},
                    {"dimension", g.dim()},
                    {"entries", real_matrix_json(g.entries)},
                    {"std_errors", real_matrix_json(g.std_errors)},
                    {"min_eigenvalue", g.min_eigenvalue()}}
                   .dump(2)
            << "\n";
  return kOk;
}

int cmd_density(const PointOptions& opt) {
  const auto vd = volume_density(opt.resolve_point(), parse_metric_kind(opt.metric), opt.quad());
  std::cout << json{{"metric", opt.metric}, {"density", vd.density.value}, {"std_error", vd.density.std_error}}.dump(2)
            << "\n";
  return kOk;
}

int cmd_orbit_sweep(const std::string& config_path, const std::string& csv, const std::string& report) {
  ExperimentConfig cfg = load_config(config_path);
  if (!csv.empty()) cfg.csv_path = csv;
  if (!report.empty()) cfg.report_path = report;
  const auto records = orbit_sweep(cfg);
  write_text(cfg.csv_path, orbit_csv(records));
  write_text(cfg.report_path, divergence_report_json(divergence_report(records), cfg));
  int failed = 0;
  for (const auto& r : records) {
    if (!r.ok()) {
      std::cerr << "m = " << r.m << ": " << r.error << "\n";
      ++failed;
    }
  }
  return failed == 0 ? kOk : kEstimationFailure;
}

int cmd_isometry(const PointOptions& opt, std::int64_t m, bool plain) {
  const auto point = opt.resolve_point();
  const auto result = isometry_defect(point, unipotent_gamma(m, opt.n), parse_metric_kind(opt.metric), opt.quad(),
                                      plain ? SampleTransport::plain : SampleTransport::matched);
  std::cout << json{{"m", m},
                    {"metric", opt.metric},
                    {"transport", plain ? "plain" : "matched"},
                    {"defect", result.defect},
                    {"jacobian_determinant", result.jacobian.determinant()}}
                   .dump(2)
            << "\n";
  return kOk;
}

int cmd_accept(const std::string& profile, std::uint64_t seed, const std::string& out) {
  AcceptanceOptions options;
  options.profile = parse_profile(profile);
  options.seed = seed;
  const auto report = run_acceptance_suite(options);
  for (const auto& c : report.criteria) {
    std::fprintf(stderr, "[%s] %2d %-32s %7.2fs  %s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                 c.seconds, c.detail.c_str());
  }
  write_text(out, report.to_json());
  return report.all_passed() ? kOk : kAcceptanceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman-space volume experiments on CP^n"};
  app.require_subcommand(1);

  int n = 1;
  int k = 1;
  auto* dims = app.add_subcommand("dims", "Number of degree-k monomials on CP^n");
  dims->add_option("--n", n)->required();
  dims->add_option("--k", k)->required();
  auto* basis = app.add_subcommand("basis", "List the lex-ordered monomial basis");
  basis->add_option("--n", n)->required();
  basis->add_option("--k", k)->required();

  std::string matrix_path;
  auto* qr = app.add_subcommand("qr", "Canonical QR of a matrix");
  qr->add_option("--matrix", matrix_path, "JSON matrix file")->required();

  PointOptions gram_opt;
  auto* gram_cmd = app.add_subcommand("gram", "Gram matrix of the restricted metric");
  gram_opt.attach(gram_cmd);
  PointOptions density_opt;
  auto* density_cmd = app.add_subcommand("density", "Volume density sqrt(det G)");
  density_opt.attach(density_cmd);

  std::string config_path;
  std::string csv_path;
  std::string report_path;
  auto* sweep = app.add_subcommand("orbit-sweep", "Ball volumes along a unipotent orbit");
  sweep->add_option("--config", config_path, "JSON experiment config")->required();
  sweep->add_option("--csv", csv_path, "Override the CSV output path");
  sweep->add_option("--report", report_path, "Override the JSON report path");

  PointOptions iso_opt;
  std::int64_t m = 1;
  bool plain = false;
  auto* iso = app.add_subcommand("isometry-check", "Gram congruence defect under gamma_m");
  iso_opt.attach(iso);
  iso->add_option("--m", m, "Orbit index")->required();
  iso->add_flag("--plain", plain, "Use the same FS samples for both Grams");

  std::string profile = "quick";
  std::uint64_t seed = 0;
  std::string out;
  auto* accept = app.add_subcommand("accept", "Run the acceptance criteria");
  accept->add_option("--profile", profile, "quick or full");
  accept->add_option("--seed", seed, "Base seed");
  accept->add_option("--out", out, "JSON report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*dims) return cmd_dims(n, k);
    if (*basis) return cmd_basis(n, k);
    if (*qr) return cmd_qr(matrix_path);
    if (*gram_cmd) return cmd_gram(gram_opt);
    if (*density_cmd) return cmd_density(density_opt);
    if (*sweep) return cmd_orbit_sweep(config_path, csv_path, report_path);
    if (*iso) return cmd_isometry(iso_opt, m, plain);
    if (*accept) return cmd_accept(profile, seed, out);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEstimationFailure;
  }
  return kOk;
}
