#include <fstream>
#include <sstream>

#include "bvol/errors.hpp"
#include "bvol/experiments.hpp"
#include "json.hpp"

namespace bvol {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw InvalidArgument(std::string("config: missing key '") + key + "'");
  return obj.at(key);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (const auto k : known) found = found || key == k;
    if (!found) throw InvalidArgument(std::string("config: unknown key '") + key + "' in " + where);
  }
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw InvalidArgument("config: complex numbers are written as [re, im]");
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw InvalidArgument("config: matrices are arrays of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument("config: matrix rows have different lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

BasePointSpec parse_base_point(const json& j) {
  BasePointSpec spec;
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") throw InvalidArgument("config: base_point string must be 'identity'");
    return spec;
  }
  if (!j.is_object()) throw InvalidArgument("config: base_point must be 'identity' or an object");
  reject_unknown(j, {"kind", "entries", "seed", "steps", "step", "bound"}, "base_point");
  const auto kind = require(j, "kind").get<std::string>();
  if (kind == "identity") {
    spec.kind = BasePointKind::identity;
  } else if (kind == "entries") {
    spec.kind = BasePointKind::entries;
    spec.entries = matrix_from_json(require(j, "entries"));
  } else if (kind == "random_walk") {
    spec.kind = BasePointKind::random_walk;
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.walk.steps = j.value("steps", spec.walk.steps);
    spec.walk.step = j.value("step", spec.walk.step);
    spec.walk.bound = j.value("bound", spec.walk.bound);
  } else {
    throw InvalidArgument("config: base_point kind must be identity, entries or random_walk");
  }
  return spec;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json base_point_json(const BasePointSpec& spec) {
  switch (spec.kind) {
    case BasePointKind::identity:
      return json{{"kind", "identity"}};
    case BasePointKind::entries: {
      json rows = json::array();
      for (Eigen::Index i = 0; i < spec.entries.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < spec.entries.cols(); ++c) row.push_back(complex_json(spec.entries(i, c)));
        rows.push_back(std::move(row));
      }
      return json{{"kind", "entries"}, {"entries", std::move(rows)}};
    }
    case BasePointKind::random_walk:
      return json{{"kind", "random_walk"},
                  {"seed", spec.seed},
                  {"steps", spec.walk.steps},
                  {"step", spec.walk.step},
                  {"bound", spec.walk.bound}};
  }
  return {};
}

}  // namespace

BergmanPoint BasePointSpec::resolve(BasisShape shape) const {
  switch (kind) {
    case BasePointKind::identity:
      return BergmanPoint::identity(shape);
    case BasePointKind::entries: {
      const auto dim = static_cast<Eigen::Index>(shape.dimension());
      if (entries.rows() != dim || entries.cols() != dim) {
        throw InvalidArgument("base_point entries must be " + std::to_string(dim) + "x" + std::to_string(dim));
      }
      return canonical_qr(SLMatrix(entries), shape).r;
    }
    case BasePointKind::random_walk: {
      if (walk.steps < 0 || !(walk.step >= 0.0) || !(walk.bound > 0.0)) {
        throw InvalidArgument("base_point random walk needs steps >= 0, step >= 0, bound > 0");
      }
      std::mt19937_64 rng(seed);
      return random_walk_point(shape, rng, walk);
    }
  }
  throw InvalidArgument("base_point: unknown kind");
}

double ExperimentConfig::resolved_epsilon(const BergmanPoint& base) const {
  return epsilon.value_or(0.1 * base.diag(base.top() - 1));
}

void ExperimentConfig::validate() const {
  section_space_dim(n, k);
  if (m_min > m_max) throw InvalidArgument("config: m_range must be [lo, hi] with lo <= hi");
  quad.validate(n);
  const BergmanPoint base = base_point.resolve(shape());
  const double eps = resolved_epsilon(base);
  const double limit = base.diag(base.top() - 1) / 2.0;
  if (!(eps > 0.0) || !(eps < limit)) {
    std::ostringstream msg;
    msg << "config: epsilon = " << eps << " must lie in (0, r_{N-1,N-1} / 2 = " << limit << ")";
    throw InvalidArgument(msg.str());
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config: top level must be an object");
  reject_unknown(j, {"n", "k", "base_point", "m_range", "epsilon", "quad", "metric", "transport", "output"},
                 "config");

  ExperimentConfig cfg;
  try {
    cfg.n = j.value("n", cfg.n);
    cfg.k = j.value("k", cfg.k);
    if (j.contains("base_point")) cfg.base_point = parse_base_point(j.at("base_point"));
    if (j.contains("m_range")) {
      const auto& r = j.at("m_range");
      if (!r.is_array() || r.size() != 2) throw InvalidArgument("config: m_range must be [lo, hi]");
      cfg.m_min = r[0].get<std::int64_t>();
      cfg.m_max = r[1].get<std::int64_t>();
    }
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("quad")) {
      const auto& q = j.at("quad");
      reject_unknown(q, {"sample_count", "seed", "method"}, "quad");
      cfg.quad.sample_count = q.value("sample_count", cfg.quad.sample_count);
      cfg.quad.seed = q.value("seed", cfg.quad.seed);
      if (q.contains("method")) cfg.quad.method = parse_quadrature_method(q.at("method").get<std::string>());
    }
    if (j.contains("metric")) cfg.metric = parse_metric_kind(j.at("metric").get<std::string>());
    cfg.transport = j.value("transport", cfg.transport);
    if (j.contains("output")) {
      const auto& o = j.at("output");
      reject_unknown(o, {"csv", "report"}, "output");
      cfg.csv_path = o.value("csv", std::string{});
      cfg.report_path = o.value("report", std::string{});
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

CMatrix parse_matrix(std::string_view json_text) {
  try {
    return matrix_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("matrix: ") + e.what());
  }
}

CMatrix load_matrix(const std::filesystem::path& path) { return parse_matrix(read_text(path)); }

std::string config_to_json(const ExperimentConfig& cfg) {
  const BergmanPoint base = cfg.base_point.resolve(cfg.shape());
  json j{{"n", cfg.n},
         {"k", cfg.k},
         {"base_point", base_point_json(cfg.base_point)},
         {"m_range", json::array({cfg.m_min, cfg.m_max})},
         {"epsilon", cfg.resolved_epsilon(base)},
         {"quad",
          {{"sample_count", cfg.quad.sample_count},
           {"seed", cfg.quad.seed},
           {"method", std::string(to_string(cfg.quad.method))}}},
         {"metric", std::string(to_string(cfg.metric))},
         {"transport", cfg.transport},
         {"output", {{"csv", cfg.csv_path}, {"report", cfg.report_path}}}};
  return j.dump();
}

}  // namespace bvol
