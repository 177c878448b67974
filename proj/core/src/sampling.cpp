#include <algorithm>
#include <cmath>
#include <random>

#include <boost/random/sobol.hpp>

#include "bvol/errors.hpp"
#include "bvol/projspace.hpp"

namespace bvol {
namespace {

// Complex Gaussian direction from two uniforms in (0, 1): |z|^2 ~ Exp(1).
Complex gaussian_from_uniforms(double u1, double u2) {
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * kPi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

HomogeneousPoint normalized(CVector z) {
  z /= z.norm();
  return HomogeneousPoint(std::move(z));
}

std::vector<HomogeneousPoint> sample_gaussian(int n, const QuadratureSpec& quad) {
  std::mt19937_64 rng(quad.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<HomogeneousPoint> out;
  out.reserve(quad.sample_count);
  for (std::size_t i = 0; i < quad.sample_count; ++i) {
    CVector z(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z[j] = Complex(re, im);
    }
    out.push_back(normalized(std::move(z)));
  }
  return out;
}

std::vector<HomogeneousPoint> sample_sobol(int n, const QuadratureSpec& quad) {
  const auto dims = static_cast<std::size_t>(2 * (n + 1));
  boost::random::sobol engine(dims);
  // Cranley-Patterson rotation keeps the net structure and makes the seed count.
  std::mt19937_64 rng(quad.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> shift(dims);
  for (auto& s : shift) s = uniform(rng);

  const double scale = 1.0 / (static_cast<double>(engine.max()) + 1.0);
  std::vector<double> u(dims);
  std::vector<HomogeneousPoint> out;
  out.reserve(quad.sample_count);
  for (std::size_t i = 0; i < quad.sample_count; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      double x = static_cast<double>(engine()) * scale + shift[d];
      x -= std::floor(x);
      u[d] = std::clamp(x, 0x1.0p-60, 1.0 - 0x1.0p-53);
    }
    CVector z(n + 1);
    for (int j = 0; j <= n; ++j) z[j] = gaussian_from_uniforms(u[2 * j], u[2 * j + 1]);
    out.push_back(normalized(std::move(z)));
  }
  return out;
}

// On CP^1 in the chart Z_0 = 1, t = |z|^2 / (1 + |z|^2) and arg z are
// independent and uniform under the FS probability measure, so midpoints of
// an equal grid in (t, arg z) carry equal weight.
std::vector<HomogeneousPoint> sample_polar_grid(const QuadratureSpec& quad) {
  const auto radial = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::sqrt(static_cast<double>(quad.sample_count))));
  const auto angular = std::max<std::size_t>(1, quad.sample_count / radial);
  std::mt19937_64 rng(quad.seed);
  const double offset = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

  std::vector<HomogeneousPoint> out;
  out.reserve(radial * angular);
  for (std::size_t a = 0; a < radial; ++a) {
    const double t = (static_cast<double>(a) + 0.5) / static_cast<double>(radial);
    const double r = std::sqrt(t / (1.0 - t));
    for (std::size_t b = 0; b < angular; ++b) {
      const double theta = 2.0 * kPi * (static_cast<double>(b) + offset) / static_cast<double>(angular);
      CVector z(2);
      z[0] = 1.0;
      z[1] = std::polar(r, theta);
      out.push_back(normalized(std::move(z)));
    }
  }
  return out;
}

}  // namespace

std::vector<HomogeneousPoint> sample_fs(int n, const QuadratureSpec& quad) {
  quad.validate(n);
  switch (quad.method) {
    case QuadratureMethod::monte_carlo: return sample_gaussian(n, quad);
    case QuadratureMethod::low_discrepancy: return sample_sobol(n, quad);
    case QuadratureMethod::polar_grid: return sample_polar_grid(quad);
  }
  throw InvalidArgument("sample_fs: unknown quadrature method");
}

}  // namespace bvol
