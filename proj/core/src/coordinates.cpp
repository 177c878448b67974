#include <algorithm>
#include <cmath>

#include "bvol/bergman.hpp"
#include "bvol/errors.hpp"

namespace bvol {
namespace {

struct UpperSlot {
  Eigen::Index row;
  Eigen::Index col;
  bool imaginary;
};

// Position of canonical index `index` >= N among the strict upper entries.
UpperSlot upper_slot(Eigen::Index top, Eigen::Index index) {
  Eigen::Index offset = index - top;
  const bool imaginary = (offset % 2) == 1;
  offset /= 2;
  for (Eigen::Index i = 0; i < top; ++i) {
    const Eigen::Index row_len = top - i;
    if (offset < row_len) return {i, i + 1 + offset, imaginary};
    offset -= row_len;
  }
  throw InvalidArgument("canonical index out of range");
}

}  // namespace

Eigen::Index canonical_dimension(Eigen::Index top) { return top * top + 2 * top; }

Eigen::Index canonical_dimension(const BergmanPoint& point) {
  return canonical_dimension(point.top());
}

TangentParam canonical_direction(const BergmanPoint& point, Eigen::Index index) {
  const Eigen::Index top = point.top();
  if (index < 0 || index >= canonical_dimension(top)) {
    throw InvalidArgument("canonical_direction: index out of range");
  }
  CMatrix dr = CMatrix::Zero(point.dim(), point.dim());
  if (index < top) {
    dr(index, index) = point.diag(index);
    dr(top, top) = -point.diag(top);
  } else {
    const auto slot = upper_slot(top, index);
    dr(slot.row, slot.col) = slot.imaginary ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
  }
  return TangentParam(point, std::move(dr));
}

std::vector<CMatrix> canonical_directions(const BergmanPoint& point) {
  std::vector<CMatrix> out;
  const auto dim = canonical_dimension(point);
  out.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) out.push_back(canonical_direction(point, i).matrix());
  return out;
}

RVector tangent_coordinates(const BergmanPoint& point, const CMatrix& dr) {
  const Eigen::Index top = point.top();
  RVector x(canonical_dimension(top));
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < top; ++i) x[idx++] = dr(i, i).real() / point.diag(i);
  for (Eigen::Index i = 0; i < top; ++i) {
    for (Eigen::Index j = i + 1; j <= top; ++j) {
      x[idx++] = dr(i, j).real();
      x[idx++] = dr(i, j).imag();
    }
  }
  return x;
}

RVector coordinates(const BergmanPoint& point) {
  const Eigen::Index top = point.top();
  RVector x(canonical_dimension(top));
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < top; ++i) x[idx++] = std::log(point.diag(i));
  for (Eigen::Index i = 0; i < top; ++i) {
    for (Eigen::Index j = i + 1; j <= top; ++j) {
      x[idx++] = point.matrix()(i, j).real();
      x[idx++] = point.matrix()(i, j).imag();
    }
  }
  return x;
}

BergmanPoint from_coordinates(const RVector& x, BasisShape shape) {
  const auto dim = static_cast<Eigen::Index>(shape.dimension());
  const Eigen::Index top = dim - 1;
  if (x.size() != canonical_dimension(top)) throw InvalidArgument("from_coordinates: wrong coordinate count");
  if (!x.allFinite()) throw InvalidArgument("from_coordinates: non-finite coordinates");
  CMatrix r = CMatrix::Zero(dim, dim);
  Eigen::Index idx = 0;
  double log_sum = 0.0;
  for (Eigen::Index i = 0; i < top; ++i) {
    r(i, i) = std::exp(x[idx]);
    log_sum += x[idx++];
  }
  r(top, top) = std::exp(-log_sum);
  for (Eigen::Index i = 0; i < top; ++i) {
    for (Eigen::Index j = i + 1; j <= top; ++j) {
      r(i, j) = Complex(x[idx], x[idx + 1]);
      idx += 2;
    }
  }
  return BergmanPoint(std::move(r), shape);
}

BergmanPoint retract(const BergmanPoint& point, const TangentParam& d, double h) {
  CMatrix m = point.matrix() + h * d.matrix();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double diag = m(i, i).real();
    if (!(diag > 0.0)) throw InvalidArgument("retract: step leaves the positive-diagonal chart");
    log_det += std::log(diag);
  }
  m *= std::exp(-log_det / static_cast<double>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = Complex(m(i, i).real(), 0.0);
  return BergmanPoint(std::move(m), point.shape());
}

BergmanPoint random_walk_point(BasisShape shape, std::mt19937_64& rng, const RandomWalk& walk) {
  const auto top = static_cast<Eigen::Index>(shape.dimension()) - 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector x = RVector::Zero(canonical_dimension(top));
  for (int s = 0; s < walk.steps; ++s) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i] + walk.step * normal(rng), -walk.bound, walk.bound);
    }
  }
  return from_coordinates(x, shape);
}

}  // namespace bvol
