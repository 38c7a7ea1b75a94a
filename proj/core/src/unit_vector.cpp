#include "cellcert/unit_vector.hpp"

#include <cmath>
#include <stdexcept>

#include "cellcert/linalg.hpp"

namespace cellcert {

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2)
    throw std::invalid_argument("UnitVector: dim must be >= 2");
  double sq = 0.0;
  for (const double c : coords_) {
    if (!std::isfinite(c))
      throw std::invalid_argument("UnitVector: non-finite coordinate");
    sq += c * c;
  }
  if (sq < 1e-300)
    throw std::invalid_argument("UnitVector: zero vector cannot be normalized");
  const double inv = 1.0 / std::sqrt(sq);
  for (auto& c : coords_) c *= inv;
}

UnitVector UnitVector::axis(int dim, int k) {
  if (dim < 2 || k < 0 || k >= dim)
    throw std::invalid_argument("UnitVector::axis: bad dim or index");
  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  v[static_cast<std::size_t>(k)] = 1.0;
  return UnitVector(std::move(v));
}

double dot(const UnitVector& a, const UnitVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("dot: dimension mismatch");
  return dot(a.coords(), b.coords());
}

double distance(const UnitVector& a, const UnitVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("distance: dimension mismatch");
  double sq = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace cellcert
