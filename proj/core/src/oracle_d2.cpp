#include "cellcert/oracle_d2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cellcert/errors.hpp"

namespace cellcert {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

}  // namespace

std::vector<double> cell_boundaries_d2(std::span<const double> angles) {
  if (angles.empty())
    throw std::invalid_argument("cell_boundaries_d2: need at least one angle");
  std::vector<double> pts;
  pts.reserve(2 * angles.size());
  for (const double a : angles) {
    if (!std::isfinite(a))
      throw std::invalid_argument("cell_boundaries_d2: non-finite angle");
    pts.push_back(wrap(a + std::numbers::pi / 2));
    pts.push_back(wrap(a - std::numbers::pi / 2));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

CellArc exact_cell_d2(std::span<const double> angles, double x_angle) {
  const auto pts = cell_boundaries_d2(angles);
  const double x = wrap(x_angle);
  for (const double p : pts)
    if (p == x)
      throw DegenerateInput("exact_cell_d2: x lies exactly on a boundary");

  // Circular successor / predecessor of x among the boundary points.
  const auto up = std::upper_bound(pts.begin(), pts.end(), x);
  const double ccw = up == pts.end() ? pts.front() : *up;
  const double cw = up == pts.begin() ? pts.back() : *(up - 1);

  const double gap_ccw = wrap(ccw - x);
  const double gap_cw = wrap(x - cw);
  const double widest = std::max(gap_ccw, gap_cw);

  CellArc arc;
  arc.cw_boundary = cw;
  arc.ccw_boundary = ccw;
  arc.radius = 2.0 * std::sin(widest / 2.0);
  return arc;
}

}  // namespace cellcert
