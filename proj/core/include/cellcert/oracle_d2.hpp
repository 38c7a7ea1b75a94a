#pragma once

#include <span>
#include <vector>

namespace cellcert {

/// Exact ground truth for the circle (d = 2). Hyperplane normals are given by
/// angles; each contributes the two boundary points theta +- pi/2 on the
/// circle. The cell containing x_angle is the open arc between the nearest
/// boundary points on either side.
struct CellArc {
  double cw_boundary;   // arc start, clockwise neighbor of x (radians, [0,2pi))
  double ccw_boundary;  // arc end, counterclockwise neighbor
  double radius;        // max chord distance from x to an arc endpoint
};

/// Throws DegenerateInput when x_angle falls exactly on a boundary point.
CellArc exact_cell_d2(std::span<const double> angles, double x_angle);

/// Sorted distinct boundary points in [0, 2pi); generically 2M of them, so
/// the circle splits into exactly that many arcs.
std::vector<double> cell_boundaries_d2(std::span<const double> angles);

}  // namespace cellcert
