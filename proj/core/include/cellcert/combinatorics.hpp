#pragma once

#include "cellcert/bigint.hpp"

namespace cellcert {

/// Exact number of cells cut out of S^{d-1} by M central hyperplanes in
/// general position: 2 * sum_{i<d} C(M-1, i).
BigUint schlafli_cell_count(int M, int d);

/// Both sides of the binomial tail ratio bound
///   sum_{i<=d} C(M,i)  <=  C(M,d) * (M-d+1) / (M-2d+1).
/// Requires M - 2d + 1 > 0.
struct TailRatioBound {
  BigUint lhs;
  Rational rhs;
  bool holds() const;  // exact cross-multiplied comparison
};
TailRatioBound binom_tail_ratio_bound(int M, int d);

/// Expected number of faces of a uniformly drawn cell:
///   2 M sum_{i<=d-2} C(M-2,i) / sum_{i<=d-1} C(M-1,i), exact rational.
Rational expected_face_count(int M, int d);

}  // namespace cellcert
