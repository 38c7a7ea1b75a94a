#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cellcert/linalg.hpp"
#include "cellcert/rng.hpp"
#include "cellcert/unit_vector.hpp"

namespace cellcert {

/// M row vectors in R^d with i.i.d. N(0, 1/d) entries, plus the stream that
/// produced them. Frames are immutable; rebuilding from the same stream gives
/// bit-identical entries.
class GaussianFrame {
 public:
  /// Random frame per the standard model. Requires d >= 3 and M > 2d (the
  /// combinatorial bounds downstream need more than 2d rows).
  static GaussianFrame random(int d, int M, RngStream stream);

  /// Frame over explicit rows, for oracles and adversarial inputs; allows
  /// d >= 2 and any M >= 1.
  static GaussianFrame from_rows(Matrix rows, RngStream label = {});

  int d() const { return rows_.cols(); }
  int M() const { return rows_.rows(); }
  std::span<const double> row(int i) const { return rows_.row(i); }
  const Matrix& rows() const { return rows_; }
  const RngStream& seed() const { return seed_; }

  double row_dot(int i, std::span<const double> v) const {
    return dot(rows_.row(i), v);
  }

 private:
  GaussianFrame(Matrix rows, RngStream seed)
      : rows_(std::move(rows)), seed_(seed) {}
  Matrix rows_;
  RngStream seed_;
};

/// make_frame(d, M, stream): random Gaussian frame, deterministic per stream.
GaussianFrame make_frame(int d, int M, RngStream stream);

enum class ZeroSignPolicy {
  map_to_plus,  // exact zero inner products count as +1 and are tallied
  strict,       // exact zero raises DegenerateInput
};

/// One sign per frame row, values in {-1, +1}. zero_count tallies exact-zero
/// inner products mapped to +1 (measure zero for real inputs, nonzero only on
/// adversarial constructions).
struct SignPattern {
  std::vector<std::int8_t> bits;
  int zero_count = 0;
};

SignPattern sign_encode(const GaussianFrame& frame, const UnitVector& x,
                        ZeroSignPolicy policy = ZeroSignPolicy::map_to_plus);

}  // namespace cellcert
