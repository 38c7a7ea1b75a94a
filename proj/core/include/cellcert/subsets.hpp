#pragma once

#include <vector>

#include "cellcert/frame.hpp"
#include "cellcert/rng.hpp"
#include "cellcert/unit_vector.hpp"

namespace cellcert {

/// Absolute constants of the selection scheme. Defaults are 1; experiments
/// fit empirical values rather than assuming any.
struct ConstantsConfig {
  double C1 = 1.0;  // V size multiplier: |V| = round(C1 d ln d)
  double C2 = 1.0;  // band width multiplier in tau
  double C3 = 1.0;  // lower subset-size constant (reported fits)
  double C4 = 1.0;  // upper subset-size constant (reported fits)
  double C5 = 1.0;  // radius-bound and margin-threshold constant
  void validate() const;
};

/// Band width tau = C2 sqrt(d) ln(d) ln(M) / M. Natural logs; requires d >= 3
/// and M >= 8 so both logs stay above 1.
double tau_of(int d, int M, const ConstantsConfig& cfg);

enum class BandVariant {
  full_band,      // |<g,x>| < tau
  negative_band,  // -tau < <g,x> < 0, union the fixed set V
  half_band,      // -tau < <g,x> < -tau/2
  margin_band,    // negative band filtered by a positive margin on g_[-1]
  oriented,       // negative band filtered by sign of <g_[-1], y_[-1]>
};

/// Index sets of the selection scheme. S = V (sorted union) W exactly; all
/// indices 0-based in [0, M).
struct SubsetSelection {
  double tau = 0.0;
  double eta = 0.0;
  std::vector<int> V;
  std::vector<int> W;
  std::vector<int> S;
  BandVariant variant = BandVariant::negative_band;

  int overlap_count() const;  // |V intersect W|
};

/// V: round(C1 d ln d) indices drawn without replacement from [0, M) using
/// only `stream` (independent of x). W: strict negative band at tau.
SubsetSelection select_subsets(const GaussianFrame& frame, const UnitVector& x,
                               double tau, const ConstantsConfig& cfg,
                               RngStream stream);

/// Indices with -tau < <g_i, x> < -tau/2 (both strict).
SubsetSelection select_half_band(const GaussianFrame& frame,
                                 const UnitVector& x, double tau);

}  // namespace cellcert
