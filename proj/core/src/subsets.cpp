#include "cellcert/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cellcert {

void ConstantsConfig::validate() const {
  for (const double c : {C1, C2, C3, C4, C5}) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("ConstantsConfig: constants must be > 0");
  }
}

double tau_of(int d, int M, const ConstantsConfig& cfg) {
  if (d < 3) throw std::invalid_argument("tau_of: d must be >= 3");
  if (M < 8) throw std::invalid_argument("tau_of: M must be >= 8");
  cfg.validate();
  return cfg.C2 * std::sqrt(static_cast<double>(d)) * std::log(d) *
         std::log(M) / M;
}

int SubsetSelection::overlap_count() const {
  int cnt = 0;
  auto it = W.begin();
  for (const int v : V) {
    it = std::lower_bound(it, W.end(), v);
    if (it != W.end() && *it == v) ++cnt;
  }
  return cnt;
}

namespace {

std::vector<int> sorted_union(const std::vector<int>& a,
                              const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

}  // namespace

SubsetSelection select_subsets(const GaussianFrame& frame, const UnitVector& x,
                               double tau, const ConstantsConfig& cfg,
                               RngStream stream) {
  if (x.dim() != frame.d())
    throw std::invalid_argument("select_subsets: dimension mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("select_subsets: tau must be > 0");
  cfg.validate();

  // Ties in rounding go up.
  const double target = cfg.C1 * frame.d() * std::log(frame.d());
  const int v_size = static_cast<int>(std::floor(target + 0.5));
  if (v_size > frame.M())
    throw std::invalid_argument(
        "select_subsets: requested |V| exceeds frame size");

  SubsetSelection sel;
  sel.tau = tau;
  sel.variant = BandVariant::negative_band;

  RngCursor rng(stream);
  sel.V = sample_without_replacement(frame.M(), v_size, rng);

  for (int i = 0; i < frame.M(); ++i) {
    const double ip = frame.row_dot(i, x.coords());
    if (ip > -tau && ip < 0.0) sel.W.push_back(i);
  }
  sel.S = sorted_union(sel.V, sel.W);
  return sel;
}

SubsetSelection select_half_band(const GaussianFrame& frame,
                                 const UnitVector& x, double tau) {
  if (x.dim() != frame.d())
    throw std::invalid_argument("select_half_band: dimension mismatch");
  if (!(tau > 0.0))
    throw std::invalid_argument("select_half_band: tau must be > 0");
  SubsetSelection sel;
  sel.tau = tau;
  sel.variant = BandVariant::half_band;
  for (int i = 0; i < frame.M(); ++i) {
    const double ip = frame.row_dot(i, x.coords());
    if (ip > -tau && ip < -tau / 2.0) sel.W.push_back(i);
  }
  sel.S = sel.W;
  return sel;
}

}  // namespace cellcert
