#include "cellcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cellcert/errors.hpp"

namespace cellcert {
namespace {

// Constraint system sigma_i <g_i, y> >= 0 in dense form.
struct ConeProblem {
  int d = 0;
  int m = 0;
  std::vector<double> normals;  // m x d, row i = sigma_i * g_i
  std::vector<double> inv_sq;   // 1 / ||g_i||^2

  std::span<const double> normal(int i) const {
    return {normals.data() + static_cast<std::size_t>(i) * d,
            static_cast<std::size_t>(d)};
  }

  double violation(std::span<const double> y) const {
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const double ip = dot(normal(i), y);
      if (-ip > worst) worst = -ip;
    }
    return worst;
  }

  // One cyclic pass of Dykstra-corrected halfspace projections, then the
  // unit-ball projection. Corrections persist across cycles within a step.
  void project_cycle(std::vector<double>& y,
                     std::vector<double>& corrections) const {
    for (int i = 0; i < m; ++i) {
      double* corr = corrections.data() + static_cast<std::size_t>(i) * d;
      for (int j = 0; j < d; ++j) y[static_cast<std::size_t>(j)] += corr[j];
      const auto n_i = normal(i);
      const double ip = dot(n_i, y);
      if (ip < 0.0) {
        const double coef = ip * inv_sq[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
          const double delta = coef * n_i[static_cast<std::size_t>(j)];
          y[static_cast<std::size_t>(j)] -= delta;
          corr[j] = delta;
        }
      } else {
        for (int j = 0; j < d; ++j) corr[j] = 0.0;
      }
    }
    const double n = norm2(y);
    if (n > 1.0)
      for (auto& v : y) v /= n;
  }

  // Plain cyclic projections (no corrections); used to polish feasibility.
  void pocs_pass(std::vector<double>& y) const {
    for (int i = 0; i < m; ++i) {
      const auto n_i = normal(i);
      const double ip = dot(n_i, y);
      if (ip < 0.0) {
        const double coef = ip * inv_sq[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j)
          y[static_cast<std::size_t>(j)] -=
              coef * n_i[static_cast<std::size_t>(j)];
      }
    }
  }
};

ConeProblem build_problem(const GaussianFrame& frame,
                          std::span<const int> subset,
                          std::span<const std::int8_t> signs) {
  ConeProblem p;
  p.d = frame.d();
  p.m = static_cast<int>(subset.size());
  p.normals.resize(static_cast<std::size_t>(p.m) * p.d);
  p.inv_sq.resize(static_cast<std::size_t>(p.m));
  for (int i = 0; i < p.m; ++i) {
    const int idx = subset[static_cast<std::size_t>(i)];
    if (idx < 0 || idx >= frame.M())
      throw std::invalid_argument("cell_radius: subset index out of range");
    const auto row = frame.row(idx);
    const double sq = dot(row, row);
    if (sq <= 0.0) throw std::invalid_argument("cell_radius: zero frame row");
    p.inv_sq[static_cast<std::size_t>(i)] = 1.0 / sq;
    const double sigma = signs[static_cast<std::size_t>(i)] >= 0 ? 1.0 : -1.0;
    for (int j = 0; j < p.d; ++j)
      p.normals[static_cast<std::size_t>(i) * p.d + j] =
          sigma * row[static_cast<std::size_t>(j)];
  }
  return p;
}

struct RunResult {
  std::vector<double> y;  // unit witness (empty when the run failed)
  double objective = std::numeric_limits<double>::infinity();
  double residual = 0.0;        // pre-normalization violation
  double unit_violation = 0.0;  // violation of the unit witness
  long iterations = 0;
  bool converged = false;
};

// One projected-descent run from a given unit start.
RunResult descend(const ConeProblem& p, std::span<const double> x,
                  std::vector<double> start, const SolverOptions& opts) {
  RunResult out;
  std::vector<double> y = std::move(start);
  std::vector<double> corrections(static_cast<std::size_t>(p.m) * p.d, 0.0);
  std::vector<double> v(static_cast<std::size_t>(p.d));

  double step = opts.step;
  double window_best = std::numeric_limits<double>::infinity();
  int window_len = 0;
  const int phase_window = 30;   // iterations per step-halving decision
  const int final_window = 100;  // stall window at the smallest step
  bool at_min_step = opts.step <= opts.min_step;
  bool stalled = false;
  int frozen = 0;  // consecutive iterations with no iterate movement
  long it = 0;

  for (; it < opts.max_iterations; ++it) {
    for (int j = 0; j < p.d; ++j)
      v[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j)] -
                                       step * x[static_cast<std::size_t>(j)];
    for (int c = 0; c < std::max(1, opts.dykstra_cycles); ++c)
      p.project_cycle(v, corrections);
    const double n = norm2(v);
    if (n < 1e-12) break;  // collapsed to the apex; direction lost
    double move = 0.0;
    for (int j = 0; j < p.d; ++j) {
      const double next = v[static_cast<std::size_t>(j)] / n;
      move = std::max(move,
                      std::abs(next - y[static_cast<std::size_t>(j)]));
      y[static_cast<std::size_t>(j)] = next;
    }
    // Exactly pinned at a vertex: the whole stall window would pass with no
    // change, so skip ahead.
    if (move < 1e-15) {
      if (++frozen >= 3) window_len = std::max(window_len, final_window);
    } else {
      frozen = 0;
    }

    const double f = dot(x, std::span<const double>(y));
    const int window = at_min_step ? final_window : phase_window;
    if (f < window_best - opts.tolerance && window_len < window) {
      window_best = f;
      window_len = 0;
    } else if (++window_len >= window) {
      if (at_min_step) {
        stalled = true;
        ++it;
        break;
      }
      step *= 0.5;
      if (step <= opts.min_step) {
        step = opts.min_step;
        at_min_step = true;
      }
      window_best = f;
      window_len = 0;
    }
  }
  out.iterations = it;

  // Feasibility polish: plain cyclic projections without the descent pull.
  double resid = p.violation(y);
  for (int pass = 0; pass < 400 && resid > 1e-14; ++pass) {
    p.pocs_pass(y);
    const double n = norm2(y);
    if (n < 1e-12) {
      out.y.clear();
      return out;
    }
    if (n < 0.05)
      for (auto& c : y) c /= n;
    resid = p.violation(y);
  }
  out.residual = resid;
  const double n = norm2(y);
  if (n < 1e-12) {
    out.y.clear();
    return out;
  }
  for (auto& c : y) c /= n;
  out.unit_violation = p.violation(y);
  out.objective = dot(x, std::span<const double>(y));
  out.converged = stalled && out.unit_violation <= 1e-10;
  out.y = std::move(y);
  return out;
}

std::vector<std::vector<double>> build_starts(const ConeProblem& p,
                                              std::span<const double> x,
                                              const GaussianFrame& frame,
                                              std::span<const int> subset,
                                              const SolverOptions& opts) {
  std::vector<std::vector<double>> starts;
  const int d = p.d;

  // Antipode: the global solution whenever the cell spans a half-sphere.
  if (opts.antipode_start) {
    std::vector<double> anti(x.begin(), x.end());
    for (auto& c : anti) c = -c;
    starts.push_back(std::move(anti));
  }

  // Reflections of x across the faces nearest to it. The binding faces of
  // the cell are among the nearest hyperplanes, and a reflected start lands
  // in the adjacent cell so a single projection puts it onto the shared face.
  const int m = static_cast<int>(subset.size());
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> closeness(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto row = frame.row(subset[static_cast<std::size_t>(i)]);
    closeness[static_cast<std::size_t>(i)] =
        std::abs(dot(row, x)) *
        std::sqrt(p.inv_sq[static_cast<std::size_t>(i)]);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return closeness[static_cast<std::size_t>(a)] <
           closeness[static_cast<std::size_t>(b)];
  });
  const int n_reflect = std::min(m, std::max(0, opts.reflection_starts));
  for (int k = 0; k < n_reflect; ++k) {
    const int i = order[static_cast<std::size_t>(k)];
    const auto row = frame.row(subset[static_cast<std::size_t>(i)]);
    const double coef =
        2.0 * dot(row, x) * p.inv_sq[static_cast<std::size_t>(i)];
    std::vector<double> s(x.begin(), x.end());
    for (int j = 0; j < d; ++j)
      s[static_cast<std::size_t>(j)] -= coef * row[static_cast<std::size_t>(j)];
    const double n = norm2(s);
    if (n > 1e-12) {
      for (auto& c : s) c /= n;
      starts.push_back(std::move(s));
    }
  }

  RngCursor rng(RngStream{opts.seed, 0x57A7A5ull});
  for (int k = 0; k < opts.random_starts; ++k)
    starts.push_back(random_unit(rng, d));

  for (const auto& s : opts.extra_starts) {
    if (static_cast<int>(s.size()) != d)
      throw std::invalid_argument("SolverOptions: extra start has wrong dim");
    std::vector<double> copy = s;
    const double n = norm2(copy);
    if (n > 1e-12) {
      for (auto& c : copy) c /= n;
      starts.push_back(std::move(copy));
    }
  }
  return starts;
}

CellCertificate solve(const GaussianFrame& frame, std::span<const int> subset,
                      std::span<const std::int8_t> signs, const UnitVector& x,
                      const SolverOptions& opts) {
  if (x.dim() != frame.d())
    throw std::invalid_argument("cell_radius: dimension mismatch");
  if (subset.empty()) {
    std::vector<double> anti(x.coords().begin(), x.coords().end());
    for (auto& c : anti) c = -c;
    return CellCertificate{UnitVector(std::move(anti)), 2.0, 0, 0.0, true};
  }

  const ConeProblem p = build_problem(frame, subset, signs);
  if (p.violation(x.coords()) > 1e-9)
    throw InconsistentInput(
        "cell_radius: anchor violates the subset sign constraints");

  const auto starts = build_starts(p, x.coords(), frame, subset, opts);
  RunResult best;
  bool have_witness = false;
  long total_iterations = 0;
  for (const auto& s : starts) {
    RunResult r = descend(p, x.coords(), s, opts);
    total_iterations += r.iterations;
    if (r.y.empty() || r.unit_violation > 1e-9) continue;
    if (!have_witness || r.objective < best.objective) {
      best = std::move(r);
      have_witness = true;
    }
  }
  if (!have_witness) {
    // The anchor is feasible, so fall back to it; radius 0 is still a valid
    // lower bound on the cell radius.
    return CellCertificate{x, 0.0, total_iterations, 0.0, false};
  }

  UnitVector witness(best.y);
  return CellCertificate{witness, distance(witness, x), total_iterations,
                         best.residual, best.converged};
}

}  // namespace

CellCertificate cell_radius(const GaussianFrame& frame,
                            std::span<const int> subset, const UnitVector& x,
                            const SolverOptions& opts) {
  // Signs come from x's own inner products; exact zeros map to +1 exactly as
  // in sign_encode.
  std::vector<std::int8_t> signs(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const int idx = subset[i];
    if (idx < 0 || idx >= frame.M())
      throw std::invalid_argument("cell_radius: subset index out of range");
    const double ip = frame.row_dot(idx, x.coords());
    signs[i] = ip > 0 ? 1 : (ip == 0.0 ? 1 : -1);
  }
  return solve(frame, subset, signs, x, opts);
}

CellCertificate cell_radius(const GaussianFrame& frame,
                            const SubsetSelection& subset, const UnitVector& x,
                            const SolverOptions& opts) {
  return cell_radius(frame, std::span<const int>(subset.S), x, opts);
}

CellCertificate cell_radius_signed(const GaussianFrame& frame,
                                   std::span<const int> subset,
                                   std::span<const std::int8_t> signs,
                                   const UnitVector& anchor,
                                   const SolverOptions& opts) {
  if (signs.size() != subset.size())
    throw std::invalid_argument("cell_radius_signed: signs/subset mismatch");
  return solve(frame, subset, signs, anchor, opts);
}

std::optional<UnitVector> feasible_point(const GaussianFrame& frame,
                                         std::span<const int> subset,
                                         std::span<const std::int8_t> signs,
                                         RngStream stream, int max_starts) {
  if (subset.empty()) return UnitVector::axis(frame.d(), 0);
  if (signs.size() != subset.size())
    throw std::invalid_argument("feasible_point: signs/subset mismatch");
  const ConeProblem p = build_problem(frame, subset, signs);
  const int d = p.d;

  RngCursor rng(stream);
  for (int attempt = 0; attempt < std::max(1, max_starts); ++attempt) {
    std::vector<double> y;
    if (attempt == 0) {
      // Mean of the inward unit normals: feasible outright for most cells.
      y.assign(static_cast<std::size_t>(d), 0.0);
      for (int i = 0; i < p.m; ++i) {
        const auto n_i = p.normal(i);
        const double inv = std::sqrt(p.inv_sq[static_cast<std::size_t>(i)]);
        for (int j = 0; j < d; ++j)
          y[static_cast<std::size_t>(j)] +=
              n_i[static_cast<std::size_t>(j)] * inv;
      }
      if (norm2(y) < 1e-12) y = random_unit(rng, d);
    } else {
      y = random_unit(rng, d);
    }
    normalize_in_place(y);

    for (int round = 0; round < 3000; ++round) {
      if (p.violation(y) <= 1e-12) break;
      p.pocs_pass(y);
      const double n = norm2(y);
      if (n < 1e-12) break;
      if (n < 0.05)
        for (auto& c : y) c /= n;
    }
    if (norm2(y) > 1e-12) {
      normalize_in_place(y);
      if (p.violation(y) <= 1e-9) return UnitVector(std::move(y));
    }
  }
  return std::nullopt;
}

double theorem_radius_bound(int d, int M, const ConstantsConfig& cfg) {
  if (d < 3)
    throw std::invalid_argument("theorem_radius_bound: d must be >= 3");
  if (M < 8)
    throw std::invalid_argument("theorem_radius_bound: M must be >= 8");
  cfg.validate();
  const double core = d * std::log(d) * std::log(M);
  return cfg.C5 * core / std::sqrt(static_cast<double>(M) * M + core * core);
}

double margin_radius_bound(double tau, double q) {
  if (!(tau > 0.0))
    throw std::invalid_argument("margin_radius_bound: tau must be > 0");
  if (q < 0.0)
    throw std::invalid_argument("margin_radius_bound: q must be >= 0");
  const double ratio = tau * tau / (q * q + tau * tau);
  return std::sqrt(2.0 - 2.0 * std::sqrt(1.0 - ratio));
}

ConsistencyReport check_sign_consistency(const GaussianFrame& frame,
                                         std::span<const int> subset,
                                         const UnitVector& x,
                                         const UnitVector& y) {
  if (x.dim() != frame.d() || y.dim() != frame.d())
    throw std::invalid_argument("check_sign_consistency: dimension mismatch");
  ConsistencyReport rep;
  rep.ok = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const int idx : subset) {
    if (idx < 0 || idx >= frame.M())
      throw std::invalid_argument(
          "check_sign_consistency: index out of range");
    const double ipx = frame.row_dot(idx, x.coords());
    const double sigma = ipx > 0 ? 1.0 : (ipx == 0.0 ? 1.0 : -1.0);
    const double margin = sigma * frame.row_dot(idx, y.coords());
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (!(margin > 0.0)) rep.ok = false;
  }
  return rep;
}

}  // namespace cellcert
