#include "cellcert/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cellcert/errors.hpp"
#include "cellcert/linalg.hpp"
#include "cellcert/parallel.hpp"
#include "cellcert/special.hpp"

namespace cellcert::lab {
namespace {

// Stream derivation salts; every experiment keys its trials off
// master -> kind -> d -> M -> trial so runs are content-addressed.
enum StreamSalt : std::uint64_t {
  kSaltFrame = 0xF0A31,
  kSaltVSel = 0xB5E1,
  kSaltY = 0x1D0E,
  kSaltX = 0xAC5E,
  kSaltRows = 0x90D5,
  kSaltSubsetSize = 0x51,
  kSaltMargin = 0x52,
  kSaltGram = 0x53,
  kSaltCovariance = 0x54,
  kSaltHalfspace = 0x55,
  kSaltUniform = 0x56,
  kSaltScaling = 0x57,
};

RngStream trial_stream(RngStream master, std::uint64_t kind, int d, int M,
                       long trial) {
  return master.derive(kind)
      .derive(static_cast<std::uint64_t>(d))
      .derive(static_cast<std::uint64_t>(M))
      .derive(static_cast<std::uint64_t>(trial));
}

// Unit vector with the first coordinate dropped; resampled until the
// projection keeps enough mass (||y_[-1]||^2 >= 1/M^2).
std::vector<double> sample_y_with_tail(RngCursor& rng, int d, int M,
                                       double* tail_norm) {
  for (;;) {
    const auto y = random_unit(rng, d);
    double sq = 0.0;
    for (int j = 1; j < d; ++j) sq += y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    if (sq >= 1.0 / (static_cast<double>(M) * M)) {
      if (tail_norm) *tail_norm = std::sqrt(sq);
      return y;
    }
  }
}

// Householder reflector sending direction u (unit) to e_1, applied to v.
void reflect_to_e1(std::span<const double> u_unit, std::span<double> v) {
  const int n = static_cast<int>(u_unit.size());
  std::vector<double> h(u_unit.begin(), u_unit.end());
  h[0] -= 1.0;
  double hsq = 0.0;
  for (const double c : h) hsq += c * c;
  if (hsq < 1e-24) return;  // already aligned
  double hv = 0.0;
  for (int i = 0; i < n; ++i) hv += h[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  const double coef = 2.0 * hv / hsq;
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= coef * h[static_cast<std::size_t>(i)];
}

double ln(double x) { return std::log(x); }

}  // namespace

double expected_band_size(int d, int M, double tau) {
  if (!(tau > 0.0))
    throw std::invalid_argument("expected_band_size: tau must be > 0");
  return 0.5 * M * cellcert::erf(tau * std::sqrt(static_cast<double>(d)) /
                                 std::numbers::sqrt2);
}

double truncated_covariance_alpha(const TruncatedGaussianSpec& spec) {
  if (!(spec.variance > 0.0) || !std::isfinite(spec.variance))
    throw std::invalid_argument("truncated_covariance_alpha: bad variance");
  if (!std::isfinite(spec.threshold))
    throw std::invalid_argument("truncated_covariance_alpha: bad threshold");
  const double a = spec.threshold;
  const double inv_d = spec.variance;
  const double sqrt_d = 1.0 / std::sqrt(inv_d);
  const double t = a * sqrt_d;  // standardized threshold
  if (t > 38.0)
    throw OverflowDomain(
        "truncated_covariance_alpha: tail underflows for a sqrt(d) > 38");
  // E[g^2 | g > a] = var (1 + t phi(t)/Q(t)) = var + (a/sqrt(d)) phi(t)/Q(t).
  return inv_d + a * std::sqrt(inv_d) * gauss_hazard(t);
}

double psi2_ratio(double a) {
  if (!(a >= 0.0 && a <= 0.5))
    throw std::domain_error("psi2_ratio: a must lie in [0, 1/2]");
  return std::numbers::sqrt2 * gauss_tail(a / std::numbers::sqrt2) /
         gauss_tail(a);
}

std::vector<TrialStatistics> subset_size_experiment(
    int d, int M, const ConstantsConfig& cfg, int trials, RngStream stream,
    SubsetSizeSummary* summary, int threads) {
  if (trials < 1)
    throw std::invalid_argument("subset_size_experiment: trials must be >= 1");
  const double tau = tau_of(d, M, cfg);
  const UnitVector x = UnitVector::axis(d, 0);
  std::vector<TrialStatistics> rows(static_cast<std::size_t>(trials));
  std::vector<int> overlap(static_cast<std::size_t>(trials));

  parallel_for_index(trials, threads, [&](long t) {
    const RngStream ts = trial_stream(stream, kSaltSubsetSize, d, M, t);
    const auto frame = make_frame(d, M, ts.derive(kSaltFrame));
    const auto sel = select_subsets(frame, x, tau, cfg, ts.derive(kSaltVSel));
    TrialStatistics& row = rows[static_cast<std::size_t>(t)];
    row.trial_id = t;
    row.d = d;
    row.M = M;
    row.tau = tau;
    row.size_V = static_cast<long>(sel.V.size());
    row.size_W = static_cast<long>(sel.W.size());
    row.size_S = static_cast<long>(sel.S.size());
    row.theorem_bound = theorem_radius_bound(d, M, cfg);
    overlap[static_cast<std::size_t>(t)] = sel.overlap_count();
  });

  if (summary) {
    const double expected = expected_band_size(d, M, tau);
    const double p = expected / M;
    double mean = 0.0, mean_overlap = 0.0;
    int out025 = 0, out050 = 0;
    for (long t = 0; t < trials; ++t) {
      const double w = static_cast<double>(rows[static_cast<std::size_t>(t)].size_W);
      mean += w;
      mean_overlap += overlap[static_cast<std::size_t>(t)];
      if (std::abs(w - expected) >= 0.25 * expected) ++out025;
      if (std::abs(w - expected) >= 0.50 * expected) ++out050;
    }
    summary->expected_W = expected;
    summary->mean_W = mean / trials;
    summary->mean_overlap_VW = mean_overlap / trials;
    summary->frac_out_s025 = static_cast<double>(out025) / trials;
    summary->frac_out_s050 = static_cast<double>(out050) / trials;
    summary->chernoff_s025 = 2.0 * std::exp(-0.25 * 0.25 * expected / 3.0);
    summary->chernoff_s050 = 2.0 * std::exp(-0.50 * 0.50 * expected / 3.0);
    summary->binomial_se_mean = std::sqrt(M * p * (1.0 - p) / trials);
  }
  return rows;
}

std::vector<TrialStatistics> margin_count_experiment(
    int d, int M, const ConstantsConfig& cfg, int trials, RngStream stream,
    MarginCountSummary* summary, int threads) {
  if (trials < 1)
    throw std::invalid_argument("margin_count_experiment: trials must be >= 1");
  const double tau = tau_of(d, M, cfg);
  const double eta = cfg.C5 * std::log(M) / (static_cast<double>(M) * M);
  const UnitVector x = UnitVector::axis(d, 0);
  std::vector<TrialStatistics> rows(static_cast<std::size_t>(trials));
  std::vector<double> ratio(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> analytic(static_cast<std::size_t>(trials), 0.0);

  parallel_for_index(trials, threads, [&](long t) {
    const RngStream ts = trial_stream(stream, kSaltMargin, d, M, t);
    const auto frame = make_frame(d, M, ts.derive(kSaltFrame));
    const auto sel = select_subsets(frame, x, tau, cfg, ts.derive(kSaltVSel));
    RngCursor yrng(ts.derive(kSaltY));
    double tail_norm = 0.0;
    const auto y = sample_y_with_tail(yrng, d, M, &tail_norm);

    long count = 0;
    for (const int i : sel.W) {
      const auto row = frame.row(i);
      double ip = 0.0;
      for (int j = 1; j < d; ++j)
        ip += row[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
      if (ip > eta) ++count;
    }
    TrialStatistics& row = rows[static_cast<std::size_t>(t)];
    row.trial_id = t;
    row.d = d;
    row.M = M;
    row.tau = tau;
    row.eta = eta;
    row.size_V = static_cast<long>(sel.V.size());
    row.size_W = static_cast<long>(sel.W.size());
    row.size_S = static_cast<long>(sel.S.size());
    row.size_Stilde = count;
    if (!sel.W.empty())
      ratio[static_cast<std::size_t>(t)] =
          static_cast<double>(count) / static_cast<double>(sel.W.size());
    // <g_[-1], y_[-1]> ~ N(0, ||y_[-1]||^2 / d); P(> eta) = Q(eta sqrt(d)/||.||).
    analytic[static_cast<std::size_t>(t)] =
        gauss_tail(eta * std::sqrt(static_cast<double>(d)) / tail_norm);
  });

  if (summary) {
    double mr = 0.0, ma = 0.0;
    for (long t = 0; t < trials; ++t) {
      mr += ratio[static_cast<std::size_t>(t)];
      ma += analytic[static_cast<std::size_t>(t)];
    }
    summary->mean_ratio = mr / trials;
    summary->analytic_ratio = ma / trials;
    summary->eta = eta;
  }
  return rows;
}

std::vector<TrialStatistics> gram_min_singular_experiment(
    int d, int M, const ConstantsConfig& cfg, int trials, RngStream stream,
    GramSummary* summary, int threads) {
  if (trials < 1)
    throw std::invalid_argument(
        "gram_min_singular_experiment: trials must be >= 1");
  const double tau = tau_of(d, M, cfg);
  const double eta = cfg.C5 * std::log(M) / (static_cast<double>(M) * M);
  const UnitVector x = UnitVector::axis(d, 0);
  std::vector<TrialStatistics> rows(static_cast<std::size_t>(trials));
  std::vector<char> degenerate(static_cast<std::size_t>(trials), 0);

  parallel_for_index(trials, threads, [&](long t) {
    const RngStream ts = trial_stream(stream, kSaltGram, d, M, t);
    const auto frame = make_frame(d, M, ts.derive(kSaltFrame));
    const auto sel = select_subsets(frame, x, tau, cfg, ts.derive(kSaltVSel));
    RngCursor yrng(ts.derive(kSaltY));
    double tail_norm = 0.0;
    const auto y = sample_y_with_tail(yrng, d, M, &tail_norm);

    // Projected tail direction, normalized, in R^{d-1}.
    std::vector<double> y_tail(static_cast<std::size_t>(d - 1));
    for (int j = 1; j < d; ++j)
      y_tail[static_cast<std::size_t>(j - 1)] =
          y[static_cast<std::size_t>(j)] / tail_norm;

    std::vector<int> stilde;
    for (const int i : sel.W) {
      const auto row = frame.row(i);
      double ip = 0.0;
      for (int j = 1; j < d; ++j)
        ip += row[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
      if (ip > eta) stilde.push_back(i);
    }

    TrialStatistics& row = rows[static_cast<std::size_t>(t)];
    row.trial_id = t;
    row.d = d;
    row.M = M;
    row.tau = tau;
    row.eta = eta;
    row.size_V = static_cast<long>(sel.V.size());
    row.size_W = static_cast<long>(sel.W.size());
    row.size_S = static_cast<long>(sel.S.size());
    row.size_Stilde = static_cast<long>(stilde.size());

    if (static_cast<int>(stilde.size()) < d) {
      degenerate[static_cast<std::size_t>(t)] = 1;
      return;
    }
    // Rows g_[-1] rotated so the margin direction becomes the first
    // coordinate (the truncated one); singular values are unaffected.
    Matrix gtilde(static_cast<int>(stilde.size()), d - 1);
    for (std::size_t r = 0; r < stilde.size(); ++r) {
      const auto row_r = frame.row(stilde[r]);
      std::vector<double> v(static_cast<std::size_t>(d - 1));
      for (int j = 1; j < d; ++j)
        v[static_cast<std::size_t>(j - 1)] = row_r[static_cast<std::size_t>(j)];
      reflect_to_e1(y_tail, v);
      for (int j = 0; j < d - 1; ++j)
        gtilde.at(static_cast<int>(r), j) = v[static_cast<std::size_t>(j)];
    }
    const double smin = min_singular_value(gtilde);
    row.sigma_min_sq = smin * smin;
  });

  if (summary) {
    const double denom = ln(d) * ln(M);
    std::vector<double> ratios;
    double mean_ratio = 0.0;
    int degen = 0;
    for (long t = 0; t < trials; ++t) {
      if (degenerate[static_cast<std::size_t>(t)]) {
        ++degen;
        continue;
      }
      const double r = rows[static_cast<std::size_t>(t)].sigma_min_sq / denom;
      ratios.push_back(r);
      mean_ratio += r;
    }
    summary->degenerate_trials = degen;
    if (ratios.empty()) {
      summary->min_ratio = 0.0;
      summary->q10_ratio = 0.0;
      summary->mean_ratio = 0.0;
    } else {
      std::sort(ratios.begin(), ratios.end());
      summary->min_ratio = ratios.front();
      summary->q10_ratio =
          ratios[static_cast<std::size_t>(0.10 * (ratios.size() - 1))];
      summary->mean_ratio = mean_ratio / static_cast<double>(ratios.size());
    }
  }
  return rows;
}

std::vector<CovarianceTrial> covariance_concentration_experiment(
    int n, int d, const TruncatedGaussianSpec& spec, double t, int trials,
    RngStream stream, CovarianceSummary* summary, int threads) {
  if (trials < 1)
    throw std::invalid_argument(
        "covariance_concentration_experiment: trials must be >= 1");
  if (n < d)
    throw std::invalid_argument(
        "covariance_concentration_experiment: requires n >= d");
  if (!(t > 0.0))
    throw std::invalid_argument(
        "covariance_concentration_experiment: t must be > 0");
  const int dim = d - 1;  // rows live in the projected space
  if (dim < 1)
    throw std::invalid_argument(
        "covariance_concentration_experiment: d must be >= 2");
  const double variance = spec.variance;
  if (std::abs(variance - 1.0 / d) > 1e-12)
    throw std::invalid_argument(
        "covariance_concentration_experiment: spec variance must be 1/d");
  const double alpha = truncated_covariance_alpha(spec);
  const double sigma = std::sqrt(variance);
  const double a = spec.threshold;

  const double base = std::sqrt(static_cast<double>(dim) / n) + t / std::sqrt(n);
  const double k_sq = 4.0 / d;
  const double delta = 4.0 * base;
  const double bound = k_sq * std::max(delta, delta * delta);

  std::vector<CovarianceTrial> rows(static_cast<std::size_t>(trials));
  parallel_for_index(trials, threads, [&](long trial) {
    const RngStream ts = trial_stream(stream, kSaltCovariance, d, n, trial);
    RngCursor rng(ts.derive(kSaltRows));

    // Accumulate G^T G directly; rows are never materialized.
    Matrix gram(dim, dim);
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (int r = 0; r < n; ++r) {
      // First coordinate: N(0, 1/d) conditioned on exceeding the threshold.
      double g0;
      do {
        g0 = rng.gaussian() * sigma;
      } while (!(g0 > a));
      row[0] = g0;
      for (int j = 1; j < dim; ++j) row[static_cast<std::size_t>(j)] = rng.gaussian() * sigma;
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
          gram.at(i, j) += row[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < i; ++j) gram.at(i, j) = gram.at(j, i);

    Matrix dev(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double sigma_ij = 0.0;
        if (i == j) sigma_ij = i == 0 ? alpha : variance;
        dev.at(i, j) = gram.at(i, j) / n - sigma_ij;
      }
    rows[static_cast<std::size_t>(trial)] = {
        trial, operator_norm(dev), bound};
  });

  if (summary) {
    int violations = 0;
    double max_dev = 0.0;
    double worst_c = 0.0;
    for (const auto& r : rows) {
      if (r.deviation > r.bound) ++violations;
      max_dev = std::max(max_dev, r.deviation);
      // Smallest C with deviation <= K^2 max(C base, (C base)^2).
      const double c_linear = r.deviation / (k_sq * base);
      const double c_quad = std::sqrt(r.deviation / k_sq) / base;
      const double c_trial =
          c_linear * base <= 1.0 ? c_linear : std::max(c_quad, 1.0 / base);
      worst_c = std::max(worst_c, c_trial);
    }
    summary->violation_fraction = static_cast<double>(violations) / trials;
    summary->max_deviation = max_dev;
    summary->smallest_passing_C = worst_c;
    summary->tail_bound = 2.0 * std::exp(-t * t);
  }
  return rows;
}

int halfspace_consistency_experiment(int d, const ConstantsConfig& cfg,
                                     int trials, RngStream stream,
                                     std::vector<HalfspaceTrial>* rows,
                                     int threads) {
  if (trials < 1)
    throw std::invalid_argument(
        "halfspace_consistency_experiment: trials must be >= 1");
  if (d < 3)
    throw std::invalid_argument(
        "halfspace_consistency_experiment: d must be >= 3");
  cfg.validate();
  const int v_size = static_cast<int>(
      std::floor(cfg.C1 * d * std::log(static_cast<double>(d)) + 0.5));
  std::vector<HalfspaceTrial> local(static_cast<std::size_t>(trials));

  parallel_for_index(trials, threads, [&](long t) {
    const RngStream ts = trial_stream(stream, kSaltHalfspace, d, v_size, t);
    // |V| Gaussian rows; built directly since |V| can be below the 2d gate.
    auto entries =
        gaussian(ts.derive(kSaltRows), static_cast<std::size_t>(v_size) * d,
                 1.0 / d);
    const auto frame = GaussianFrame::from_rows(
        Matrix(v_size, d, std::move(entries)), ts.derive(kSaltRows));
    RngCursor xrng(ts.derive(kSaltX));
    const UnitVector x(random_unit(xrng, d));

    std::vector<int> all(static_cast<std::size_t>(v_size));
    for (int i = 0; i < v_size; ++i) all[static_cast<std::size_t>(i)] = i;
    const auto cert = cell_radius(frame, all, x);
    const double ip = dot(x, cert.witness);
    local[static_cast<std::size_t>(t)] = {t, ip, !(ip > 0.0)};
  });

  int violations = 0;
  for (const auto& r : local)
    if (r.violation) ++violations;
  if (rows) *rows = std::move(local);
  return violations;
}

std::vector<TrialStatistics> uniform_radius_experiment(
    int d, int M, const ConstantsConfig& cfg, int x_count, RngStream stream,
    UniformRadiusSummary* summary, int threads) {
  if (x_count < 1)
    throw std::invalid_argument(
        "uniform_radius_experiment: x_count must be >= 1");
  const double tau = tau_of(d, M, cfg);
  const double bound = theorem_radius_bound(d, M, cfg);
  // One frame and one V for the whole experiment; only x varies.
  const RngStream base = stream.derive(kSaltUniform)
                             .derive(static_cast<std::uint64_t>(d))
                             .derive(static_cast<std::uint64_t>(M));
  const auto frame = make_frame(d, M, base.derive(kSaltFrame));
  const RngStream v_stream = base.derive(kSaltVSel);

  std::vector<TrialStatistics> rows(static_cast<std::size_t>(x_count));
  std::vector<double> ratio_half(static_cast<std::size_t>(x_count), 0.0);
  std::vector<double> ratio_full(static_cast<std::size_t>(x_count), 0.0);

  parallel_for_index(x_count, threads, [&](long t) {
    RngCursor xrng(base.derive(kSaltX).derive(static_cast<std::uint64_t>(t)));
    const UnitVector x(random_unit(xrng, d));
    const auto sel = select_subsets(frame, x, tau, cfg, v_stream);
    const auto half = select_half_band(frame, x, tau);

    const auto cert_full = cell_radius(frame, sel, x);
    SolverOptions warm;
    warm.extra_starts.push_back(std::vector<double>(
        cert_full.witness.coords().begin(), cert_full.witness.coords().end()));
    const auto cert_half = cell_radius(frame, half, x, warm);

    TrialStatistics& row = rows[static_cast<std::size_t>(t)];
    row.trial_id = t;
    row.d = d;
    row.M = M;
    row.tau = tau;
    row.size_V = static_cast<long>(sel.V.size());
    row.size_W = static_cast<long>(sel.W.size());
    row.size_S = static_cast<long>(sel.S.size());
    row.size_Shat = static_cast<long>(half.S.size());
    row.theorem_bound = bound;
    row.certified_radius = cert_half.radius;
    ratio_half[static_cast<std::size_t>(t)] = cert_half.radius / bound;
    ratio_full[static_cast<std::size_t>(t)] = cert_full.radius / bound;
  });

  if (summary) {
    summary->max_ratio_half_band =
        *std::max_element(ratio_half.begin(), ratio_half.end());
    summary->max_ratio_full_set =
        *std::max_element(ratio_full.begin(), ratio_full.end());
  }
  return rows;
}

std::vector<TrialStatistics> radius_scaling_experiment(
    std::span<const int> d_list, std::span<const int> M_list,
    const ConstantsConfig& cfg, int trials, RngStream stream,
    ScalingSummary* summary, int threads) {
  if (trials < 1)
    throw std::invalid_argument(
        "radius_scaling_experiment: trials must be >= 1");
  if (d_list.empty() || M_list.empty())
    throw std::invalid_argument("radius_scaling_experiment: empty grid");

  const long cells = static_cast<long>(d_list.size() * M_list.size());
  const long total = cells * trials;
  std::vector<TrialStatistics> rows(static_cast<std::size_t>(total));

  parallel_for_index(total, threads, [&](long task) {
    const long cell = task / trials;
    const long t = task % trials;
    const int d = d_list[static_cast<std::size_t>(cell) / M_list.size()];
    const int M = M_list[static_cast<std::size_t>(cell) % M_list.size()];
    const double tau = tau_of(d, M, cfg);
    const UnitVector x = UnitVector::axis(d, 0);

    const RngStream ts = trial_stream(stream, kSaltScaling, d, M, t);
    const auto frame = make_frame(d, M, ts.derive(kSaltFrame));
    const auto sel = select_subsets(frame, x, tau, cfg, ts.derive(kSaltVSel));
    const auto cert = cell_radius(frame, sel, x);

    TrialStatistics& row = rows[static_cast<std::size_t>(task)];
    row.trial_id = t;
    row.d = d;
    row.M = M;
    row.tau = tau;
    row.size_V = static_cast<long>(sel.V.size());
    row.size_W = static_cast<long>(sel.W.size());
    row.size_S = static_cast<long>(sel.S.size());
    row.theorem_bound = theorem_radius_bound(d, M, cfg);
    row.certified_radius = cert.radius;
  });

  if (summary) {
    summary->cells.clear();
    summary->slope_per_d.clear();
    double c3 = std::numeric_limits<double>::infinity();
    double c4 = 0.0;
    std::vector<double> ratios;
    ratios.reserve(rows.size());
    for (const auto& row : rows) {
      const double scale = row.d * ln(row.d) * ln(row.M);
      c3 = std::min(c3, row.size_S / scale);
      c4 = std::max(c4, row.size_S / scale);
      ratios.push_back(row.certified_radius / row.theorem_bound);
    }
    summary->C3_hat = c3;
    summary->C4_hat = c4;
    std::sort(ratios.begin(), ratios.end());
    const double q99 =
        ratios[static_cast<std::size_t>(0.99 * (ratios.size() - 1))];
    summary->C5_hat = 1.25 * q99 * cfg.C5;  // bound was evaluated with cfg.C5
    summary->C5_max = ratios.back() * cfg.C5;

    for (std::size_t di = 0; di < d_list.size(); ++di) {
      std::vector<double> lnM, lnR;
      for (std::size_t mi = 0; mi < M_list.size(); ++mi) {
        std::vector<double> radii;
        std::vector<double> sizes;
        const long cell = static_cast<long>(di * M_list.size() + mi);
        for (long t = 0; t < trials; ++t) {
          const auto& row = rows[static_cast<std::size_t>(cell * trials + t)];
          radii.push_back(row.certified_radius);
          sizes.push_back(static_cast<double>(row.size_S));
        }
        ScalingCell sc;
        sc.d = d_list[di];
        sc.M = M_list[mi];
        sc.median_radius = median(radii);
        sc.median_size_S = median(sizes);
        summary->cells.push_back(sc);
        lnM.push_back(ln(sc.M));
        lnR.push_back(ln(sc.median_radius));
      }
      if (lnM.size() >= 2)
        summary->slope_per_d.push_back(linear_fit(lnM, lnR).slope);
    }
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  LinearFit fit;
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fit;
}

}  // namespace cellcert::lab
