#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cellcert/errors.hpp"
#include "cellcert/lab.hpp"
#include "cellcert/linalg.hpp"
#include "cellcert/rng.hpp"

using namespace cellcert;
using namespace cellcert::lab;

TEST_CASE("expected_band_size: frozen value and limits") {
  CHECK(std::abs(expected_band_size(4, 1024, 0.0187676958561797) - 15.33) <
        0.01);
  CHECK(expected_band_size(4, 1024, 1e-12) < 1e-8);
  CHECK(expected_band_size(4, 1024, 100.0) ==
        doctest::Approx(512.0).epsilon(1e-12));
  CHECK_THROWS_AS(expected_band_size(4, 1024, 0.0), std::invalid_argument);
}

TEST_CASE("truncated_covariance_alpha: exact at zero, MC oracle, monotone") {
  // a = 0: half-normal second moment equals the variance exactly.
  CHECK(truncated_covariance_alpha({0.0, 0.25}) == 0.25);

  CHECK(std::abs(truncated_covariance_alpha({1.0, 1.0}) - 2.5251352762) <
        1e-9);
  CHECK(std::abs(truncated_covariance_alpha({0.1, 1.0 / 16}) -
                 0.0892189042936) < 1e-10);

  // Monte Carlo oracle: mean of g^2 over g ~ N(0, 1/d) conditioned on g > a.
  const double a = 0.5, variance = 0.25;
  RngCursor rng(RngStream{101, 0});
  const double sigma = std::sqrt(variance);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    double g;
    do {
      g = rng.gaussian() * sigma;
    } while (!(g > a));
    sum += g * g;
    sum_sq += g * g * g * g;
  }
  const double mc = sum / n;
  const double se = std::sqrt((sum_sq / n - mc * mc) / n);
  CHECK(std::abs(truncated_covariance_alpha({a, variance}) - mc) <= 4 * se);

  for (double t : {0.01, 0.1, 0.5, 1.0, 2.0})
    CHECK(truncated_covariance_alpha({t, 0.125}) > 0.125);
  // Far-below-threshold truncation barely changes the second moment.
  CHECK(truncated_covariance_alpha({-40.0, 0.125}) ==
        doctest::Approx(0.125).epsilon(1e-12));

  CHECK_THROWS_AS(truncated_covariance_alpha({40.0, 1.0}), OverflowDomain);
}

TEST_CASE("psi2_ratio: endpoints, growth, domain") {
  CHECK(psi2_ratio(0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(psi2_ratio(0.5) - 1.6583) < 1e-3);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double a = 0.5 * i / 100.0;
    const double r = psi2_ratio(a);
    CHECK(r < 2.0);
    if (i > 0) CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(psi2_ratio(-0.01), std::domain_error);
  CHECK_THROWS_AS(psi2_ratio(0.51), std::domain_error);
}

TEST_CASE("subset_size_experiment: row shape, reproducibility, summary") {
  ConstantsConfig cfg;
  SubsetSizeSummary s1, s2;
  const auto rows1 =
      subset_size_experiment(8, 2048, cfg, 40, RngStream{7, 0}, &s1, 1);
  const auto rows2 =
      subset_size_experiment(8, 2048, cfg, 40, RngStream{7, 0}, &s2, 2);
  CHECK(rows1.size() == 40);
  for (std::size_t t = 0; t < rows1.size(); ++t) {
    CHECK(rows1[t].trial_id == static_cast<long>(t));
    CHECK(rows1[t].size_S >= rows1[t].size_V);  // union lower bound
    CHECK(rows1[t].size_S <= rows1[t].size_V + rows1[t].size_W);
    CHECK(rows1[t].size_W == rows2[t].size_W);  // schedule-invariant
    CHECK(rows1[t].size_V == rows2[t].size_V);
  }
  CHECK(s1.mean_W == s2.mean_W);
  CHECK(std::abs(s1.mean_W - s1.expected_W) <= 6 * s1.binomial_se_mean);
}

TEST_CASE("subset_size_experiment: huge tau saturates at M/2") {
  ConstantsConfig cfg;
  cfg.C2 = 1e6;  // tau far beyond every inner product
  SubsetSizeSummary s;
  const auto rows =
      subset_size_experiment(8, 1024, cfg, 1, RngStream{8, 0}, &s, 1);
  const double sd = 3.0 * std::sqrt(1024.0) / 2.0;
  CHECK(std::abs(static_cast<double>(rows[0].size_W) - 512.0) <= sd);
}

TEST_CASE("margin_count_experiment: half split at tiny eta, empty at huge eta") {
  ConstantsConfig cfg;
  MarginCountSummary s;
  margin_count_experiment(8, 2048, cfg, 40, RngStream{9, 0}, &s, 0);
  CHECK(s.mean_ratio > 0.3);
  CHECK(s.mean_ratio < 0.7);
  CHECK(std::abs(s.analytic_ratio - 0.5) < 0.01);

  cfg.C5 = 1e12;  // eta beyond every projected inner product
  const auto rows =
      margin_count_experiment(8, 2048, cfg, 10, RngStream{9, 0}, &s, 0);
  for (const auto& r : rows) CHECK(r.size_Stilde == 0);
}

TEST_CASE("gram_min_singular_experiment: positive spectra, sane sizes") {
  ConstantsConfig cfg;
  GramSummary s;
  const auto rows =
      gram_min_singular_experiment(8, 4096, cfg, 20, RngStream{10, 0}, &s, 0);
  CHECK(rows.size() == 20);
  CHECK(s.degenerate_trials <= 1);
  for (const auto& r : rows) {
    if (r.size_Stilde >= r.d) CHECK(r.sigma_min_sq > 0.0);
    CHECK(r.size_Stilde <= r.size_W);
  }
  CHECK(s.min_ratio > 0.0);
}

TEST_CASE("large-sample Gram spectra approach the smallest Sigma diagonal") {
  // n rows from the truncated law: sigma_min^2 / n tends to lambda_min(Sigma)
  // = 1/d once n is large.
  const int d = 8, n = 10000;
  const double a = 0.05, sigma = std::sqrt(1.0 / d);
  RngCursor rng(RngStream{104, 0});
  Matrix rows(n, d - 1);
  for (int i = 0; i < n; ++i) {
    double g0;
    do {
      g0 = rng.gaussian() * sigma;
    } while (!(g0 > a));
    rows.at(i, 0) = g0;
    for (int j = 1; j < d - 1; ++j) rows.at(i, j) = rng.gaussian() * sigma;
  }
  const double smin = min_singular_value(rows);
  CHECK(smin * smin / n == doctest::Approx(1.0 / d).epsilon(0.10));
}

TEST_CASE("axis-cycling rows give a floor(n/(d-1)) Gram floor") {
  // Orthogonal design sanity for the gram experiment's linear algebra.
  const int dim = 7, n = 23;
  Matrix rows(n, dim);
  for (int i = 0; i < n; ++i) rows.at(i, i % dim) = 1.0;
  const double smin = min_singular_value(rows);
  CHECK(smin * smin == doctest::Approx(std::floor(double(n) / dim)).epsilon(1e-12));
}

TEST_CASE("covariance_concentration_experiment: bound honored, LLN rate") {
  TruncatedGaussianSpec spec{0.1, 0.25};
  CovarianceSummary s;
  const auto rows = covariance_concentration_experiment(
      500, 4, spec, 3.0, 20, RngStream{11, 0}, &s, 0);
  CHECK(rows.size() == 20);
  CHECK(s.violation_fraction == 0.0);
  CHECK(s.smallest_passing_C < 4.0);
  CHECK(s.smallest_passing_C > 0.0);

  // Deviation decays like n^{-1/2}: log-log slope across three decades.
  std::vector<double> ln_n, ln_dev;
  for (const int n : {100, 1000, 10000, 100000}) {
    CovarianceSummary sn;
    const auto trials = covariance_concentration_experiment(
        n, 4, spec, 3.0, 12, RngStream{12, 0}, &sn, 0);
    double mean = 0.0;
    for (const auto& r : trials) mean += r.deviation;
    ln_n.push_back(std::log(n));
    ln_dev.push_back(std::log(mean / trials.size()));
  }
  const auto fit = linear_fit(ln_n, ln_dev);
  CHECK(std::abs(fit.slope + 0.5) <= 0.1);

  CHECK_THROWS_AS(covariance_concentration_experiment(2, 4, spec, 3.0, 5,
                                                      RngStream{13, 0}),
                  std::invalid_argument);
  TruncatedGaussianSpec bad{0.1, 0.5};  // variance must be 1/d
  CHECK_THROWS_AS(covariance_concentration_experiment(100, 4, bad, 3.0, 5,
                                                      RngStream{13, 0}),
                  std::invalid_argument);
}

TEST_CASE("covariance at a=0 reduces to the isotropic case") {
  TruncatedGaussianSpec spec{0.0, 0.25};
  CHECK(truncated_covariance_alpha(spec) == 0.25);
  CovarianceSummary s;
  covariance_concentration_experiment(20000, 4, spec, 3.0, 8,
                                      RngStream{14, 0}, &s, 0);
  // First diagonal estimator now matches plain chi-square concentration:
  // deviations stay an order of magnitude under the bound.
  CHECK(s.violation_fraction == 0.0);
}

TEST_CASE("halfspace_consistency_experiment: no violations at d=8") {
  // C1=4 puts |V| inside the regime where sign consistency pins the
  // hemisphere; at C1=1 the embedding hypothesis fails and violations are
  // routine.
  ConstantsConfig cfg;
  cfg.C1 = 4.0;
  std::vector<HalfspaceTrial> rows;
  const int violations =
      halfspace_consistency_experiment(8, cfg, 25, RngStream{15, 0}, &rows, 0);
  CHECK(violations == 0);
  CHECK(rows.size() == 25);
  for (const auto& r : rows) CHECK(r.inner_product > 0.0);
}

TEST_CASE("halfspace violations appear when V is far too small") {
  ConstantsConfig cfg;
  cfg.C1 = 0.2;  // |V| = round(0.2 * 8 ln 8) = 3 rows: cells span hemispheres
  const int violations =
      halfspace_consistency_experiment(8, cfg, 30, RngStream{15, 5}, nullptr, 0);
  CHECK(violations > 0);
}

TEST_CASE("uniform_radius_experiment: finite ratios, half-band dominates") {
  ConstantsConfig cfg;
  UniformRadiusSummary s;
  const auto rows =
      uniform_radius_experiment(8, 512, cfg, 12, RngStream{16, 0}, &s, 0);
  CHECK(rows.size() == 12);
  CHECK(std::isfinite(s.max_ratio_half_band));
  CHECK(s.max_ratio_half_band > 0.0);
  CHECK(s.max_ratio_half_band >= s.max_ratio_full_set - 1e-9);
  for (const auto& r : rows) CHECK(r.size_Shat <= r.size_W);
}

TEST_CASE("radius_scaling_experiment: grid shape and loose slope") {
  ConstantsConfig cfg;
  ScalingSummary s;
  const std::vector<int> ds{4};
  const std::vector<int> ms{256, 512, 1024};
  const auto rows =
      radius_scaling_experiment(ds, ms, cfg, 10, RngStream{17, 0}, &s, 0);
  CHECK(rows.size() == 30);
  CHECK(s.cells.size() == 3);
  REQUIRE(s.slope_per_d.size() == 1);
  CHECK(s.slope_per_d[0] < -0.4);
  CHECK(s.slope_per_d[0] > -1.6);
  CHECK(s.C3_hat > 0.0);
  CHECK(s.C3_hat <= s.C4_hat);
  CHECK(s.C5_hat > 0.0);
  // Medians decrease across the M column.
  CHECK(s.cells[0].median_radius > s.cells[2].median_radius);
}

TEST_CASE("median and linear_fit") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), std::invalid_argument);

  const std::vector<double> xs{1, 2, 3, 4};
  const std::vector<double> ys{3, 5, 7, 9};  // y = 2x + 1
  const auto fit = linear_fit(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}
