#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cellcert/certifier.hpp"
#include "cellcert/frame.hpp"
#include "cellcert/rng.hpp"
#include "cellcert/subsets.hpp"

namespace cellcert::lab {

/// One Monte Carlo trial's measurements. Fields an experiment does not
/// compute stay zero; the CSV column order is fixed by kTrialCsvHeader.
struct TrialStatistics {
  long trial_id = 0;
  int d = 0;
  int M = 0;
  double tau = 0.0;
  double eta = 0.0;
  long size_V = 0;
  long size_W = 0;
  long size_S = 0;
  long size_Stilde = 0;
  long size_Shat = 0;
  double sigma_min_sq = 0.0;
  double op_norm_deviation = 0.0;
  double theorem_bound = 0.0;
  double certified_radius = 0.0;
};

inline constexpr const char* kTrialCsvHeader =
    "trial_id,d,M,tau,eta,size_V,size_W,size_S,size_Stilde,size_Shat,"
    "sigma_min_sq,op_norm_dev,theorem_bound,certified_radius";

/// Expected negative-band size E|W| = (M/2) erf(tau sqrt(d) / sqrt(2)).
double expected_band_size(int d, int M, double tau);

/// First-coordinate law of a row conditioned on exceeding `threshold`;
/// variance is the ambient 1/d.
struct TruncatedGaussianSpec {
  double threshold = 0.0;
  double variance = 0.0;
};

/// Second moment of N(0, variance) conditioned on exceeding the threshold:
///   alpha = 1/d + sqrt(1/d) a exp(-a^2 d / 2) / (sqrt(2 pi) Q(a sqrt(d))).
/// Throws OverflowDomain once a sqrt(d) > 38 (the tail underflows doubles).
double truncated_covariance_alpha(const TruncatedGaussianSpec& spec);

/// sqrt(2) Q(a / sqrt(2)) / Q(a) on a in [0, 1/2]; stays below 2 there.
double psi2_ratio(double a);

// --- experiments -----------------------------------------------------------

struct SubsetSizeSummary {
  double expected_W = 0.0;
  double mean_W = 0.0;
  double frac_out_s025 = 0.0;
  double frac_out_s050 = 0.0;
  double chernoff_s025 = 0.0;  // 2 exp(-s^2 E/3)
  double chernoff_s050 = 0.0;
  double mean_overlap_VW = 0.0;
  double binomial_se_mean = 0.0;  // std error of mean_W under Binomial(M, p)
};

std::vector<TrialStatistics> subset_size_experiment(
    int d, int M, const ConstantsConfig& cfg, int trials, RngStream stream,
    SubsetSizeSummary* summary = nullptr, int threads = 0);

struct MarginCountSummary {
  double mean_ratio = 0.0;      // mean of |Stilde| / |W|
  double analytic_ratio = 0.0;  // mean of Q(eta sqrt(d) / ||y_[-1]||)
  double eta = 0.0;
};

std::vector<TrialStatistics> margin_count_experiment(
    int d, int M, const ConstantsConfig& cfg, int trials, RngStream stream,
    MarginCountSummary* summary = nullptr, int threads = 0);

struct GramSummary {
  double min_ratio = 0.0;  // min over trials of sigma_min^2 / (ln d ln M)
  // Fitted floor: the 10th-percentile ratio. The raw minimum of ~100 trials
  // is an extreme statistic and swings too hard for cross-M comparisons.
  double q10_ratio = 0.0;
  double mean_ratio = 0.0;
  int degenerate_trials = 0;  // |Stilde| < d, excluded from the ratio
};

std::vector<TrialStatistics> gram_min_singular_experiment(
    int d, int M, const ConstantsConfig& cfg, int trials, RngStream stream,
    GramSummary* summary = nullptr, int threads = 0);

struct CovarianceTrial {
  long trial_id = 0;
  double deviation = 0.0;  // || GtG/n - Sigma ||_op
  double bound = 0.0;      // K^2 max(delta, delta^2), C = 4, K^2 = 4/d
};

struct CovarianceSummary {
  double violation_fraction = 0.0;
  double max_deviation = 0.0;
  double smallest_passing_C = 0.0;  // smallest C making every trial pass
  double tail_bound = 0.0;          // 2 exp(-t^2)
};

std::vector<CovarianceTrial> covariance_concentration_experiment(
    int n, int d, const TruncatedGaussianSpec& spec, double t, int trials,
    RngStream stream, CovarianceSummary* summary = nullptr, int threads = 0);

struct HalfspaceTrial {
  long trial_id = 0;
  double inner_product = 0.0;  // <x, y> at the certified far point
  bool violation = false;
};

/// Returns the number of trials whose far-point witness fell outside the
/// halfspace <x, y> > 0.
int halfspace_consistency_experiment(int d, const ConstantsConfig& cfg,
                                     int trials, RngStream stream,
                                     std::vector<HalfspaceTrial>* rows = nullptr,
                                     int threads = 0);

struct UniformRadiusSummary {
  double max_ratio_half_band = 0.0;  // max over x of radius / bound
  double max_ratio_full_set = 0.0;   // same for S built per the main scheme
};

std::vector<TrialStatistics> uniform_radius_experiment(
    int d, int M, const ConstantsConfig& cfg, int x_count, RngStream stream,
    UniformRadiusSummary* summary = nullptr, int threads = 0);

struct ScalingCell {
  int d = 0;
  int M = 0;
  double median_radius = 0.0;
  double median_size_S = 0.0;
};

struct ScalingSummary {
  std::vector<ScalingCell> cells;
  std::vector<double> slope_per_d;  // ln(median radius) vs ln(M), one per d
  double C3_hat = 0.0;              // min |S| / (d ln d ln M)
  double C4_hat = 0.0;              // max |S| / (d ln d ln M)
  // Fitted radius constant: the 99th-percentile radius/bound ratio with 25%
  // headroom. The raw maximum is kept as a diagnostic; as an extreme
  // statistic it is unstable across seeds.
  double C5_hat = 0.0;
  double C5_max = 0.0;
};

std::vector<TrialStatistics> radius_scaling_experiment(
    std::span<const int> d_list, std::span<const int> M_list,
    const ConstantsConfig& cfg, int trials, RngStream stream,
    ScalingSummary* summary = nullptr, int threads = 0);

// --- small statistics helpers ----------------------------------------------

double median(std::vector<double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace cellcert::lab
