#include "cellcert/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cellcert/codec.hpp"
#include "cellcert/io.hpp"
#include "cellcert/lab.hpp"

namespace cellcert::harness {
namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {
    "subset-size",   "margin-count",  "gram-sigma-min", "covariance",
    "halfspace",     "uniform-radius", "radius-scaling", "rate-distortion"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key))
      throw ConfigError("unknown field \"" + key + "\" in " + where);
  }
}

int require_int(const json& obj, const std::string& key) {
  if (!obj.contains(key))
    throw ConfigError("missing required field \"" + key + "\"");
  if (!obj[key].is_number_integer())
    throw ConfigError("field \"" + key + "\" must be an integer");
  return obj[key].get<int>();
}

int optional_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError("field \"" + key + "\" must be an integer");
  return obj[key].get<int>();
}

double optional_double(const json& obj, const std::string& key,
                       double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError("field \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

std::vector<int> require_int_list(const json& obj, const std::string& key) {
  if (!obj.contains(key))
    throw ConfigError("missing required field \"" + key + "\"");
  if (!obj[key].is_array())
    throw ConfigError("field \"" + key + "\" must be an array of integers");
  std::vector<int> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number_integer())
      throw ConfigError("field \"" + key + "\" must contain only integers");
    out.push_back(v.get<int>());
  }
  if (out.empty()) throw ConfigError("field \"" + key + "\" must be non-empty");
  return out;
}

std::string summary_path_for(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return csv_path.substr(0, dot) + ".summary.json";
  return csv_path + ".summary.json";
}

json assertion_json(const AssertionResult& a) {
  return json{{"name", a.name},
              {"pass", a.pass},
              {"observed", a.observed},
              {"limit", a.limit}};
}

void push(std::vector<AssertionResult>& out, const std::string& name,
          bool pass, double observed, double limit) {
  out.push_back({name, pass, observed, limit});
}

std::string covariance_csv(const std::vector<lab::CovarianceTrial>& rows) {
  std::string out = "trial_id,deviation,bound\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial_id);
    out += ',';
    out += io::format_double(r.deviation);
    out += ',';
    out += io::format_double(r.bound);
    out += '\n';
  }
  return out;
}

std::string halfspace_csv(const std::vector<lab::HalfspaceTrial>& rows) {
  std::string out = "trial_id,inner_product,violation\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial_id);
    out += ',';
    out += io::format_double(r.inner_product);
    out += ',';
    out += r.violation ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string rate_csv(const std::vector<codec::RateDistortionRow>& rows) {
  std::string out = "M,median_bits,median_error\n";
  for (const auto& r : rows) {
    out += std::to_string(r.M);
    out += ',';
    out += io::format_double(r.median_bits);
    out += ',';
    out += io::format_double(r.median_error);
    out += '\n';
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  if (!root.contains("experiment") || !root["experiment"].is_string())
    throw ConfigError("missing required string field \"experiment\"");
  ExperimentConfig cfg;
  cfg.experiment = root["experiment"].get<std::string>();
  if (!kExperiments.contains(cfg.experiment))
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");

  std::set<std::string> allowed = {"experiment", "master_seed", "constants",
                                   "solver",     "output_path", "threads"};
  const std::string& e = cfg.experiment;
  if (e == "subset-size" || e == "margin-count") {
    allowed.insert({"d", "M", "trials"});
  } else if (e == "gram-sigma-min") {
    allowed.insert({"d", "M", "M_list", "trials"});
  } else if (e == "covariance") {
    allowed.insert({"d", "n", "threshold", "t", "trials"});
  } else if (e == "halfspace") {
    allowed.insert({"d", "trials"});
  } else if (e == "uniform-radius") {
    allowed.insert({"d", "M", "x_count"});
  } else if (e == "radius-scaling") {
    allowed.insert({"d_list", "M_list", "trials"});
  } else if (e == "rate-distortion") {
    allowed.insert({"d", "M_list", "trials"});
  }
  reject_unknown(root, allowed, "config");

  if (!root.contains("master_seed"))
    throw ConfigError("missing required field \"master_seed\"");
  if (!root["master_seed"].is_number_unsigned() &&
      !root["master_seed"].is_number_integer())
    throw ConfigError("field \"master_seed\" must be an integer");
  cfg.master_seed = root["master_seed"].get<std::uint64_t>();

  if (!root.contains("output_path") || !root["output_path"].is_string())
    throw ConfigError("missing required string field \"output_path\"");
  cfg.output_path = root["output_path"].get<std::string>();

  cfg.threads = optional_int(root, "threads", 0);

  if (root.contains("constants")) {
    const json& c = root["constants"];
    if (!c.is_object()) throw ConfigError("\"constants\" must be an object");
    reject_unknown(c, {"C1", "C2", "C3", "C4", "C5"}, "constants");
    cfg.constants.C1 = optional_double(c, "C1", 1.0);
    cfg.constants.C2 = optional_double(c, "C2", 1.0);
    cfg.constants.C3 = optional_double(c, "C3", 1.0);
    cfg.constants.C4 = optional_double(c, "C4", 1.0);
    cfg.constants.C5 = optional_double(c, "C5", 1.0);
    try {
      cfg.constants.validate();
    } catch (const std::exception& ex) {
      throw ConfigError(ex.what());
    }
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    if (!s.is_object()) throw ConfigError("\"solver\" must be an object");
    reject_unknown(s,
                   {"max_iterations", "tolerance", "dykstra_cycles", "step",
                    "min_step", "reflection_starts", "random_starts", "seed"},
                   "solver");
    cfg.solver.max_iterations = optional_int(s, "max_iterations", 50000);
    cfg.solver.tolerance = optional_double(s, "tolerance", 1e-10);
    cfg.solver.dykstra_cycles = optional_int(s, "dykstra_cycles", 1);
    cfg.solver.step = optional_double(s, "step", 0.1);
    cfg.solver.min_step = optional_double(s, "min_step", 1e-5);
    cfg.solver.reflection_starts = optional_int(s, "reflection_starts", 32);
    cfg.solver.random_starts = optional_int(s, "random_starts", 8);
    if (s.contains("seed"))
      cfg.solver.seed = s["seed"].get<std::uint64_t>();
    if (cfg.solver.max_iterations < 1 || !(cfg.solver.tolerance > 0))
      throw ConfigError("solver: max_iterations >= 1 and tolerance > 0");
  }

  if (e == "subset-size" || e == "margin-count") {
    cfg.d = require_int(root, "d");
    cfg.M = require_int(root, "M");
    cfg.trials = require_int(root, "trials");
  } else if (e == "gram-sigma-min") {
    cfg.d = require_int(root, "d");
    if (root.contains("M_list"))
      cfg.M_list = require_int_list(root, "M_list");
    else
      cfg.M_list = {require_int(root, "M")};
    cfg.trials = require_int(root, "trials");
  } else if (e == "covariance") {
    cfg.d = require_int(root, "d");
    cfg.n = require_int(root, "n");
    cfg.threshold = optional_double(root, "threshold", 0.1);
    cfg.t = optional_double(root, "t", 3.0);
    cfg.trials = require_int(root, "trials");
  } else if (e == "halfspace") {
    cfg.d = require_int(root, "d");
    cfg.trials = require_int(root, "trials");
  } else if (e == "uniform-radius") {
    cfg.d = require_int(root, "d");
    cfg.M = require_int(root, "M");
    cfg.x_count = require_int(root, "x_count");
  } else if (e == "radius-scaling") {
    cfg.d_list = require_int_list(root, "d_list");
    cfg.M_list = require_int_list(root, "M_list");
    cfg.trials = require_int(root, "trials");
  } else if (e == "rate-distortion") {
    cfg.d = require_int(root, "d");
    cfg.M_list = require_int_list(root, "M_list");
    cfg.trials = require_int(root, "trials");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const RngStream master{cfg.master_seed, 0};
  RunReport report;
  report.csv_path = cfg.output_path;
  report.summary_path = summary_path_for(cfg.output_path);

  json fitted = json::object();
  std::string csv_text;
  std::vector<AssertionResult>& checks = report.assertions;

  if (cfg.experiment == "subset-size") {
    lab::SubsetSizeSummary s;
    const auto rows = lab::subset_size_experiment(
        cfg.d, cfg.M, cfg.constants, cfg.trials, master, &s, cfg.threads);
    csv_text = io::trial_csv(rows);
    const double dev = std::abs(s.mean_W - s.expected_W);
    push(checks, "mean |W| within 3 binomial standard errors",
         dev <= 3.0 * s.binomial_se_mean, dev, 3.0 * s.binomial_se_mean);
    const auto band_limit = [&](double chernoff) {
      return chernoff +
             3.0 * std::sqrt(std::max(chernoff * (1 - chernoff), 1e-12) /
                             cfg.trials);
    };
    push(checks, "out-of-band fraction (s=0.5) within Chernoff allowance",
         s.frac_out_s050 <= band_limit(s.chernoff_s050), s.frac_out_s050,
         band_limit(s.chernoff_s050));
    push(checks, "out-of-band fraction (s=0.25) within Chernoff allowance",
         s.frac_out_s025 <= band_limit(s.chernoff_s025), s.frac_out_s025,
         band_limit(s.chernoff_s025));
    fitted["expected_W"] = s.expected_W;
    fitted["mean_W"] = s.mean_W;
    fitted["mean_overlap_VW"] = s.mean_overlap_VW;
  } else if (cfg.experiment == "margin-count") {
    lab::MarginCountSummary s;
    const auto rows = lab::margin_count_experiment(
        cfg.d, cfg.M, cfg.constants, cfg.trials, master, &s, cfg.threads);
    csv_text = io::trial_csv(rows);
    const double dev = std::abs(s.mean_ratio - s.analytic_ratio);
    push(checks, "margin ratio concentrates near analytic value", dev <= 0.05,
         dev, 0.05);
    fitted["mean_ratio"] = s.mean_ratio;
    fitted["analytic_ratio"] = s.analytic_ratio;
    fitted["eta"] = s.eta;
  } else if (cfg.experiment == "gram-sigma-min") {
    std::vector<lab::TrialStatistics> all_rows;
    std::vector<double> fits;
    double min_ratio = std::numeric_limits<double>::infinity();
    int degenerate_total = 0;
    for (const int M : cfg.M_list) {
      lab::GramSummary s;
      auto rows = lab::gram_min_singular_experiment(
          cfg.d, M, cfg.constants, cfg.trials, master, &s, cfg.threads);
      all_rows.insert(all_rows.end(), rows.begin(), rows.end());
      fits.push_back(s.q10_ratio);
      min_ratio = std::min(min_ratio, s.min_ratio);
      degenerate_total += s.degenerate_trials;
      fitted["c_hat_M" + std::to_string(M)] = s.q10_ratio;
      fitted["min_ratio_M" + std::to_string(M)] = s.min_ratio;
    }
    csv_text = io::trial_csv(all_rows);
    push(checks, "smallest ratio positive", min_ratio > 0.0, min_ratio, 0.0);
    const double degen_frac =
        static_cast<double>(degenerate_total) /
        (static_cast<double>(cfg.trials) * cfg.M_list.size());
    push(checks, "degenerate trial fraction below 1%", degen_frac < 0.01,
         degen_frac, 0.01);
    if (fits.size() >= 2) {
      double mean = 0.0;
      for (const double f : fits) mean += f;
      mean /= static_cast<double>(fits.size());
      double worst = 0.0;
      for (const double f : fits)
        worst = std::max(worst, std::abs(f / mean - 1.0));
      push(checks, "fitted c stable within 20% across M", worst <= 0.20, worst,
           0.20);
    }
  } else if (cfg.experiment == "covariance") {
    lab::TruncatedGaussianSpec spec{cfg.threshold, 1.0 / cfg.d};
    lab::CovarianceSummary s;
    const auto rows = lab::covariance_concentration_experiment(
        cfg.n, cfg.d, spec, cfg.t, cfg.trials, master, &s, cfg.threads);
    csv_text = covariance_csv(rows);
    const double allowance =
        s.tail_bound + 3.0 * std::sqrt(std::max(s.tail_bound, 1e-12) /
                                       cfg.trials);
    push(checks, "bound violation fraction within the stated tail",
         s.violation_fraction <= allowance, s.violation_fraction, allowance);
    fitted["smallest_passing_C"] = s.smallest_passing_C;
    fitted["max_deviation"] = s.max_deviation;
  } else if (cfg.experiment == "halfspace") {
    std::vector<lab::HalfspaceTrial> rows;
    const int violations = lab::halfspace_consistency_experiment(
        cfg.d, cfg.constants, cfg.trials, master, &rows, cfg.threads);
    csv_text = halfspace_csv(rows);
    push(checks, "no halfspace consistency violations", violations == 0,
         violations, 0.0);
  } else if (cfg.experiment == "uniform-radius") {
    lab::UniformRadiusSummary s;
    const auto rows = lab::uniform_radius_experiment(
        cfg.d, cfg.M, cfg.constants, cfg.x_count, master, &s, cfg.threads);
    csv_text = io::trial_csv(rows);
    push(checks, "max radius/bound ratio finite",
         std::isfinite(s.max_ratio_half_band) && s.max_ratio_half_band > 0,
         s.max_ratio_half_band, 0.0);
    push(checks, "half-band cells are no tighter than full-scheme cells",
         s.max_ratio_half_band >= s.max_ratio_full_set - 1e-9,
         s.max_ratio_half_band - s.max_ratio_full_set, 0.0);
    fitted["max_ratio_half_band"] = s.max_ratio_half_band;
    fitted["max_ratio_full_set"] = s.max_ratio_full_set;
  } else if (cfg.experiment == "radius-scaling") {
    lab::ScalingSummary s;
    const auto rows = lab::radius_scaling_experiment(
        cfg.d_list, cfg.M_list, cfg.constants, cfg.trials, master, &s,
        cfg.threads);
    csv_text = io::trial_csv(rows);
    if (cfg.M_list.size() >= 3) {
      for (std::size_t i = 0; i < s.slope_per_d.size(); ++i) {
        push(checks,
             "radius slope vs M within -1 +- 0.2 (d=" +
                 std::to_string(cfg.d_list[i]) + ")",
             std::abs(s.slope_per_d[i] + 1.0) <= 0.2, s.slope_per_d[i], -1.0);
      }
    }
    push(checks, "fitted C3 positive", s.C3_hat > 0, s.C3_hat, 0.0);
    fitted["C3_hat"] = s.C3_hat;
    fitted["C4_hat"] = s.C4_hat;
    fitted["C5_hat"] = s.C5_hat;
    fitted["C5_max"] = s.C5_max;
    for (std::size_t i = 0; i < s.slope_per_d.size(); ++i)
      fitted["slope_d" + std::to_string(cfg.d_list[i])] = s.slope_per_d[i];
  } else if (cfg.experiment == "rate-distortion") {
    codec::RateDistortionSummary s;
    const auto rows = codec::rate_distortion_experiment(
        cfg.d, cfg.M_list, cfg.constants, cfg.trials, master, &s, cfg.threads);
    csv_text = rate_csv(rows);
    push(checks, "median decode error strictly decreasing in M",
         s.medians_strictly_decreasing, s.medians_strictly_decreasing ? 1 : 0,
         1.0);
    if (cfg.M_list.size() >= 3)
      push(checks, "slope of ln(error) vs ln(M) within -1 +- 0.2",
           std::abs(s.slope_ln_error_vs_ln_M + 1.0) <= 0.2,
           s.slope_ln_error_vs_ln_M, -1.0);
    fitted["slope_ln_error_vs_ln_M"] = s.slope_ln_error_vs_ln_M;
    fitted["slope_ln_error_vs_sqrt_bits"] = s.slope_ln_error_vs_sqrt_bits;
    fitted["r_squared_sqrt_bits"] = s.r_squared_sqrt_bits;
  }

  io::write_text(cfg.output_path, csv_text);

  report.all_pass = true;
  json asserts = json::array();
  for (const auto& a : checks) {
    asserts.push_back(assertion_json(a));
    if (!a.pass) report.all_pass = false;
  }
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  json summary{{"schema", 1},
               {"experiment", cfg.experiment},
               {"master_seed", cfg.master_seed},
               {"constants",
                {{"C1", cfg.constants.C1},
                 {"C2", cfg.constants.C2},
                 {"C3", cfg.constants.C3},
                 {"C4", cfg.constants.C4},
                 {"C5", cfg.constants.C5}}},
               {"fitted", fitted},
               {"assertions", asserts},
               {"pass", report.all_pass},
               {"wall_time_seconds", elapsed}};
  io::write_text(report.summary_path, summary.dump(2) + "\n");
  return report;
}

int run(const std::string& config_path) {
  const auto cfg = parse_config_file(config_path);
  const auto report = run_experiment(cfg);
  return report.all_pass ? 0 : 1;
}

}  // namespace cellcert::harness
