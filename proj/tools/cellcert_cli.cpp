// cellcert command line: frame generation, encode/decode, cell certification,
// combinatorial counts, the exact d=2 oracle, and the experiment harness.
//
// Exit codes: 0 success, 1 experiment assertion failure, 2 usage/config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellcert/codec.hpp"
#include "cellcert/combinatorics.hpp"
#include "cellcert/errors.hpp"
#include "cellcert/harness.hpp"
#include "cellcert/io.hpp"
#include "cellcert/oracle_d2.hpp"
#include "cellcert/parallel.hpp"

namespace {

using namespace cellcert;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

void print_radius(double r) {
  if (std::abs(r - std::round(r)) < 1e-12)
    std::printf("radius %.1f\n", r);
  else
    std::printf("radius %.9g\n", r);
}

// Optional JSON with "constants" and "solver" overrides for the thin
// subcommands (the experiment schema covers the rest).
struct Defaults {
  ConstantsConfig constants;
  SolverOptions solver;
};

Defaults load_defaults(const std::string& config_path) {
  Defaults d;
  if (config_path.empty()) return d;
  std::ifstream in(config_path);
  if (!in)
    throw harness::ConfigError("cannot open config file: " + config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  // Reuse the strict parser on a synthetic experiment wrapper so constants
  // and solver blocks are validated the same way everywhere.
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw harness::ConfigError(std::string("config is not valid JSON: ") +
                               e.what());
  }
  if (!root.is_object())
    throw harness::ConfigError("config must be a JSON object");
  nlohmann::json wrapper{{"experiment", "halfspace"},
                         {"d", 8},
                         {"trials", 1},
                         {"master_seed", 0},
                         {"output_path", "unused.csv"}};
  for (const auto& [key, value] : root.items()) {
    if (key != "constants" && key != "solver")
      throw harness::ConfigError("unknown field \"" + key +
                                 "\" in defaults config");
    wrapper[key] = value;
  }
  const auto parsed = harness::parse_config_text(wrapper.dump());
  d.constants = parsed.constants;
  d.solver = parsed.solver;
  return d;
}

UnitVector resolve_x(const std::string& x_inline, const std::string& x_file,
                     bool random_x, std::uint64_t x_seed, int d) {
  if (!x_inline.empty()) return UnitVector(parse_double_list(x_inline));
  if (!x_file.empty()) return UnitVector(read_vector_file(x_file));
  if (random_x) {
    RngCursor rng(RngStream{x_seed, 0xE57});
    return UnitVector(random_unit(rng, d));
  }
  throw harness::ConfigError("provide --x, --x-file, or --random-x");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellcert: subset-selected cell certification for Gaussian "
               "hyperplane tessellations"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker pool size (default: CELLCERT_THREADS or hardware)");

  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_path;

  // gen-frame
  auto* gen = app.add_subcommand("gen-frame", "generate a Gaussian frame file");
  int gf_d = 0, gf_M = 0;
  gen->add_option("--d", gf_d, "ambient dimension (>= 3)")->required();
  gen->add_option("--M", gf_M, "number of rows (> 2d)")->required();
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--out", out_path, "output .ccf path")->required();
  gen->add_option("--config", config_path, "defaults config (unused here)");

  // encode
  auto* enc = app.add_subcommand("encode", "encode a unit vector");
  int en_d = 0, en_M = 0;
  std::string en_x, en_x_file;
  bool en_random_x = false;
  std::uint64_t en_x_seed = 7;
  enc->add_option("--d", en_d)->required();
  enc->add_option("--M", en_M)->required();
  enc->add_option("--seed", seed, "frame seed (shared randomness)");
  enc->add_option("--x", en_x, "comma-separated coordinates");
  enc->add_option("--x-file", en_x_file, "whitespace-separated coordinates");
  enc->add_flag("--random-x", en_random_x, "draw x uniformly on the sphere");
  enc->add_option("--x-seed", en_x_seed, "seed for --random-x");
  enc->add_option("--out", out_path, "output .cce path")->required();
  enc->add_option("--config", config_path, "constants/solver defaults");

  // decode
  auto* dec = app.add_subcommand("decode", "decode an encoded vector");
  std::string dec_in;
  dec->add_option("--in", dec_in, "input .cce path")->required();
  dec->add_option("--out", out_path, "write decoded coordinates here");
  dec->add_option("--seed", seed, "solver seed");
  dec->add_option("--config", config_path, "constants/solver defaults");

  // certify
  auto* cert = app.add_subcommand("certify", "certify a cell radius");
  std::string ct_frame, ct_subset, ct_x, ct_x_file;
  bool ct_all = false, ct_random_x = false;
  double ct_band = 0.0;
  std::uint64_t ct_x_seed = 7;
  cert->add_option("--frame", ct_frame, "frame .ccf path")->required();
  auto* ct_subset_opt = cert->add_option(
      "--subset", ct_subset, "comma-separated indices (may be empty)");
  cert->add_flag("--all", ct_all, "use every frame row");
  cert->add_option("--band", ct_band, "use the negative band at this tau");
  cert->add_option("--x", ct_x);
  cert->add_option("--x-file", ct_x_file);
  cert->add_flag("--random-x", ct_random_x);
  cert->add_option("--x-seed", ct_x_seed);
  cert->add_option("--seed", seed, "solver seed");
  cert->add_option("--out", out_path, "write witness coordinates here");
  cert->add_option("--config", config_path, "constants/solver defaults");

  // count-cells
  auto* cc = app.add_subcommand("count-cells", "exact spherical cell count");
  int cc_M = 0, cc_d = 0;
  cc->add_option("--M", cc_M)->required();
  cc->add_option("--d", cc_d)->required();
  cc->add_option("--seed", seed);
  cc->add_option("--out", out_path);
  cc->add_option("--config", config_path);

  // oracle-d2
  auto* od = app.add_subcommand("oracle-d2", "exact cell radius on the circle");
  std::string od_angles;
  double od_x = 0.0;
  od->add_option("--angles", od_angles, "normal angles, comma-separated")
      ->required();
  od->add_option("--x-angle", od_x, "query angle")->required();
  od->add_option("--seed", seed);
  od->add_option("--out", out_path);
  od->add_option("--config", config_path);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a harness experiment");
  std::string exp_name;
  int exp_trials = -1;
  exp->add_option("name", exp_name,
                  "subset-size | margin-count | gram-sigma-min | covariance | "
                  "halfspace | uniform-radius | radius-scaling | "
                  "rate-distortion")
      ->required();
  exp->add_option("--config", config_path, "experiment config JSON")
      ->required();
  auto* exp_seed_opt = exp->add_option("--seed", seed, "override master_seed");
  auto* exp_out_opt = exp->add_option("--out", out_path, "override output_path");
  exp->add_option("--trials", exp_trials, "override trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      const auto frame = make_frame(gf_d, gf_M, RngStream{seed, 0});
      io::write_file(out_path, io::serialize_frame(frame));
      std::printf("wrote %s (d=%d, M=%d)\n", out_path.c_str(), gf_d, gf_M);
      return 0;
    }
    if (*enc) {
      const auto defaults = load_defaults(config_path);
      const auto x = resolve_x(en_x, en_x_file, en_random_x, en_x_seed, en_d);
      const auto encoded =
          codec::encode(x, en_d, en_M, defaults.constants, RngStream{seed, 0});
      io::write_file(out_path, codec::serialize(encoded));
      std::printf("wrote %s (k=%d, bits=%ld)\n", out_path.c_str(), encoded.k,
                  encoded.bit_cost());
      return 0;
    }
    if (*dec) {
      const auto defaults = load_defaults(config_path);
      const auto bytes = io::read_file(dec_in);
      const auto encoded = codec::deserialize(bytes);
      SolverOptions opts = defaults.solver;
      if (seed != 1) opts.seed = seed;
      const auto result = codec::decode(encoded, opts);
      std::string coords;
      for (int i = 0; i < result.x_hat.dim(); ++i) {
        coords += io::format_double(result.x_hat[i]);
        coords += i + 1 < result.x_hat.dim() ? ' ' : '\n';
      }
      if (!out_path.empty()) io::write_text(out_path, coords);
      std::printf("%s", coords.c_str());
      print_radius(result.certificate.radius);
      std::printf("converged %d\nresidual %.3g\n",
                  result.certificate.converged ? 1 : 0,
                  result.certificate.residual);
      return 0;
    }
    if (*cert) {
      const auto defaults = load_defaults(config_path);
      const auto frame = io::deserialize_frame(io::read_file(ct_frame));
      const auto x =
          resolve_x(ct_x, ct_x_file, ct_random_x, ct_x_seed, frame.d());
      std::vector<int> subset;
      if (ct_all) {
        subset.resize(static_cast<std::size_t>(frame.M()));
        for (int i = 0; i < frame.M(); ++i)
          subset[static_cast<std::size_t>(i)] = i;
      } else if (ct_band > 0.0) {
        // Negative band at the given tau.
        for (int i = 0; i < frame.M(); ++i) {
          const double ip = frame.row_dot(i, x.coords());
          if (ip > -ct_band && ip < 0.0) subset.push_back(i);
        }
      } else if (ct_subset_opt->count() > 0) {
        subset = parse_int_list(ct_subset);
      } else {
        throw harness::ConfigError(
            "provide --subset (possibly empty), --all, or --band");
      }
      SolverOptions opts = defaults.solver;
      if (seed != 1) opts.seed = seed;
      const auto certificate = cell_radius(frame, subset, x, opts);
      print_radius(certificate.radius);
      std::printf("converged %d\nresidual %.3g\niterations %ld\n",
                  certificate.converged ? 1 : 0, certificate.residual,
                  certificate.iterations);
      if (!out_path.empty()) {
        std::string coords;
        for (int i = 0; i < certificate.witness.dim(); ++i) {
          coords += io::format_double(certificate.witness[i]);
          coords += i + 1 < certificate.witness.dim() ? ' ' : '\n';
        }
        io::write_text(out_path, coords);
      }
      return 0;
    }
    if (*cc) {
      std::printf("%s\n", schlafli_cell_count(cc_M, cc_d).to_string().c_str());
      return 0;
    }
    if (*od) {
      const auto angles = parse_double_list(od_angles);
      const auto arc = exact_cell_d2(angles, od_x);
      std::printf("%.7f\n", arc.radius);
      return 0;
    }
    if (*exp) {
      auto cfg = harness::parse_config_file(config_path);
      if (cfg.experiment != exp_name)
        throw harness::ConfigError("config experiment \"" + cfg.experiment +
                                   "\" does not match subcommand \"" +
                                   exp_name + "\"");
      if (exp_seed_opt->count() > 0) cfg.master_seed = seed;
      if (exp_out_opt->count() > 0) cfg.output_path = out_path;
      if (exp_trials > 0) cfg.trials = exp_trials;
      if (threads > 0) cfg.threads = threads;
      const auto report = harness::run_experiment(cfg);
      for (const auto& a : report.assertions)
        std::printf("%s %s (observed %.6g, limit %.6g)\n",
                    a.pass ? "PASS" : "FAIL", a.name.c_str(), a.observed,
                    a.limit);
      std::printf("csv: %s\nsummary: %s\n", report.csv_path.c_str(),
                  report.summary_path.c_str());
      return report.all_pass ? 0 : 1;
    }
  } catch (const harness::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const CorruptInput& e) {
    std::fprintf(stderr, "corrupt input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
