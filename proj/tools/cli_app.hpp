#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 configuration error, 3 computation failure.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hft_spectra/hft_spectra.hpp"
#include "hft_spectra/detail/parallel.hpp"

namespace hft_spectra::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kConfigError = 2,
  kComputationFailure = 3,
};

struct RunConfig {
  std::string command;
  std::string family = "coulomb";
  double beta = 0.0;
  double p = 2.0;
  int l = 0;
  int k_max = 3;
  int k = 1;
  double r_max = 200.0;
  std::size_t n_points = 8000;
  double beta_from = 0.0;
  double beta_to = 2.0;
  double beta_step = 0.1;
  std::optional<double> delta_beta;
  std::vector<double> boxes{50.0, 100.0, 200.0, 400.0};
  double count_step = 0.05;
  double hbar = 1.0;
  double mass = 1.0;
  double strength = 1.0;
  double length_param = 1.0;
  std::string input_path;
  std::string output_path;
  std::string format;
  std::optional<std::size_t> parallelism;

  [[nodiscard]] GridSpec grid() const { return {r_max, n_points}; }
  [[nodiscard]] std::size_t width() const {
    return parallelism.value_or(hft_spectra::detail::default_parallelism());
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline PotentialSpec spec_of(const RunConfig& cfg, double beta) {
  return make_spec(parse_family(cfg.family), beta, cfg.p);
}

inline Json grid_echo(const RunConfig& cfg) {
  Json echo;
  echo["family"] = cfg.family;
  echo["beta"] = json_number(cfg.beta);
  echo["p"] = json_number(cfg.p);
  echo["l"] = cfg.l;
  echo["r_max"] = json_number(cfg.r_max);
  echo["n_points"] = cfg.n_points;
  return echo;
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

inline void validate_common(const RunConfig& cfg) {
  require(cfg.l >= 0, "--l must be nonnegative");
  require(cfg.r_max > 0.0 && std::isfinite(cfg.r_max), "--r-max must be positive");
  require(cfg.n_points >= kMinGridPoints, "--n-points must be at least 16");
  require(cfg.format == "csv" || cfg.format == "json", "--format must be csv or json");
  require(!cfg.parallelism || *cfg.parallelism >= 1, "--parallelism must be positive");
}

struct Produced {
  Artifact artifact;
  int status = kSuccess;
};

inline Produced cmd_solve(const RunConfig& cfg) {
  validate_common(cfg);
  require(cfg.k_max >= 1, "--k-max must be at least 1");
  require(cfg.n_points / 2 >= kMinGridPoints, "--n-points must be at least 32 for extrapolation");
  require(static_cast<std::size_t>(cfg.k_max) <= cfg.n_points / 2, "--k-max exceeds grid size");
  const auto spec = spec_of(cfg, cfg.beta);

  const auto grid = cfg.grid();
  const RadialProblem problem{spec, cfg.l, grid, false};
  const auto count = static_cast<std::size_t>(cfg.k_max);
  const auto refined = refine_by_extrapolation(problem, count, halving_ladder(grid));

  Produced out;
  out.artifact.command = "solve";
  out.artifact.config_echo = grid_echo(cfg);
  out.artifact.config_echo["k_max"] = cfg.k_max;
  out.artifact.table.columns = {"k", "E_k", "E_extrapolated", "error_estimate", "negative"};
  for (std::size_t k = 0; k < count; ++k) {
    out.artifact.table.rows.push_back({static_cast<long long>(k + 1), refined.finest[k],
                                       refined.energies[k], refined.error_estimates[k],
                                       refined.finest[k] < 0.0});
  }
  return out;
}

inline Produced cmd_scan(const RunConfig& cfg, std::ostream& log) {
  validate_common(cfg);
  Produced out;
  if (!cfg.input_path.empty()) {
    std::ifstream in(cfg.input_path);
    require(static_cast<bool>(in), "cannot open --input file '" + cfg.input_path + "'");
    const auto scan = read_scan_json(in);
    require(scan.rows.size() >= 2 && !scan.partial, "stored scan is partial or too short");
    out.artifact = scan_artifact(scan);
  } else {
    require(cfg.k_max >= 1, "--k-max must be at least 1");
    require(static_cast<std::size_t>(cfg.k_max) <= cfg.n_points, "--k-max exceeds grid size");
    require(cfg.beta_step > 0.0, "--beta-step must be positive");
    require(cfg.beta_from >= 0.0, "--beta-from must be nonnegative");
    require(cfg.beta_to >= cfg.beta_from, "empty beta range: --beta-to < --beta-from");
    const auto betas = make_beta_grid(cfg.beta_from, cfg.beta_to, cfg.beta_step);
    require(betas.size() >= 2, "beta range must contain at least two values");
    for (double b : betas) spec_of(cfg, b);

    Json echo = grid_echo(cfg);
    echo.erase("beta");
    echo["k_max"] = cfg.k_max;
    echo["beta_from"] = json_number(cfg.beta_from);
    echo["beta_to"] = json_number(cfg.beta_to);
    echo["beta_step"] = json_number(cfg.beta_step);
    try {
      const auto scan =
          run_beta_scan(parse_family(cfg.family), cfg.p, cfg.l, cfg.k_max, betas, cfg.grid(), cfg.width());
      out.artifact = scan_artifact(scan, echo);
    } catch (const ScanError& e) {
      out.artifact = scan_artifact(e.partial_scan(), echo);
      out.status = kComputationFailure;
      log << "hft_spectra: " << e.what() << '\n';
      return out;
    }
  }
  for (const auto& [name, value] : out.artifact.verdicts) {
    if (value != "pass") out.status = kVerificationFailure;
  }
  return out;
}

inline Produced cmd_hft_check(const RunConfig& cfg) {
  validate_common(cfg);
  require(cfg.beta > 0.0, "--beta must be positive for the finite-difference check");
  require(cfg.k >= 1 && static_cast<std::size_t>(cfg.k) <= cfg.n_points, "--k out of range");
  const auto spec = spec_of(cfg, cfg.beta);
  if (cfg.delta_beta) {
    require(*cfg.delta_beta > 0.0, "--delta-beta must be positive");
    require(*cfg.delta_beta <= cfg.beta / 10.0, "--delta-beta must not exceed beta/10");
  }
  const auto report = cfg.delta_beta ? hft_check(spec, cfg.k, cfg.l, cfg.grid(), *cfg.delta_beta)
                                     : hft_check(spec, cfg.k, cfg.l, cfg.grid());
  const bool pass = report.within(tolerance::kHftRelative) && report.rhs_expect < 0.0;

  Produced out;
  out.artifact.command = "hft-check";
  out.artifact.config_echo = grid_echo(cfg);
  out.artifact.config_echo["k"] = cfg.k;
  out.artifact.table.columns = {"beta",     "k",          "l",           "lhs_fd",   "rhs_expect",
                                "residual", "relative_residual", "delta_beta", "one_sided"};
  out.artifact.table.rows.push_back({report.beta, static_cast<long long>(report.k),
                                     static_cast<long long>(report.l), report.lhs_fd,
                                     report.rhs_expect, report.residual, report.relative_residual(),
                                     report.delta_beta, report.one_sided});
  out.artifact.verdicts.emplace_back("residual", pass ? "pass" : "fail");
  out.status = pass ? kSuccess : kVerificationFailure;
  return out;
}

inline Produced cmd_count(const RunConfig& cfg) {
  require(cfg.l >= 0, "--l must be nonnegative");
  require(cfg.format == "csv" || cfg.format == "json", "--format must be csv or json");
  require(!cfg.boxes.empty(), "--boxes must list at least one box radius");
  require(cfg.count_step > 0.0, "--count-step must be positive");
  for (std::size_t i = 1; i < cfg.boxes.size(); ++i) {
    require(cfg.boxes[i] > cfg.boxes[i - 1], "--boxes must be strictly increasing");
  }
  const auto spec = spec_of(cfg, cfg.beta);
  const auto ladder = fixed_step_ladder(cfg.boxes, cfg.count_step);
  for (const auto& g : ladder) require(g.n_points >= kMinGridPoints, "box too small for --count-step");
  const auto report = count_growth(spec, cfg.l, ladder);

  Produced out;
  out.artifact.command = "count";
  Json echo = grid_echo(cfg);
  echo.erase("r_max");
  echo.erase("n_points");
  echo["count_step"] = json_number(cfg.count_step);
  out.artifact.config_echo = echo;
  out.artifact.table.columns = {"r_max", "n_points", "negative_count"};
  for (const auto& row : report.rows) {
    out.artifact.table.rows.push_back({row.r_max, static_cast<long long>(row.n_points),
                                       static_cast<long long>(row.negative_count)});
  }
  const bool monotone = report.nondecreasing();
  out.artifact.verdicts.emplace_back("nondecreasing", monotone ? "pass" : "fail");
  if (report.rows.size() >= 2) {
    out.artifact.verdicts.emplace_back("grew", report.grew() ? "pass" : "fail");
  }
  const bool grew_ok = report.rows.size() < 2 || report.grew();
  out.status = monotone && grew_ok ? kSuccess : kVerificationFailure;
  return out;
}

inline Produced cmd_units(const RunConfig& cfg) {
  require(cfg.format == "csv" || cfg.format == "json", "--format must be csv or json");
  for (double v : {cfg.hbar, cfg.mass, cfg.strength, cfg.length_param}) {
    require(v > 0.0 && std::isfinite(v), "--hbar, --mass, --strength, --length-param must be positive");
  }
  const auto units = reduce_units({cfg.hbar, cfg.mass, cfg.strength, cfg.length_param});
  Produced out;
  out.artifact.command = "units";
  out.artifact.config_echo["hbar"] = json_number(cfg.hbar);
  out.artifact.config_echo["mass"] = json_number(cfg.mass);
  out.artifact.config_echo["strength"] = json_number(cfg.strength);
  out.artifact.config_echo["length_param"] = json_number(cfg.length_param);
  out.artifact.table.columns = {"beta", "length_unit", "energy_unit"};
  out.artifact.table.rows.push_back({units.beta, units.length_unit, units.energy_unit});
  return out;
}

inline Produced cmd_verify_all(const RunConfig& cfg, std::ostream& log) {
  validate_common(cfg);
  require(cfg.n_points / 2 >= kMinGridPoints, "--n-points must be at least 32 for extrapolation");
  require(cfg.p > 0.0, "--p must be positive");
  VerifyConfig vc;
  vc.grid = cfg.grid();
  vc.truncation_p = cfg.p;
  if (cfg.delta_beta) {
    require(*cfg.delta_beta > 0.0 && *cfg.delta_beta * 4.0 <= 0.01,
            "--delta-beta must be positive and at most 2.5e-3");
    vc.delta_beta = *cfg.delta_beta;
  }
  vc.count_step = cfg.count_step;
  vc.parallelism = cfg.width();
  const auto report = verify_all(vc);
  for (const auto& c : report.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  Produced out;
  out.artifact = verify_artifact(report);
  out.status = report.passed() ? kSuccess : kVerificationFailure;
  return out;
}

}  // namespace detail

/// Parses argv, runs the subcommand, writes the artifact to --output or `out`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound-state spectra of -f(beta/r)/r potentials with Hellmann-Feynman checks",
               "hft_spectra"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::vector<std::string> families{"screened", "truncated", "coulomb"};
  auto add_potential = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "screened | truncated | coulomb")
        ->check(CLI::IsMember(families));
    sub->add_option("--beta", cfg.beta, "dimensionless screening parameter");
    sub->add_option("--p", cfg.p, "truncation exponent (truncated family)");
    sub->add_option("--l", cfg.l, "orbital angular momentum");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--r-max", cfg.r_max, "box radius");
    sub->add_option("--n-points", cfg.n_points, "interior grid nodes");
  };
  auto add_output = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--output", cfg.output_path, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "csv | json")->default_str(default_format);
    sub->add_option("--parallelism", cfg.parallelism,
                    "worker threads (fallback: HFT_SPECTRA_PARALLELISM, then processor count)");
  };

  auto* solve = app.add_subcommand("solve", "lowest levels with extrapolated energies");
  add_potential(solve);
  add_grid(solve);
  add_output(solve, "csv");
  solve->add_option("--k-max", cfg.k_max, "number of levels");

  auto* scan = app.add_subcommand("scan", "beta scan with monotonicity and negativity verdicts");
  add_potential(scan);
  add_grid(scan);
  add_output(scan, "csv");
  scan->add_option("--k-max", cfg.k_max, "number of levels");
  scan->add_option("--beta-from", cfg.beta_from);
  scan->add_option("--beta-to", cfg.beta_to);
  scan->add_option("--beta-step", cfg.beta_step);
  scan->add_option("--input", cfg.input_path, "re-evaluate verdicts of a stored JSON scan");

  auto* hft = app.add_subcommand("hft-check", "finite-difference vs expectation-value check");
  add_potential(hft);
  add_grid(hft);
  add_output(hft, "csv");
  hft->add_option("--k", cfg.k, "level index (1-based)");
  hft->add_option("--delta-beta", cfg.delta_beta, "finite-difference step");

  auto* count = app.add_subcommand("count", "negative-level count over growing boxes");
  add_potential(count);
  add_output(count, "csv");
  count->add_option("--boxes", cfg.boxes, "box radii")->delimiter(',');
  count->add_option("--count-step", cfg.count_step, "fixed grid step across boxes");

  auto* units = app.add_subcommand("units", "reduce dimensionful parameters to beta, L, epsilon");
  add_output(units, "csv");
  units->add_option("--hbar", cfg.hbar);
  units->add_option("--mass", cfg.mass);
  units->add_option("--strength", cfg.strength, "K (truncated) or A (screened)");
  units->add_option("--length-param", cfg.length_param, "r0 (truncated) or B (screened)");

  auto* verify = app.add_subcommand("verify-all", "run the full verification sweep");
  add_grid(verify);
  add_output(verify, "json");
  verify->add_option("--p", cfg.p, "truncation exponent used for the truncated family");
  verify->add_option("--delta-beta", cfg.delta_beta, "finite-difference step");
  verify->add_option("--count-step", cfg.count_step, "grid step of the box ladder");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "hft_spectra: " << e.what() << '\n';
    return kConfigError;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    if (cfg.format.empty()) cfg.format = cfg.command == "verify-all" ? "json" : "csv";
  }

  detail::Produced produced;
  try {
    if (cfg.command == "solve") {
      produced = detail::cmd_solve(cfg);
    } else if (cfg.command == "scan") {
      produced = detail::cmd_scan(cfg, err);
    } else if (cfg.command == "hft-check") {
      produced = detail::cmd_hft_check(cfg);
    } else if (cfg.command == "count") {
      produced = detail::cmd_count(cfg);
    } else if (cfg.command == "units") {
      produced = detail::cmd_units(cfg);
    } else {
      produced = detail::cmd_verify_all(cfg, err);
    }
  } catch (const ConfigError& e) {
    err << "hft_spectra: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "hft_spectra: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "hft_spectra: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "hft_spectra: computation failed: " << e.what() << '\n';
    return kComputationFailure;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path, std::ios::binary);
    if (!file) {
      err << "hft_spectra: cannot open output file '" << cfg.output_path << "'\n";
      return kConfigError;
    }
    sink = &file;
  }
  if (cfg.format == "json") {
    write_json(*sink, produced.artifact);
  } else {
    write_csv(*sink, produced.artifact);
  }
  return produced.status;
}

}  // namespace hft_spectra::cli
