#pragma once

// The full verification sweep behind `verify-all`: every check is computed,
// failures are collected rather than thrown.

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"
#include "potential.hpp"
#include "radial_solver.hpp"
#include "scaling_hft.hpp"
#include "shooting.hpp"
#include "spectral_properties.hpp"

namespace hft_spectra {

struct VerifyConfig {
  GridSpec grid{200.0, 8000};
  double truncation_p = 2.0;
  double delta_beta = 1e-3;
  double count_step = 0.05;
  double shooting_step = 2e-3;
  std::size_t parallelism = 1;
};

/// Thresholds of the verification sweep.
namespace tolerance {
inline constexpr double kHydrogenAbs = 1e-5;
inline constexpr double kHftRelative = 1e-3;
inline constexpr double kHftMinSlope = 1.7;
inline constexpr double kScalingRelative = 1e-4;
inline constexpr double kScalingIdentity = 1e-12;
inline constexpr double kOracleAbs = 1e-5;
}  // namespace tolerance

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
};

namespace detail {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void fail(const std::string& what) {
    if (!passed) detail << "; ";
    else detail.str("");
    passed = false;
    detail << what;
  }
};

inline CheckResult run_check(const std::string& name, const std::function<void(Outcome&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  outcome.detail.precision(6);
  try {
    body(outcome);
  } catch (const std::exception& e) {
    outcome.fail(std::string("error: ") + e.what());
  }
  CheckResult result{name, outcome.passed, outcome.detail.str(), 0.0};
  if (result.detail.empty()) result.detail = outcome.passed ? "ok" : "failed";
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

inline std::vector<PotentialSpec> both_families(double beta, double p) {
  return {PotentialSpec::screened(beta), PotentialSpec::truncated(beta, p)};
}

inline std::string label(const PotentialSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.family);
  if (spec.family == Family::Truncated) os << "(p=" << spec.p << ")";
  os << " beta=" << spec.beta;
  return os.str();
}

}  // namespace detail

inline CheckResult check_hydrogen_baseline(const VerifyConfig& cfg) {
  return detail::run_check("hydrogen_baseline", [&](detail::Outcome& out) {
    const auto refined = refine_by_extrapolation(
        RadialProblem{PotentialSpec::coulomb(), 0, cfg.grid, false}, 3, halving_ladder(cfg.grid));
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const double exact = -0.5 / (k * k);
      const double err = std::abs(refined.energies[k - 1] - exact);
      worst = std::max(worst, err);
      if (err > tolerance::kHydrogenAbs) {
        std::ostringstream os;
        os << "k=" << k << " E*=" << refined.energies[k - 1] << " exact=" << exact;
        out.fail(os.str());
      }
    }
    if (out.passed) out.detail << "max |E* - exact| = " << worst;
  });
}

inline CheckResult check_hft_identity(const VerifyConfig& cfg) {
  return detail::run_check("hft_identity", [&](detail::Outcome& out) {
    double worst_rel = 0.0;
    double worst_slope = 10.0;
    for (double beta : {0.1, 0.5, 1.0}) {
      for (const auto& spec : detail::both_families(beta, cfg.truncation_p)) {
        for (int k = 1; k <= 2; ++k) {
          const auto report = hft_check(spec, k, 0, cfg.grid, cfg.delta_beta);
          const auto order = hft_residual_order(spec, k, 0, cfg.grid, cfg.delta_beta);
          worst_rel = std::max(worst_rel, report.relative_residual());
          worst_slope = std::min(worst_slope, order.slope);
          if (!report.within(tolerance::kHftRelative) || !(report.rhs_expect < 0.0)) {
            std::ostringstream os;
            os << detail::label(spec) << " k=" << k << " relative residual "
               << report.relative_residual();
            out.fail(os.str());
          }
          if (!(order.slope >= tolerance::kHftMinSlope)) {
            std::ostringstream os;
            os << detail::label(spec) << " k=" << k << " residual order " << order.slope;
            out.fail(os.str());
          }
        }
      }
    }
    if (out.passed) {
      out.detail << "max relative residual " << worst_rel << ", min order " << worst_slope;
    }
  });
}

/// Scans for both families, l in {0, 1}, k = 1..5, beta = 0(0.1)2.
inline std::vector<BetaScan> reference_scans(const VerifyConfig& cfg) {
  const auto betas = make_beta_grid(0.0, 2.0, 0.1);
  std::vector<BetaScan> scans;
  for (Family family : {Family::Screened, Family::Truncated}) {
    for (int l : {0, 1}) {
      scans.push_back(run_beta_scan(family, cfg.truncation_p, l, 5, betas, cfg.grid, cfg.parallelism));
    }
  }
  return scans;
}

inline CheckResult check_scans(const std::string& name, const std::vector<BetaScan>& scans,
                               ScanVerdict (*assertion)(const BetaScan&)) {
  return detail::run_check(name, [&](detail::Outcome& out) {
    for (const auto& scan : scans) {
      const auto verdict = assertion(scan);
      if (!verdict.passed) {
        std::ostringstream os;
        os << to_string(scan.family) << " l=" << scan.l << ": " << verdict.describe();
        out.fail(os.str());
      }
    }
    if (out.passed) out.detail << scans.size() << " scans, zero violations";
  });
}

inline CheckResult check_monotone(const std::vector<BetaScan>& scans) {
  return check_scans("monotone_decrease", scans,
                     [](const BetaScan& s) { return assert_monotone_decrease(s); });
}

inline CheckResult check_negativity(const std::vector<BetaScan>& scans) {
  return check_scans("negativity", scans, [](const BetaScan& s) { return assert_negativity(s); });
}

inline CheckResult check_sandwich(const VerifyConfig& cfg) {
  return detail::run_check("coulomb_sandwich", [&](detail::Outcome& out) {
    const auto betas = make_beta_grid(0.0, 2.0, 0.1);
    std::vector<PotentialSpec> specs;
    std::vector<int> ls;
    for (double beta : betas) {
      for (const auto& spec : detail::both_families(beta, cfg.truncation_p)) {
        for (int l : {0, 1}) {
          specs.push_back(spec);
          ls.push_back(l);
        }
      }
    }
    std::vector<SandwichTable> tables(specs.size());
    const auto errors = hft_spectra::detail::parallel_for(specs.size(), cfg.parallelism, [&](std::size_t i) {
      tables[i] = coulomb_sandwich(specs[i], ls[i], 5, cfg.grid);
    });
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      for (const auto& row : tables[i].rows) {
        if (!row.passed) {
          std::ostringstream os;
          os << detail::label(specs[i]) << " l=" << ls[i] << " k=" << row.k << " E*=" << row.energy
             << " bound=" << row.lower_bound;
          out.fail(os.str());
        }
      }
    }
    if (out.passed) out.detail << tables.size() << " (family, beta, l) cases within bounds";
  });
}

inline CheckResult check_scaling(const VerifyConfig& cfg) {
  return detail::run_check("scaling_consistency", [&](detail::Outcome& out) {
    double worst = 0.0;
    for (double beta : {0.5, 1.0, 2.0}) {
      for (const auto& spec : detail::both_families(beta, cfg.truncation_p)) {
        for (int k = 1; k <= 2; ++k) {
          const double mismatch = scaling_consistency(spec, k, 0, cfg.grid);
          const double limit = beta == 1.0 ? tolerance::kScalingIdentity : tolerance::kScalingRelative;
          worst = std::max(worst, mismatch);
          if (!(mismatch <= limit)) {
            std::ostringstream os;
            os << detail::label(spec) << " k=" << k << " mismatch " << mismatch;
            out.fail(os.str());
          }
        }
      }
    }
    if (out.passed) out.detail << "max relative mismatch " << worst;
  });
}

inline CheckResult check_count_growth(const VerifyConfig& cfg) {
  return detail::run_check("count_growth", [&](detail::Outcome& out) {
    const std::vector<double> boxes{50.0, 100.0, 200.0, 400.0};
    const auto ladder = fixed_step_ladder(boxes, cfg.count_step);
    for (double beta : {0.0, 0.5, 1.0}) {
      for (const auto& spec : detail::both_families(beta, cfg.truncation_p)) {
        const auto report = count_growth(spec, 0, ladder);
        if (!report.nondecreasing() || !report.grew()) {
          std::ostringstream os;
          os << detail::label(spec) << " counts";
          for (const auto& row : report.rows) os << ' ' << row.negative_count;
          out.fail(os.str());
        }
      }
    }
    if (out.passed) out.detail << "counts nondecreasing and growing on every ladder";
  });
}

inline CheckResult check_oracle_equivalence(const VerifyConfig& cfg) {
  return detail::run_check("oracle_equivalence", [&](detail::Outcome& out) {
    double worst = 0.0;
    for (const auto& spec : {PotentialSpec::screened(0.5), PotentialSpec::truncated(1.0, 2.0)}) {
      const auto refined = refine_by_extrapolation(RadialProblem{spec, 0, cfg.grid, false}, 1,
                                                   halving_ladder(cfg.grid));
      const double shot =
          shooting_eigenvalue(spec, 0, 1, ShootingOptions{cfg.grid.r_max, cfg.shooting_step});
      const double diff = std::abs(refined.energies[0] - shot);
      worst = std::max(worst, diff);
      if (!(diff <= tolerance::kOracleAbs)) {
        std::ostringstream os;
        os << detail::label(spec) << " E*=" << refined.energies[0] << " shooting=" << shot;
        out.fail(os.str());
      }
    }
    if (out.passed) out.detail << "max |E* - shooting| = " << worst;
  });
}

inline VerifyReport verify_all(const VerifyConfig& cfg) {
  VerifyReport report{cfg, {}};
  report.checks.push_back(check_hydrogen_baseline(cfg));
  report.checks.push_back(check_hft_identity(cfg));
  std::vector<BetaScan> scans;
  std::string scan_error;
  try {
    scans = reference_scans(cfg);
  } catch (const std::exception& e) {
    scan_error = e.what();
  }
  if (scan_error.empty()) {
    report.checks.push_back(check_monotone(scans));
    report.checks.push_back(check_negativity(scans));
  } else {
    report.checks.push_back({"monotone_decrease", false, "error: " + scan_error, 0.0});
    report.checks.push_back({"negativity", false, "error: " + scan_error, 0.0});
  }
  report.checks.push_back(check_sandwich(cfg));
  report.checks.push_back(check_scaling(cfg));
  report.checks.push_back(check_count_growth(cfg));
  report.checks.push_back(check_oracle_equivalence(cfg));
  return report;
}

inline Artifact verify_artifact(const VerifyReport& report) {
  Artifact a;
  a.command = "verify-all";
  a.config_echo["r_max"] = json_number(report.config.grid.r_max);
  a.config_echo["n_points"] = report.config.grid.n_points;
  a.config_echo["p"] = json_number(report.config.truncation_p);
  a.config_echo["delta_beta"] = json_number(report.config.delta_beta);
  a.config_echo["count_step"] = json_number(report.config.count_step);
  a.table.columns = {"check", "passed", "detail"};
  for (const auto& c : report.checks) {
    a.table.rows.push_back({c.name, c.passed, c.detail});
    a.verdicts.emplace_back(c.name, c.passed ? "pass" : "fail");
  }
  a.verdicts.emplace_back("overall", report.passed() ? "pass" : "fail");
  return a;
}

}  // namespace hft_spectra
