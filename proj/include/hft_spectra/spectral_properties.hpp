#pragma once

// Parameter scans over beta and the checks run on them: strict decrease of
// beta^2 E_k(beta), negativity of E_k(beta), the Coulomb lower bound, and
// growth of the bound-state count with box size.

#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "detail/parallel.hpp"
#include "errors.hpp"
#include "potential.hpp"
#include "radial_solver.hpp"

namespace hft_spectra {

inline PotentialSpec make_spec(Family family, double beta, double p) {
  PotentialSpec spec{family, beta, p};
  spec.validate();
  return spec;
}

/// beta_from, beta_from + step, ... up to beta_to (inclusive within 1e-9 step).
inline std::vector<double> make_beta_grid(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw PreconditionError("beta step must be positive");
  if (!(from >= 0.0) || !std::isfinite(to) || to < from) {
    throw PreconditionError("beta range must satisfy 0 <= beta_from <= beta_to");
  }
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> betas(count);
  for (std::size_t i = 0; i < count; ++i) betas[i] = from + static_cast<double>(i) * step;
  return betas;
}

/// Levels closer to zero than ten times the lowest free-particle energy of
/// the box, pi^2/(2 r_max^2), are set by the box rather than the potential.
inline double box_limit_threshold(const GridSpec& grid) {
  return 10.0 * std::numbers::pi * std::numbers::pi / (2.0 * grid.r_max * grid.r_max);
}

struct ScanRow {
  double beta = 0.0;
  std::vector<double> energies;       // E_1..E_kmax
  std::vector<double> scaled_values;  // beta^2 E_k
  std::vector<bool> box_limited;
};

struct BetaScan {
  Family family = Family::Screened;
  double p = 1.0;
  int l = 0;
  int k_max = 1;
  GridSpec grid;
  std::vector<ScanRow> rows;
  bool partial = false;
};

/// Thrown when a row fails; carries the rows that completed before the
/// offending beta.
class ScanError : public std::runtime_error {
 public:
  ScanError(const std::string& what, double beta, BetaScan partial)
      : std::runtime_error(what), beta_(beta), partial_(std::move(partial)) {}

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] const BetaScan& partial_scan() const noexcept { return partial_; }

 private:
  double beta_;
  BetaScan partial_;
};

inline ScanRow scan_row(const PotentialSpec& spec, int l, int k_max, const GridSpec& grid) {
  ScanRow row;
  row.beta = spec.beta;
  row.energies = lowest_energies(RadialProblem{spec, l, grid, false}, static_cast<std::size_t>(k_max));
  const double threshold = box_limit_threshold(grid);
  for (double e : row.energies) {
    row.scaled_values.push_back(spec.beta * spec.beta * e);
    row.box_limited.push_back(std::abs(e) < threshold);
  }
  return row;
}

inline BetaScan run_beta_scan(Family family, double p, int l, int k_max,
                              std::span<const double> betas, const GridSpec& grid,
                              std::size_t parallelism = 1) {
  grid.validate();
  if (k_max < 1 || static_cast<std::size_t>(k_max) > grid.n_points) {
    throw PreconditionError("k_max must be in [1, n_points]");
  }
  if (l < 0) throw PreconditionError("angular momentum l must be nonnegative");
  if (betas.empty()) throw PreconditionError("beta grid is empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0)) throw PreconditionError("beta values must be nonnegative");
    if (i > 0 && !(betas[i] > betas[i - 1])) {
      throw PreconditionError("beta values must be strictly increasing");
    }
    make_spec(family, betas[i], p);
  }

  BetaScan scan{family, p, l, k_max, grid, {}, false};
  std::vector<ScanRow> rows(betas.size());
  const auto errors = detail::parallel_for(betas.size(), parallelism, [&](std::size_t i) {
    rows[i] = scan_row(make_spec(family, betas[i], p), l, k_max, grid);
  });
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!errors[i]) {
      scan.rows.push_back(std::move(rows[i]));
      continue;
    }
    scan.partial = true;
    std::string message = "solver failure";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      message = e.what();
    }
    std::ostringstream os;
    os << "scan failed at beta = " << betas[i] << ": " << message;
    throw ScanError(os.str(), betas[i], std::move(scan));
  }
  return scan;
}

struct ScanViolation {
  int k = 0;            // 1-based level
  std::size_t row = 0;  // offending row index
  double beta = 0.0;
  double value = 0.0;
  double previous_value = 0.0;  // monotonicity only
};

struct ScanVerdict {
  bool passed = true;
  std::optional<ScanViolation> violation;

  [[nodiscard]] std::string describe() const {
    if (passed) return "pass";
    std::ostringstream os;
    os.precision(12);
    os << "fail at k=" << violation->k << " row=" << violation->row
       << " beta=" << violation->beta << " value=" << violation->value;
    return os.str();
  }
};

inline constexpr double kMonotoneMargin = 1e-10;

/// Passes iff beta_{j+1}^2 E_k(beta_{j+1}) < beta_j^2 E_k(beta_j) - margin
/// for every level and consecutive pair of rows.
inline ScanVerdict assert_monotone_decrease(const BetaScan& scan, double margin = kMonotoneMargin) {
  if (scan.rows.size() < 2) throw PreconditionError("monotonicity needs at least two rows");
  for (int k = 0; k < scan.k_max; ++k) {
    for (std::size_t j = 1; j < scan.rows.size(); ++j) {
      const double before = scan.rows[j - 1].scaled_values.at(k);
      const double after = scan.rows[j].scaled_values.at(k);
      if (!(after < before - margin)) {
        return {false, ScanViolation{k + 1, j, scan.rows[j].beta, after, before}};
      }
    }
  }
  return {};
}

/// Passes iff every level not flagged box-limited is strictly negative.
inline ScanVerdict assert_negativity(const BetaScan& scan) {
  for (std::size_t j = 0; j < scan.rows.size(); ++j) {
    const auto& row = scan.rows[j];
    for (std::size_t k = 0; k < row.energies.size(); ++k) {
      const bool limited = k < row.box_limited.size() && row.box_limited[k];
      if (!limited && !(row.energies[k] < 0.0)) {
        return {false, ScanViolation{static_cast<int>(k) + 1, j, row.beta, row.energies[k], 0.0}};
      }
    }
  }
  return {};
}

/// E_k(beta) nondecreasing along the scan: the attraction weakens as beta grows.
inline ScanVerdict assert_energy_nondecreasing(const BetaScan& scan, double slack = 1e-12) {
  for (int k = 0; k < scan.k_max; ++k) {
    for (std::size_t j = 1; j < scan.rows.size(); ++j) {
      const double before = scan.rows[j - 1].energies.at(k);
      const double after = scan.rows[j].energies.at(k);
      if (after < before - slack) {
        return {false, ScanViolation{k + 1, j, scan.rows[j].beta, after, before}};
      }
    }
  }
  return {};
}

struct SandwichRow {
  int k = 1;
  int principal = 1;  // n = k + l
  double lower_bound = 0.0;
  double energy = 0.0;  // extrapolated
  double error_estimate = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SandwichTable {
  PotentialSpec spec;
  int l = 0;
  std::vector<SandwichRow> rows;

  [[nodiscard]] bool passed() const {
    for (const auto& r : rows) {
      if (!r.passed) return false;
    }
    return !rows.empty();
  }
};

inline constexpr double kSandwichBaseTolerance = 1e-6;

/// -1/(2(k+l)^2) - tol <= E*_{k,l}(beta) < 0 with E* extrapolated from the
/// ladder {n/2, n} and tol = 1e-6 + the extrapolation error estimate.
inline SandwichTable coulomb_sandwich(const PotentialSpec& spec, int l, int k_max,
                                      const GridSpec& grid) {
  spec.validate();
  grid.validate();
  if (k_max < 1) throw PreconditionError("k_max must be positive");
  const auto ladder = halving_ladder(grid);
  const auto refined =
      refine_by_extrapolation(RadialProblem{spec, l, grid, false}, static_cast<std::size_t>(k_max), ladder);

  SandwichTable table{spec, l, {}};
  for (int k = 1; k <= k_max; ++k) {
    SandwichRow row;
    row.k = k;
    row.principal = k + l;
    row.lower_bound = -0.5 / (static_cast<double>(row.principal) * row.principal);
    row.energy = refined.energies[k - 1];
    row.error_estimate = refined.error_estimates[k - 1];
    row.tolerance = kSandwichBaseTolerance + row.error_estimate;
    row.passed = row.energy >= row.lower_bound - row.tolerance && row.energy < 0.0;
    table.rows.push_back(row);
  }
  return table;
}

struct CountRow {
  double r_max = 0.0;
  std::size_t n_points = 0;
  std::size_t negative_count = 0;
};

struct CountReport {
  PotentialSpec spec;
  int l = 0;
  std::vector<CountRow> rows;

  [[nodiscard]] bool nondecreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].negative_count < rows[i - 1].negative_count) return false;
    }
    return true;
  }
  /// Last box holds strictly more bound levels than the first.
  [[nodiscard]] bool grew() const {
    return rows.size() >= 2 && rows.back().negative_count > rows.front().negative_count;
  }
};

/// Grids with node spacing h on boxes r_max: n = round(r_max/h) - 1.
inline std::vector<GridSpec> fixed_step_ladder(std::span<const double> boxes, double h) {
  if (!(h > 0.0)) throw PreconditionError("grid step must be positive");
  std::vector<GridSpec> ladder;
  for (double r : boxes) {
    const double intervals = std::round(r / h);
    if (intervals < 2.0) throw PreconditionError("box too small for the requested step");
    ladder.push_back(GridSpec{r, static_cast<std::size_t>(intervals) - 1});
  }
  return ladder;
}

inline CountReport count_growth(const PotentialSpec& spec, int l, std::span<const GridSpec> ladder) {
  spec.validate();
  if (ladder.empty()) throw PreconditionError("box ladder is empty");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i].r_max > ladder[i - 1].r_max)) {
      throw PreconditionError("box ladder r_max must be strictly increasing");
    }
    if (std::abs(ladder[i].step() - ladder[0].step()) > 1e-9 * ladder[0].step()) {
      throw PreconditionError("box ladder must keep the grid step fixed");
    }
  }
  CountReport report{spec, l, {}};
  for (const auto& grid : ladder) {
    report.rows.push_back(
        {grid.r_max, grid.n_points, count_negative_levels(RadialProblem{spec, l, grid, false})});
  }
  return report;
}

}  // namespace hft_spectra
