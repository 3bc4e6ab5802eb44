#pragma once

// The coordinate change r -> beta r turns beta^2 H(beta) into
//   -1/2 Laplacian - beta f(1/r)/r,
// which is linear in beta, so d(beta^2 E)/d beta = -<f(1/r)/r> in the
// eigenstate of the scaled operator. Both sides are computed here
// independently: a finite difference of scaled eigenvalues, and a
// quadrature of the scaled eigenfunction.

#include <cmath>
#include <cstddef>
#include <future>
#include <vector>

#include "errors.hpp"
#include "potential.hpp"
#include "radial_solver.hpp"

namespace hft_spectra {

namespace detail {

inline void require_level(int k, const GridSpec& grid) {
  if (k < 1 || static_cast<std::size_t>(k) > grid.n_points) {
    throw PreconditionError("level index k must be in [1, n_points]");
  }
}

inline RadialProblem scaled_problem(const PotentialSpec& spec, int l, const GridSpec& grid) {
  return RadialProblem{spec, l, grid, true};
}

}  // namespace detail

/// k-th (1-based) eigenvalue of the scaled Hamiltonian, i.e. beta^2 E_k(beta).
inline double scaled_eigenvalue(const PotentialSpec& spec, int k, int l, const GridSpec& grid) {
  detail::require_level(k, grid);
  const auto energies =
      lowest_energies(detail::scaled_problem(spec, l, grid), static_cast<std::size_t>(k));
  return energies.back();
}

/// Relative mismatch |beta^2 E_k(beta) - E~_k(beta)| / |E~_k(beta)|.
///
/// The unscaled solve runs on the image of the scaled box under r = beta s:
/// r_max -> beta r_max with the same number of nodes.
inline double scaling_consistency(const PotentialSpec& spec, int k, int l, const GridSpec& grid) {
  spec.validate();
  if (!(spec.beta > 0.0)) throw PreconditionError("scaling consistency requires beta > 0");
  detail::require_level(k, grid);

  const double scaled = scaled_eigenvalue(spec, k, l, grid);
  if (std::abs(scaled) <= 1e-14) {
    throw DomainError("scaled eigenvalue too close to zero for a relative comparison");
  }
  const GridSpec image{grid.r_max * spec.beta, grid.n_points};
  const RadialProblem unscaled{spec, l, image, false};
  const double energy = lowest_energies(unscaled, static_cast<std::size_t>(k)).back();
  const double beta2 = spec.beta * spec.beta;
  return std::abs(beta2 * energy - scaled) / std::abs(scaled);
}

struct HftReport {
  double beta = 0.0;
  int k = 1;
  int l = 0;
  double lhs_fd = 0.0;      // finite difference of the scaled eigenvalue in beta
  double rhs_expect = 0.0;  // -<f(1/r)/r> in the scaled eigenstate at beta
  double residual = 0.0;
  double delta_beta = 0.0;
  bool one_sided = false;  // forward difference was used

  [[nodiscard]] double relative_residual() const {
    return rhs_expect != 0.0 ? residual / std::abs(rhs_expect) : residual;
  }
  [[nodiscard]] bool within(double relative_tolerance) const {
    return residual <= relative_tolerance * std::abs(rhs_expect);
  }
};

namespace detail {

inline HftReport hft_evaluate(const PotentialSpec& spec, int k, int l, const GridSpec& grid,
                              double delta, bool one_sided) {
  const auto level = static_cast<std::size_t>(k);
  const double beta = spec.beta;
  const double lower_beta = one_sided ? beta : beta - delta;

  auto shifted = [&](double b) {
    return lowest_energies(scaled_problem(spec.with_beta(b), l, grid), level).back();
  };
  auto upper_future = std::async(std::launch::async, shifted, beta + delta);
  std::future<double> lower_future;
  if (!one_sided) lower_future = std::async(std::launch::async, shifted, lower_beta);

  const auto centre = lowest_eigenpairs(scaled_problem(spec, l, grid), level);
  const double upper = upper_future.get();
  const double lower = one_sided ? centre.energies.back() : lower_future.get();

  HftReport report;
  report.beta = beta;
  report.k = k;
  report.l = l;
  report.delta_beta = delta;
  report.one_sided = one_sided;
  report.lhs_fd = (upper - lower) / (one_sided ? delta : 2.0 * delta);
  report.rhs_expect = -expectation_value(centre.eigenfunctions.back(), grid, [&](double r) {
    return f_value(spec, 1.0 / r) / r;
  });
  report.residual = std::abs(report.lhs_fd - report.rhs_expect);
  return report;
}

}  // namespace detail

/// Central-difference check with an explicit step; requires delta <= beta/10.
inline HftReport hft_check(const PotentialSpec& spec, int k, int l, const GridSpec& grid,
                           double delta_beta) {
  spec.validate();
  grid.validate();
  detail::require_level(k, grid);
  if (!(delta_beta > 0.0) || !std::isfinite(delta_beta)) {
    throw PreconditionError("delta_beta must be positive");
  }
  if (delta_beta > spec.beta / 10.0) {
    throw StepTooLargeError("delta_beta must not exceed beta/10");
  }
  return detail::hft_evaluate(spec, k, l, grid, delta_beta, false);
}

inline double default_delta_beta(double beta) { return 1e-3 * std::max(beta, 1.0); }

/// Check with the default step 1e-3 max(beta, 1). Falls back to a flagged
/// forward difference when beta <= 10 delta.
inline HftReport hft_check(const PotentialSpec& spec, int k, int l, const GridSpec& grid) {
  spec.validate();
  grid.validate();
  detail::require_level(k, grid);
  const double delta = default_delta_beta(spec.beta);
  return detail::hft_evaluate(spec, k, l, grid, delta, spec.beta <= 10.0 * delta);
}

struct ResidualOrder {
  std::vector<double> deltas;     // 4 delta, 2 delta, delta
  std::vector<double> residuals;
  double slope = 0.0;             // least-squares slope of log residual vs log delta
};

/// Residuals on the halving ladder {4 delta, 2 delta, delta}; a second-order
/// difference gives a log-log slope near 2.
inline ResidualOrder hft_residual_order(const PotentialSpec& spec, int k, int l,
                                        const GridSpec& grid, double delta_beta) {
  ResidualOrder out;
  for (double factor : {4.0, 2.0, 1.0}) {
    const auto report = hft_check(spec, k, l, grid, factor * delta_beta);
    out.deltas.push_back(report.delta_beta);
    out.residuals.push_back(report.residual);
  }
  double mx = 0, my = 0;
  const double count = static_cast<double>(out.deltas.size());
  for (std::size_t i = 0; i < out.deltas.size(); ++i) {
    mx += std::log(out.deltas[i]);
    my += std::log(std::max(out.residuals[i], 1e-300));
  }
  mx /= count;
  my /= count;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < out.deltas.size(); ++i) {
    const double dx = std::log(out.deltas[i]) - mx;
    sxy += dx * (std::log(std::max(out.residuals[i], 1e-300)) - my);
    sxx += dx * dx;
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace hft_spectra
