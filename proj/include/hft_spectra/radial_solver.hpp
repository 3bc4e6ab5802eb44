#pragma once

// Radial reduction of H = -1/2 Laplacian + V(r) on a Dirichlet box [0, r_max],
// discretized with the 3-point stencil on a uniform grid:
//
//   -1/2 u'' + [V(r) + l(l+1)/(2 r^2)] u = E u,   u(0) = u(r_max) = 0.
//
// Nodes r_i = i h, i = 1..n, h = r_max/(n + 1). The origin is never evaluated.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "potential.hpp"
#include "tridiagonal.hpp"

namespace hft_spectra {

inline constexpr std::size_t kMinGridPoints = 16;

struct GridSpec {
  double r_max = 200.0;
  std::size_t n_points = 8000;

  [[nodiscard]] double step() const { return r_max / static_cast<double>(n_points + 1); }
  /// Radius of zero-based node i, i.e. (i + 1) h.
  [[nodiscard]] double node(std::size_t i) const { return static_cast<double>(i + 1) * step(); }

  void validate() const {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) {
      throw PreconditionError("grid r_max must be finite and positive");
    }
    if (n_points < kMinGridPoints) {
      throw PreconditionError("grid needs at least " + std::to_string(kMinGridPoints) +
                              " interior points");
    }
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RadialProblem {
  PotentialSpec spec;
  int l = 0;
  GridSpec grid;
  bool use_scaled_form = false;  // false: H(beta); true: beta^2 H(beta) in scaled coordinates

  void validate() const {
    spec.validate();
    if (l < 0) throw PreconditionError("angular momentum l must be nonnegative");
    grid.validate();
  }
};

/// W(r) = V(r) + l(l+1)/(2 r^2), with V the plain or scaled potential.
inline double effective_potential(const RadialProblem& problem, double r) {
  const double v = problem.use_scaled_form ? scaled_potential_value(problem.spec, r)
                                           : potential_value(problem.spec, r);
  const double ll = static_cast<double>(problem.l) * static_cast<double>(problem.l + 1);
  return v + ll / (2.0 * r * r);
}

/// Assembles d_i = 1/h^2 + W(r_i), e_i = -1/(2 h^2).
///
/// Only requires n_points >= 1 so that hand-sized problems can be built;
/// the eigen-solvers enforce the full grid invariant.
inline SymmetricTridiagonal<double> build_tridiagonal(const RadialProblem& problem) {
  problem.spec.validate();
  if (problem.l < 0) throw PreconditionError("angular momentum l must be nonnegative");
  const GridSpec& grid = problem.grid;
  if (!(grid.r_max > 0.0) || !std::isfinite(grid.r_max) || grid.n_points == 0) {
    throw PreconditionError("grid must have positive r_max and at least one node");
  }
  const double h = grid.step();
  const double kinetic_diag = 1.0 / (h * h);
  const double kinetic_off = -0.5 / (h * h);

  SymmetricTridiagonal<double> t;
  t.diagonal.resize(grid.n_points);
  t.off_diagonal.assign(grid.n_points - 1, kinetic_off);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double r = grid.node(i);
    const double w = effective_potential(problem, r);
    if (!std::isfinite(w)) {
      throw OverflowError("effective potential is not finite at r = " + std::to_string(r));
    }
    t.diagonal[i] = kinetic_diag + w;
  }
  if (!std::isfinite(kinetic_diag)) throw OverflowError("grid step too small");
  return t;
}

struct EigenResult {
  std::vector<double> energies;
  std::vector<std::vector<double>> eigenfunctions;  // u_k at the grid nodes, sum u^2 h = 1
  GridSpec grid;
  std::size_t negative_count = 0;  // among the returned energies
};

/// Sum of u_i^2 h over the nodes.
inline double quadrature_norm(std::span<const double> u, const GridSpec& grid) {
  double sum = 0.0;
  for (double v : u) sum += v * v;
  return sum * grid.step();
}

/// Number of sign changes of u, ignoring entries below `rel_floor` * max|u|
/// (deep tails carry no reliable sign information).
inline std::size_t count_sign_changes(std::span<const double> u, double rel_floor = 1e-10) {
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  const double floor = rel_floor * peak;
  std::size_t changes = 0;
  int last_sign = 0;
  for (double v : u) {
    if (std::abs(v) <= floor) continue;
    const int sign = v > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

namespace detail {

// Normalize to sum u^2 h = 1 with the first significant entry positive.
inline void normalize_eigenfunction(std::vector<double>& u, const GridSpec& grid) {
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  if (peak == 0.0 || !std::isfinite(peak)) {
    throw OverflowError("eigenvector iteration produced a degenerate vector");
  }
  for (double& v : u) v /= peak;
  const double scale = 1.0 / std::sqrt(quadrature_norm(u, grid));
  double sign = 1.0;
  for (double v : u) {
    if (std::abs(v) > 1e-12) {
      sign = v > 0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& v : u) v *= sign * scale;
}

}  // namespace detail

/// The `count` lowest eigenvalues only; no eigenvectors.
inline std::vector<double> lowest_energies(const RadialProblem& problem, std::size_t count) {
  problem.validate();
  if (count == 0 || count > problem.grid.n_points) {
    throw PreconditionError("eigenvalue count must be in [1, n_points]");
  }
  return lowest_eigenvalues(build_tridiagonal(problem), count);
}

inline EigenResult lowest_eigenpairs(const RadialProblem& problem, std::size_t count) {
  problem.validate();
  if (count == 0 || count > problem.grid.n_points) {
    throw PreconditionError("eigenvalue count must be in [1, n_points]");
  }
  const auto t = build_tridiagonal(problem);

  EigenResult result;
  result.grid = problem.grid;
  result.energies = lowest_eigenvalues(t, count);
  result.eigenfunctions.reserve(count);
  for (double e : result.energies) {
    auto u = twisted_eigenvector(t, e);
    detail::normalize_eigenfunction(u, problem.grid);
    result.eigenfunctions.push_back(std::move(u));
    if (e < 0.0) ++result.negative_count;
  }
  return result;
}

/// Total number of negative eigenvalues of the discretized operator.
inline std::size_t count_negative_levels(const RadialProblem& problem) {
  problem.validate();
  return sturm_count(build_tridiagonal(problem), 0.0);
}

struct Extrapolation {
  std::vector<double> energies;         // E_k* from the h^2 fit
  std::vector<double> error_estimates;  // |E_k* - E_k(finest)|
  std::vector<double> finest;           // raw energies on the finest grid
};

/// Eliminates the O(h^2) error using the two finest grids of the ladder:
/// E* = E_f + (E_f - E_c) h_f^2 / (h_c^2 - h_f^2).
inline Extrapolation refine_by_extrapolation(const RadialProblem& problem, std::size_t count,
                                             std::span<const GridSpec> ladder) {
  if (ladder.size() < 2) {
    throw InconsistentLadderError("extrapolation ladder needs at least two grids");
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i].r_max != ladder[0].r_max) {
      throw InconsistentLadderError("all grids of an extrapolation ladder must share r_max");
    }
    if (!(ladder[i].step() < ladder[i - 1].step())) {
      throw InconsistentLadderError("ladder grid steps must be strictly decreasing");
    }
  }
  const GridSpec& coarse = ladder[ladder.size() - 2];
  const GridSpec& fine = ladder.back();

  RadialProblem p = problem;
  p.grid = coarse;
  const auto e_coarse = lowest_energies(p, count);
  p.grid = fine;
  const auto e_fine = lowest_energies(p, count);

  const double hc2 = coarse.step() * coarse.step();
  const double hf2 = fine.step() * fine.step();
  Extrapolation out;
  out.finest = e_fine;
  for (std::size_t k = 0; k < count; ++k) {
    const double extrapolated = e_fine[k] + (e_fine[k] - e_coarse[k]) * hf2 / (hc2 - hf2);
    out.energies.push_back(extrapolated);
    out.error_estimates.push_back(std::abs(extrapolated - e_fine[k]));
  }
  return out;
}

/// Two-rung ladder {n/2, n} on the grid's box.
inline std::vector<GridSpec> halving_ladder(const GridSpec& finest) {
  return {GridSpec{finest.r_max, finest.n_points / 2}, finest};
}

/// Quadrature sum_i u_i^2 g(r_i) h.
template <class Fn>
double expectation_value(std::span<const double> u, const GridSpec& grid, Fn&& g) {
  if (u.size() != grid.n_points) {
    throw PreconditionError("eigenfunction length does not match the grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double value = g(grid.node(i));
    if (!std::isfinite(value)) {
      throw DomainError("observable is not finite at r = " + std::to_string(grid.node(i)));
    }
    sum += u[i] * u[i] * value;
  }
  return sum * grid.step();
}

}  // namespace hft_spectra
