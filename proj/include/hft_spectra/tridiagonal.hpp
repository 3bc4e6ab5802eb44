#pragma once

// Selective eigen-decomposition of a real symmetric tridiagonal matrix:
// eigenvalues by bisection on the Sturm sequence count, eigenvectors by one
// step of inverse iteration started from the best-conditioned unit vector
// (twisted factorization).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hft_spectra {

template <std::floating_point Real>
struct SymmetricTridiagonal {
  std::vector<Real> diagonal;      // size n
  std::vector<Real> off_diagonal;  // size n - 1; entry i couples rows i and i + 1

  [[nodiscard]] std::size_t size() const noexcept { return diagonal.size(); }
};

namespace detail {

template <std::floating_point Real>
Real pivot_floor(const SymmetricTridiagonal<Real>& t) {
  Real max_e2 = 1;
  for (Real e : t.off_diagonal) max_e2 = std::max(max_e2, e * e);
  return std::numeric_limits<Real>::min() * max_e2;
}

template <std::floating_point Real>
Real guard_pivot(Real pivot, Real pivmin) {
  return std::abs(pivot) < pivmin ? -pivmin : pivot;
}

}  // namespace detail

/// Gerschgorin interval enclosing the whole spectrum.
template <std::floating_point Real>
std::pair<Real, Real> gerschgorin_bounds(const SymmetricTridiagonal<Real>& t) {
  const std::size_t n = t.size();
  Real lo = std::numeric_limits<Real>::max();
  Real hi = std::numeric_limits<Real>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    Real radius = 0;
    if (i > 0) radius += std::abs(t.off_diagonal[i - 1]);
    if (i + 1 < n) radius += std::abs(t.off_diagonal[i]);
    lo = std::min(lo, t.diagonal[i] - radius);
    hi = std::max(hi, t.diagonal[i] + radius);
  }
  return {lo, hi};
}

/// Number of eigenvalues strictly below `x`: the count of negative pivots in
/// the LDL^T factorization of T - xI. Tiny pivots are replaced by -pivmin,
/// which keeps the count monotone in x.
template <std::floating_point Real>
std::size_t sturm_count(const SymmetricTridiagonal<Real>& t, Real x) {
  if (t.size() == 0) return 0;
  const Real pivmin = detail::pivot_floor(t);
  std::size_t count = 0;
  Real pivot = detail::guard_pivot(t.diagonal[0] - x, pivmin);
  if (pivot < 0) ++count;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const Real e = t.off_diagonal[i - 1];
    pivot = detail::guard_pivot((t.diagonal[i] - x) - e * e / pivot, pivmin);
    if (pivot < 0) ++count;
  }
  return count;
}

/// The `index`-th smallest eigenvalue (zero-based) by bisection inside
/// [lower, upper], which must bracket it. Iterates until the bracket cannot
/// be halved in floating point or is below a few ulps.
template <std::floating_point Real>
Real bisect_eigenvalue(const SymmetricTridiagonal<Real>& t, std::size_t index, Real lower,
                       Real upper, int max_iterations = 400) {
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  for (int it = 0; it < max_iterations; ++it) {
    const Real width = upper - lower;
    const Real scale = std::max(std::abs(lower), std::abs(upper));
    if (width <= 2 * eps * scale + std::numeric_limits<Real>::min()) {
      return lower + width / 2;
    }
    const Real mid = lower + width / 2;
    if (mid <= lower || mid >= upper) return mid;
    if (sturm_count(t, mid) > index) {
      upper = mid;
    } else {
      lower = mid;
    }
  }
  throw ConvergenceError(index, "bisection did not converge for eigenvalue index " +
                                    std::to_string(index));
}

/// The `count` algebraically smallest eigenvalues in increasing order.
///
/// Throws ConvergenceError naming the first eigenvalue that failed to
/// converge, or the second of any pair that coincides to within
/// `coincidence_tol` * max(1, |lambda|); the spectrum of an irreducible
/// tridiagonal matrix is simple, so a coincident pair signals a failure.
template <std::floating_point Real>
std::vector<Real> lowest_eigenvalues(const SymmetricTridiagonal<Real>& t, std::size_t count,
                                     Real coincidence_tol = Real(1e-12)) {
  if (count == 0 || count > t.size()) {
    throw PreconditionError("requested eigenvalue count must be in [1, n]");
  }
  auto [lo, hi] = gerschgorin_bounds(t);
  const Real pad = std::numeric_limits<Real>::epsilon() * std::max(std::abs(lo), std::abs(hi)) * 4 +
                   std::numeric_limits<Real>::min();
  lo -= pad;
  hi += pad;

  std::vector<Real> values;
  values.reserve(count);
  Real lower = lo;
  for (std::size_t k = 0; k < count; ++k) {
    // Eigenvalue k lies above every eigenvalue already found.
    const Real value = bisect_eigenvalue(t, k, lower, hi);
    if (!std::isfinite(value)) {
      throw ConvergenceError(k, "non-finite eigenvalue at index " + std::to_string(k));
    }
    if (k > 0 && value - values.back() <= coincidence_tol * std::max<Real>(1, std::abs(value))) {
      throw ConvergenceError(k, "eigenvalues " + std::to_string(k - 1) + " and " +
                                    std::to_string(k) + " coincide");
    }
    values.push_back(value);
    lower = std::max(lower, values.back() - 4 * std::numeric_limits<Real>::epsilon() *
                                                 std::max<Real>(1, std::abs(value)));
  }
  return values;
}

/// Eigenvector for an accurate eigenvalue approximation `lambda`.
///
/// Solves (T - lambda I) x = gamma_r e_r, where r minimizes |gamma_r| over
/// the twisted factorizations of T - lambda I. This is one inverse-iteration
/// step from the starting vector e_r; the recurrences run outward from r, so
/// decaying tails are computed with small relative error. The result is not
/// normalized.
template <std::floating_point Real>
std::vector<Real> twisted_eigenvector(const SymmetricTridiagonal<Real>& t, Real lambda) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  if (n == 1) return {Real(1)};
  const Real pivmin = detail::pivot_floor(t);

  std::vector<Real> forward(n);   // pivots of the top-down LDL^T
  std::vector<Real> backward(n);  // pivots of the bottom-up UDU^T
  forward[0] = detail::guard_pivot(t.diagonal[0] - lambda, pivmin);
  for (std::size_t i = 1; i < n; ++i) {
    const Real e = t.off_diagonal[i - 1];
    forward[i] = detail::guard_pivot((t.diagonal[i] - lambda) - e * e / forward[i - 1], pivmin);
  }
  backward[n - 1] = detail::guard_pivot(t.diagonal[n - 1] - lambda, pivmin);
  for (std::size_t i = n - 1; i-- > 0;) {
    const Real e = t.off_diagonal[i];
    backward[i] = detail::guard_pivot((t.diagonal[i] - lambda) - e * e / backward[i + 1], pivmin);
  }

  std::size_t twist = 0;
  Real best = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Real gamma = forward[i] + backward[i] - (t.diagonal[i] - lambda);
    if (std::abs(gamma) < best) {
      best = std::abs(gamma);
      twist = i;
    }
  }

  std::vector<Real> x(n, Real(0));
  x[twist] = 1;
  for (std::size_t i = twist; i-- > 0;) {
    x[i] = -t.off_diagonal[i] * x[i + 1] / forward[i];
  }
  for (std::size_t i = twist + 1; i < n; ++i) {
    x[i] = -t.off_diagonal[i - 1] * x[i - 1] / backward[i];
  }
  return x;
}

}  // namespace hft_spectra
