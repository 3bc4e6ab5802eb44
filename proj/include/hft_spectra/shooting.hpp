#pragma once

// Numerov shooting solver for the same radial Dirichlet-box problem. It
// shares no code with the tridiagonal path beyond the potential itself and
// serves as an independent cross-check of the finite-difference spectrum.
//
// A level is bracketed by counting nodes of the outward solution, then
// refined by bisection on the sign of the Wronskian between the outward
// solution (regular at r = 0) and the inward one (vanishing at r_max),
// matched at the outermost classical turning point.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "potential.hpp"

namespace hft_spectra {

struct ShootingOptions {
  double r_max = 200.0;
  double step = 2e-3;
  bool use_scaled_form = false;
  double energy_tolerance = 1e-13;
};

class NumerovShooter {
 public:
  NumerovShooter(const PotentialSpec& spec, int l, const ShootingOptions& options)
      : l_(l), options_(options) {
    spec.validate();
    if (l < 0) throw PreconditionError("angular momentum l must be nonnegative");
    if (!(options.r_max > 0.0) || !(options.step > 0.0) || options.step >= options.r_max / 8) {
      throw PreconditionError("shooting grid must have positive r_max and a small step");
    }
    intervals_ = static_cast<std::size_t>(std::llround(options.r_max / options.step));
    h_ = options.r_max / static_cast<double>(intervals_);
    potential_.assign(intervals_ + 1, 0.0);
    const double ll = static_cast<double>(l) * static_cast<double>(l + 1);
    for (std::size_t i = 1; i <= intervals_; ++i) {
      const double r = static_cast<double>(i) * h_;
      const double v = options.use_scaled_form ? scaled_potential_value(spec, r)
                                               : potential_value(spec, r);
      potential_[i] = v + ll / (2.0 * r * r);
    }
  }

  /// Zeros of the regular solution in (0, r_max): the number of box
  /// eigenvalues below `energy`.
  [[nodiscard]] std::size_t nodes_below(double energy) const {
    std::size_t nodes = 0;
    double prev = 0.0;
    double curr = std::pow(h_, l_ + 1);
    const double h2 = h_ * h_ / 12.0;
    for (std::size_t i = 1; i + 1 < intervals_; ++i) {
      const double next = step_forward(prev, curr, i, energy, h2);
      if ((next < 0.0) != (curr < 0.0) || next == 0.0) ++nodes;
      prev = curr;
      curr = next;
      rescale(prev, curr);
    }
    return nodes;
  }

  /// Level k (1-based) of the box problem.
  [[nodiscard]] double eigenvalue(int k) const {
    if (k < 1) throw PreconditionError("level index must be positive");
    const auto level = static_cast<std::size_t>(k);
    double lower = potential_[1];
    for (std::size_t i = 1; i <= intervals_; ++i) lower = std::min(lower, potential_[i]);
    lower -= 1.0;
    double upper = 0.0;
    for (int grow = 0; nodes_below(upper) < level; ++grow) {
      if (grow > 60) throw ConvergenceError(level - 1, "shooting could not bracket the level");
      upper = upper <= 0.0 ? 1.0 : 2.0 * upper;
    }
    // Isolate level k: nodes(lower) = k - 1 and nodes(upper) = k.
    std::size_t upper_nodes = nodes_below(upper);
    for (int it = 0; it < 200 && upper_nodes != level; ++it) {
      const double mid = 0.5 * (lower + upper);
      const std::size_t n = nodes_below(mid);
      if (n >= level) {
        upper = mid;
        upper_nodes = n;
      } else {
        lower = mid;
      }
    }
    for (int it = 0; it < 200 && nodes_below(lower) + 1 != level; ++it) {
      const double mid = 0.5 * (lower + upper);
      if (nodes_below(mid) >= level) {
        upper = mid;
      } else {
        lower = mid;
      }
    }

    const std::size_t match = turning_point(0.5 * (lower + upper));
    const int sign_lower = wronskian_sign(lower, match);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lower + upper);
      if (upper - lower <= options_.energy_tolerance * std::max(1.0, std::abs(mid)) ||
          mid <= lower || mid >= upper) {
        return mid;
      }
      if (wronskian_sign(mid, match) == sign_lower) {
        lower = mid;
      } else {
        upper = mid;
      }
    }
    throw ConvergenceError(level - 1, "shooting refinement did not converge");
  }

 private:
  double step_forward(double prev, double curr, std::size_t i, double energy, double h2) const {
    // u'' = q u, q = 2 (W - E); the i - 1 = 0 node only enters through u = 0.
    const double q_prev = i > 1 ? 2.0 * (potential_[i - 1] - energy) : 0.0;
    const double q_curr = 2.0 * (potential_[i] - energy);
    const double q_next = 2.0 * (potential_[i + 1] - energy);
    return (2.0 * curr * (1.0 + 5.0 * h2 * q_curr) - prev * (1.0 - h2 * q_prev)) /
           (1.0 - h2 * q_next);
  }

  double step_backward(double prev, double curr, std::size_t i, double energy, double h2) const {
    const double q_prev = 2.0 * (potential_[i + 1] - energy);
    const double q_curr = 2.0 * (potential_[i] - energy);
    const double q_next = 2.0 * (potential_[i - 1] - energy);
    return (2.0 * curr * (1.0 + 5.0 * h2 * q_curr) - prev * (1.0 - h2 * q_prev)) /
           (1.0 - h2 * q_next);
  }

  static void rescale(double& a, double& b) {
    constexpr double big = 1e150;
    if (std::abs(b) > big || std::abs(a) > big) {
      a /= big;
      b /= big;
    }
  }

  [[nodiscard]] std::size_t turning_point(double energy) const {
    std::size_t m = intervals_ - 2;
    while (m > 2 && potential_[m] > energy) --m;
    return std::clamp<std::size_t>(m, 2, intervals_ - 2);
  }

  // Sign of u_out u_in' - u_in u_out' at node m (centred differences).
  [[nodiscard]] int wronskian_sign(double energy, std::size_t m) const {
    const double h2 = h_ * h_ / 12.0;
    std::vector<double> out(m + 2, 0.0);
    out[1] = std::pow(h_, l_ + 1);
    for (std::size_t i = 1; i <= m; ++i) {
      out[i + 1] = step_forward(out[i - 1], out[i], i, energy, h2);
      if (std::abs(out[i + 1]) > 1e150) {
        for (std::size_t j = 0; j <= i + 1; ++j) out[j] /= 1e150;
      }
    }
    std::vector<double> in(intervals_ + 1, 0.0);
    in[intervals_ - 1] = 1e-200;
    for (std::size_t i = intervals_ - 1; i >= m; --i) {
      in[i - 1] = step_backward(in[i + 1], in[i], i, energy, h2);
      if (std::abs(in[i - 1]) > 1e150) {
        for (std::size_t j = i - 1; j <= intervals_; ++j) in[j] /= 1e150;
      }
    }
    const double w = out[m] * (in[m + 1] - in[m - 1]) - in[m] * (out[m + 1] - out[m - 1]);
    return w > 0.0 ? 1 : (w < 0.0 ? -1 : 0);
  }

  int l_;
  ShootingOptions options_;
  std::size_t intervals_ = 0;
  double h_ = 0.0;
  std::vector<double> potential_;  // W(r_i), index 0 unused
};

inline double shooting_eigenvalue(const PotentialSpec& spec, int l, int k,
                                  const ShootingOptions& options = {}) {
  return NumerovShooter(spec, l, options).eigenvalue(k);
}

}  // namespace hft_spectra
