#pragma once

// Potential family V(r) = -f(beta/r)/r with its screened and truncated
// Coulomb instances, the scaled form -beta f(1/r)/r, and the reduction of
// dimensionful model parameters to the single dimensionless beta.

#include <cmath>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace hft_spectra {

enum class Family { Screened, Truncated, PureCoulomb };

inline std::string_view to_string(Family family) {
  switch (family) {
    case Family::Screened:
      return "screened";
    case Family::Truncated:
      return "truncated";
    case Family::PureCoulomb:
      return "coulomb";
  }
  return "unknown";
}

inline Family parse_family(std::string_view token) {
  if (token == "screened") return Family::Screened;
  if (token == "truncated") return Family::Truncated;
  if (token == "coulomb") return Family::PureCoulomb;
  throw PreconditionError("unknown potential family '" + std::string(token) + "'");
}

/// One member of the potential family.
///
/// `p` is the truncation exponent and is only read for the truncated family.
/// The pure Coulomb tag has f == 1 and only admits beta == 0.
struct PotentialSpec {
  Family family = Family::PureCoulomb;
  double beta = 0.0;
  double p = 1.0;

  static PotentialSpec screened(double beta) { return {Family::Screened, beta, 1.0}; }
  static PotentialSpec truncated(double beta, double p) { return {Family::Truncated, beta, p}; }
  static PotentialSpec coulomb() { return {Family::PureCoulomb, 0.0, 1.0}; }

  [[nodiscard]] PotentialSpec with_beta(double new_beta) const {
    PotentialSpec copy = *this;
    copy.beta = new_beta;
    return copy;
  }

  void validate() const {
    if (!std::isfinite(beta) || beta < 0.0) {
      throw DomainError("beta must be finite and nonnegative");
    }
    if (family == Family::Truncated && (!std::isfinite(p) || p <= 0.0)) {
      throw DomainError("truncation exponent p must be finite and positive");
    }
    if (family == Family::PureCoulomb && beta != 0.0) {
      throw DomainError("pure Coulomb potential is the beta = 0 member; got beta != 0");
    }
  }
};

/// Screening function f(z). Satisfies f(0) = 1 and 0 < f(z) <= 1 (up to
/// underflow of e^{-z} for z beyond ~745).
inline double f_value(const PotentialSpec& spec, double z) {
  spec.validate();
  if (!(z >= 0.0) || std::isinf(z)) {
    throw DomainError("f(z) requires finite z >= 0");
  }
  switch (spec.family) {
    case Family::Screened:
      return std::exp(-z);
    case Family::Truncated: {
      // (1 + z^p)^{-1/p}; for z > 1 factor out z so z^p never overflows.
      const double p = spec.p;
      if (z <= 1.0) {
        return std::exp(-std::log1p(std::pow(z, p)) / p);
      }
      return std::exp(-std::log1p(std::pow(z, -p)) / p) / z;
    }
    case Family::PureCoulomb:
      return 1.0;
  }
  return 1.0;
}

inline void require_positive_radius(double r) {
  if (!(r > 0.0) || std::isinf(r)) {
    throw DomainError("radial coordinate must be finite and positive");
  }
}

/// V(r) = -f(beta/r)/r. Strictly negative except where e^{-beta/r}
/// underflows, in which case the removable limit -0.0 is returned.
inline double potential_value(const PotentialSpec& spec, double r) {
  require_positive_radius(r);
  return -f_value(spec, spec.beta / r) / r;
}

/// Potential of the scaled Hamiltonian beta^2 H(beta): -beta f(1/r)/r.
/// Linear in beta; identically zero at beta = 0.
inline double scaled_potential_value(const PotentialSpec& spec, double r) {
  require_positive_radius(r);
  return -(spec.beta * f_value(spec, 1.0 / r)) / r;
}

struct DimensionfulInputs {
  double hbar = 1.0;
  double mass = 1.0;
  double strength = 1.0;      // K (truncated) or A (screened)
  double length_param = 1.0;  // r0 (truncated) or B (screened)
};

struct ReducedUnits {
  double beta;
  double length_unit;
  double energy_unit;
};

/// Length unit L = hbar^2/(m K), energy unit hbar^2/(m L^2) = m K^2/hbar^2,
/// and beta = length_param / L.
inline ReducedUnits reduce_units(const DimensionfulInputs& in) {
  for (double v : {in.hbar, in.mass, in.strength, in.length_param}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("dimensionful inputs must be finite and strictly positive");
    }
  }
  const double hbar2 = in.hbar * in.hbar;
  const double length = hbar2 / (in.mass * in.strength);
  const double energy = in.mass * in.strength * in.strength / hbar2;
  return {in.length_param / length, length, energy};
}

}  // namespace hft_spectra
