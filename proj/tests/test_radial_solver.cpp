#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hft_spectra/radial_solver.hpp"
#include "hft_spectra/shooting.hpp"
#include "oracles.hpp"

using namespace hft_spectra;
using Catch::Approx;

namespace {

const GridSpec kReference{200.0, 8000};

// Lowest level assembled and solved entirely in test code.
double inverse_power_level(const PotentialSpec& spec, int l, const GridSpec& grid) {
  const double h = grid.step();
  std::vector<double> d(grid.n_points);
  std::vector<double> e(grid.n_points - 1, -0.5 / (h * h));
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double r = static_cast<double>(i + 1) * h;
    d[i] = 1.0 / (h * h) + potential_value(spec, r) + l * (l + 1) / (2.0 * r * r);
  }
  return oracle::lowest_eigenvalue_inverse_power(d, e);
}

// Frozen from inverse_power_level on n = 16000 and n = 32000 (r_max = 200)
// followed by h^2 Richardson extrapolation; see the oracle test below.
constexpr double kScreenedHalfGround = -0.222362961924433;
// inverse_power_level(screened 0.5, l = 0, n = 8000).
constexpr double kScreenedHalfGroundN8000 = -0.222366490422032;
// Numerov shooting, r_max = 200, step 1e-3.
constexpr double kTruncatedUnitGround = -0.274891348767549;

}  // namespace

TEST_CASE("build_tridiagonal hand-evaluated entries", "[radial]") {
  const auto t = build_tridiagonal(RadialProblem{PotentialSpec::coulomb(), 0, {1.0, 1}, false});
  REQUIRE(t.size() == 1);
  CHECK(t.diagonal[0] == Approx(2.0).epsilon(1e-15));

  const auto t2 = build_tridiagonal(RadialProblem{PotentialSpec::screened(1.0), 1, {2.0, 1}, false});
  CHECK(t2.diagonal[0] == Approx(1.0 + 1.0 - std::exp(-1.0)).epsilon(1e-15));

  const GridSpec grid{10.0, 40};
  const double h = grid.step();
  for (auto spec : {PotentialSpec::coulomb(), PotentialSpec::screened(0.7), PotentialSpec::truncated(1.2, 3.0)}) {
    const auto t3 = build_tridiagonal(RadialProblem{spec, 0, grid, false});
    for (double e : t3.off_diagonal) CHECK(e == -1.0 / (2.0 * h * h));
    CHECK(t3.diagonal[4] == Approx(1.0 / (h * h) + potential_value(spec, 5.0 * h)).epsilon(1e-15));
  }
}

TEST_CASE("scaled form uses the scaled potential", "[radial]") {
  const GridSpec grid{10.0, 40};
  const auto spec = PotentialSpec::truncated(0.8, 2.0);
  const auto t = build_tridiagonal(RadialProblem{spec, 2, grid, true});
  const double h = grid.step();
  const double r = 3.0 * h;
  CHECK(t.diagonal[2] == Approx(1.0 / (h * h) + scaled_potential_value(spec, r) + 3.0 / (r * r)).epsilon(1e-15));
}

TEST_CASE("hydrogen levels before extrapolation", "[radial]") {
  const auto result = lowest_eigenpairs(RadialProblem{PotentialSpec::coulomb(), 0, kReference, false}, 3);
  REQUIRE(result.energies.size() == 3);
  CHECK(result.energies[0] == Approx(-0.5).margin(2e-3));
  CHECK(result.energies[1] == Approx(-0.125).margin(2e-3));
  CHECK(result.energies[2] == Approx(-1.0 / 18.0).margin(2e-3));
  CHECK(result.negative_count == 3);
  CHECK(result.grid == kReference);
}

TEST_CASE("eigenfunctions are normalized with Sturm node counts", "[radial]") {
  for (int l : {0, 1, 2}) {
    const auto result = lowest_eigenpairs(RadialProblem{PotentialSpec::screened(0.8), l, kReference, false}, 5);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(std::abs(quadrature_norm(result.eigenfunctions[k], kReference) - 1.0) <= 1e-10);
      CHECK(count_sign_changes(result.eigenfunctions[k]) == k);
      CHECK(expectation_value(result.eigenfunctions[k], kReference, [](double) { return 1.0; }) ==
            Approx(1.0).margin(1e-10));
      if (k > 0) CHECK(result.energies[k] > result.energies[k - 1] + 1e-10);
    }
  }
}

TEST_CASE("hydrogen expectation values", "[radial]") {
  const auto result = lowest_eigenpairs(RadialProblem{PotentialSpec::coulomb(), 0, kReference, false}, 1);
  const auto& u = result.eigenfunctions[0];
  CHECK(expectation_value(u, kReference, [](double r) { return 1.0 / r; }) == Approx(1.0).margin(1e-3));
  CHECK(expectation_value(u, kReference, [](double r) { return r; }) == Approx(1.5).margin(1e-3));
  // Linear in g.
  const double a = expectation_value(u, kReference, [](double r) { return r * r; });
  const double b = expectation_value(u, kReference, [](double r) { return std::sin(r); });
  CHECK(expectation_value(u, kReference, [](double r) { return 2.0 * r * r - 3.0 * std::sin(r); }) ==
        Approx(2.0 * a - 3.0 * b).epsilon(1e-12));
  CHECK_THROWS_AS(expectation_value(u, kReference, [](double) { return NAN; }), DomainError);
}

TEST_CASE("precondition errors", "[radial]") {
  const RadialProblem problem{PotentialSpec::screened(0.5), 0, kReference, false};
  CHECK_THROWS_AS(lowest_eigenpairs(problem, 0), PreconditionError);
  CHECK_THROWS_AS(lowest_eigenpairs(problem, kReference.n_points + 1), PreconditionError);
  CHECK_THROWS_AS(lowest_eigenpairs(RadialProblem{PotentialSpec::screened(0.5), 0, {200.0, 8}, false}, 1),
                  PreconditionError);
  CHECK_THROWS_AS(lowest_eigenpairs(RadialProblem{PotentialSpec::screened(0.5), -1, kReference, false}, 1),
                  PreconditionError);
}

TEST_CASE("non-finite effective potential is an overflow error", "[radial]") {
  // A tiny box puts the first node so close to the origin that l(l+1)/(2 r^2) overflows.
  const RadialProblem problem{PotentialSpec::coulomb(), 1, {1e-160, 16}, false};
  CHECK_THROWS_AS(build_tridiagonal(problem), OverflowError);
}

TEST_CASE("repeated solves are bitwise reproducible", "[radial]") {
  const RadialProblem problem{PotentialSpec::truncated(0.7, 1.5), 1, kReference, false};
  const auto a = lowest_eigenpairs(problem, 4);
  const auto b = lowest_eigenpairs(problem, 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(a.energies[k] - b.energies[k]) <= 1e-12);
}

TEST_CASE("finite-difference oracle for the screened ground state", "[radial][oracle]") {
  const auto spec = PotentialSpec::screened(0.5);
  const GridSpec g16{200.0, 16000};
  const GridSpec g32{200.0, 32000};
  const double e16 = inverse_power_level(spec, 0, g16);
  const double e32 = inverse_power_level(spec, 0, g32);
  const double h16 = g16.step(), h32 = g32.step();
  const double continuum = e32 + (e32 - e16) * h32 * h32 / (h16 * h16 - h32 * h32);
  CHECK(continuum == Approx(kScreenedHalfGround).margin(1e-11));
  CHECK(inverse_power_level(spec, 0, kReference) == Approx(kScreenedHalfGroundN8000).margin(1e-11));
}

TEST_CASE("screened ground state matches the oracle", "[radial]") {
  const auto result = lowest_eigenpairs(RadialProblem{PotentialSpec::screened(0.5), 0, kReference, false}, 1);
  // Same discrete operator: agreement to rounding.
  CHECK(result.energies[0] == Approx(kScreenedHalfGroundN8000).margin(1e-10));
  // Continuum value: within the O(h^2) error at n = 8000.
  CHECK(result.energies[0] == Approx(kScreenedHalfGround).margin(1e-5));
}

TEST_CASE("extrapolation recovers exact hydrogen levels", "[radial][extrapolation]") {
  const RadialProblem problem{PotentialSpec::coulomb(), 0, kReference, false};
  const std::vector<GridSpec> ladder{{200.0, 4000}, {200.0, 8000}};
  const auto refined = refine_by_extrapolation(problem, 2, ladder);
  CHECK(refined.energies[0] == Approx(-0.5).margin(1e-5));
  CHECK(refined.energies[1] == Approx(-0.125).margin(1e-5));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(refined.error_estimates[k] == Approx(std::abs(refined.energies[k] - refined.finest[k])));
    // Extrapolation improves on the finest raw level.
    const double exact = -0.5 / static_cast<double>((k + 1) * (k + 1));
    CHECK(std::abs(refined.energies[k] - exact) < std::abs(refined.finest[k] - exact));
  }
}

TEST_CASE("extrapolated truncated ground state matches the shooting oracle", "[radial][extrapolation]") {
  const RadialProblem problem{PotentialSpec::truncated(1.0, 2.0), 0, kReference, false};
  const auto refined = refine_by_extrapolation(problem, 1, halving_ladder(kReference));
  CHECK(refined.energies[0] == Approx(kTruncatedUnitGround).margin(1e-5));
}

TEST_CASE("shooting oracle reproduces its frozen value", "[radial][oracle]") {
  CHECK(shooting_eigenvalue(PotentialSpec::truncated(1.0, 2.0), 0, 1, {200.0, 1e-3}) ==
        Approx(kTruncatedUnitGround).margin(1e-11));
  CHECK(shooting_eigenvalue(PotentialSpec::screened(0.5), 0, 1, {200.0, 1e-3}) ==
        Approx(kScreenedHalfGround).margin(1e-9));
  CHECK(shooting_eigenvalue(PotentialSpec::coulomb(), 1, 1) == Approx(-0.125).margin(1e-8));
}

TEST_CASE("inconsistent ladders are rejected", "[radial][extrapolation]") {
  const RadialProblem problem{PotentialSpec::coulomb(), 0, kReference, false};
  const std::vector<GridSpec> mixed{{100.0, 4000}, {200.0, 8000}};
  CHECK_THROWS_AS(refine_by_extrapolation(problem, 1, mixed), InconsistentLadderError);
  const std::vector<GridSpec> single{{200.0, 8000}};
  CHECK_THROWS_AS(refine_by_extrapolation(problem, 1, single), InconsistentLadderError);
  const std::vector<GridSpec> coarsening{{200.0, 8000}, {200.0, 4000}};
  CHECK_THROWS_AS(refine_by_extrapolation(problem, 1, coarsening), InconsistentLadderError);
}

TEST_CASE("levels rise as the box shrinks", "[radial][property]") {
  const double density = 40.0;  // nodes per unit length
  for (auto spec : {PotentialSpec::coulomb(), PotentialSpec::screened(1.0)}) {
    std::vector<double> previous;
    for (double r_max : {200.0, 100.0, 50.0, 30.0}) {
      const GridSpec grid{r_max, static_cast<std::size_t>(r_max * density) - 1};
      const auto energies = lowest_energies(RadialProblem{spec, 0, grid, false}, 3);
      if (!previous.empty()) {
        for (std::size_t k = 0; k < 3; ++k) CHECK(energies[k] >= previous[k] - 1e-12);
      }
      previous = energies;
    }
  }
}

TEST_CASE("Coulomb levels bound every screened and truncated level from below", "[radial][property]") {
  const GridSpec grid{200.0, 4000};
  for (int l = 0; l <= 2; ++l) {
    const auto coulomb = lowest_energies(RadialProblem{PotentialSpec::coulomb(), l, grid, false}, 5);
    for (double beta : {0.1, 0.5, 1.5}) {
      for (auto spec : {PotentialSpec::screened(beta), PotentialSpec::truncated(beta, 2.0),
                        PotentialSpec::truncated(beta, 0.5)}) {
        const auto energies = lowest_energies(RadialProblem{spec, l, grid, false}, 5);
        for (std::size_t k = 0; k < 5; ++k) CHECK(energies[k] >= coulomb[k]);
      }
    }
  }
}

TEST_CASE("second-order convergence of the stencil", "[radial][property]") {
  // Grids with h, h/2, h/4 on the same box: n + 1 doubles.
  const auto spec = PotentialSpec::screened(0.5);
  for (std::size_t k = 1; k <= 2; ++k) {
    std::vector<double> e;
    for (std::size_t intervals : {2000u, 4000u, 8000u}) {
      e.push_back(lowest_energies(RadialProblem{spec, 0, {100.0, intervals - 1}, false}, k).back());
    }
    const double ratio = (e[0] - e[1]) / (e[1] - e[2]);
    CHECK(ratio == Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("negative level count via the Sturm sequence", "[radial]") {
  const RadialProblem problem{PotentialSpec::coulomb(), 0, kReference, false};
  const std::size_t total = count_negative_levels(problem);
  CHECK(total >= 5);
  const auto energies = lowest_energies(problem, total + 1);
  CHECK(energies[total - 1] < 0.0);
  CHECK(energies[total] >= 0.0);
}
