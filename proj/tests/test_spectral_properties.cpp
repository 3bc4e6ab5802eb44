#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "hft_spectra/io.hpp"
#include "hft_spectra/spectral_properties.hpp"

using namespace hft_spectra;
using Catch::Approx;

namespace {
const GridSpec kReference{200.0, 8000};

BetaScan synthetic_scan(std::vector<std::vector<double>> energies, std::vector<double> betas) {
  BetaScan scan;
  scan.k_max = static_cast<int>(energies.front().size());
  scan.grid = kReference;
  for (std::size_t j = 0; j < betas.size(); ++j) {
    ScanRow row;
    row.beta = betas[j];
    row.energies = energies[j];
    for (double e : row.energies) {
      row.scaled_values.push_back(betas[j] * betas[j] * e);
      row.box_limited.push_back(std::abs(e) < box_limit_threshold(kReference));
    }
    scan.rows.push_back(row);
  }
  return scan;
}
}  // namespace

TEST_CASE("beta grid construction", "[scan]") {
  const auto betas = make_beta_grid(0.0, 2.0, 0.1);
  REQUIRE(betas.size() == 21);
  CHECK(betas.front() == 0.0);
  CHECK(betas.back() == Approx(2.0));
  CHECK_THROWS_AS(make_beta_grid(1.0, 0.0, 0.1), PreconditionError);
  CHECK_THROWS_AS(make_beta_grid(0.0, 1.0, 0.0), PreconditionError);
  CHECK(make_beta_grid(0.5, 0.5, 0.1).size() == 1);
}

TEST_CASE("single-row scan at beta = 0 has zero scaled value", "[scan]") {
  const std::vector<double> betas{0.0};
  const auto scan = run_beta_scan(Family::Screened, 1.0, 0, 1, betas, kReference);
  REQUIRE(scan.rows.size() == 1);
  CHECK(scan.rows[0].scaled_values[0] == 0.0);
  CHECK(scan.rows[0].energies[0] == Approx(-0.5).margin(2e-3));
}

TEST_CASE("screened and truncated scans decrease and stay negative", "[scan]") {
  const auto betas = make_beta_grid(0.0, 2.0, 0.1);
  for (auto family : {Family::Screened, Family::Truncated}) {
    const auto scan = run_beta_scan(family, 2.0, 0, 3, betas, kReference, 2);
    CHECK(scan.rows.size() == betas.size());
    CHECK_FALSE(scan.partial);
    CHECK(assert_monotone_decrease(scan).passed);
    CHECK(assert_negativity(scan).passed);
    CHECK(assert_energy_nondecreasing(scan).passed);
    for (const auto& row : scan.rows) {
      for (bool limited : row.box_limited) CHECK_FALSE(limited);
    }
  }
}

TEST_CASE("parallel scans match sequential ones exactly", "[scan]") {
  const auto betas = make_beta_grid(0.0, 1.0, 0.25);
  const GridSpec grid{150.0, 3000};
  const auto serial = run_beta_scan(Family::Truncated, 1.5, 1, 4, betas, grid, 1);
  const auto threaded = run_beta_scan(Family::Truncated, 1.5, 1, 4, betas, grid, 4);
  for (std::size_t j = 0; j < betas.size(); ++j) {
    CHECK(serial.rows[j].energies == threaded.rows[j].energies);
  }
}

TEST_CASE("scan input validation", "[scan]") {
  const std::vector<double> decreasing{0.5, 0.2};
  CHECK_THROWS_AS(run_beta_scan(Family::Screened, 1.0, 0, 1, decreasing, kReference), PreconditionError);
  const std::vector<double> negative{-0.1, 0.2};
  CHECK_THROWS_AS(run_beta_scan(Family::Screened, 1.0, 0, 1, negative, kReference), PreconditionError);
  const std::vector<double> ok{0.0, 0.2};
  CHECK_THROWS_AS(run_beta_scan(Family::Screened, 1.0, 0, 0, ok, kReference), PreconditionError);
  CHECK_THROWS_AS(run_beta_scan(Family::PureCoulomb, 1.0, 0, 1, ok, kReference), DomainError);
}

TEST_CASE("a failing row yields a partial scan annotated with its beta", "[scan]") {
  // The l = 1 centrifugal term overflows on a vanishing box; every row fails.
  const std::vector<double> betas{0.0, 0.5};
  try {
    (void)run_beta_scan(Family::Screened, 1.0, 1, 1, betas, GridSpec{1e-160, 16});
    FAIL("expected a scan error");
  } catch (const ScanError& e) {
    CHECK(e.beta() == 0.0);
    CHECK(e.partial_scan().partial);
    CHECK(e.partial_scan().rows.empty());
  }
}

TEST_CASE("monotone decrease verdicts", "[scan][verdict]") {
  const std::vector<double> two{0.0, 0.5};
  const auto scan = run_beta_scan(Family::Screened, 1.0, 0, 1, two, kReference);
  CHECK(scan.rows[0].scaled_values[0] == 0.0);
  CHECK(scan.rows[1].scaled_values[0] < 0.0);
  CHECK(assert_monotone_decrease(scan).passed);

  auto duplicated = synthetic_scan({{-0.3}, {-0.3}, {-0.2}}, {0.5, 1.0, 1.5});
  duplicated.rows[1] = duplicated.rows[0];
  const auto verdict = assert_monotone_decrease(duplicated);
  CHECK_FALSE(verdict.passed);
  REQUIRE(verdict.violation);
  CHECK(verdict.violation->row == 1);
  CHECK(verdict.violation->k == 1);
  CHECK_THROWS_AS(assert_monotone_decrease(synthetic_scan({{-0.3}}, {0.5})), PreconditionError);
}

TEST_CASE("negativity verdicts", "[scan][verdict]") {
  CHECK(assert_negativity(synthetic_scan({{-0.5, -0.125, -1.0 / 18.0}}, {0.0})).passed);
  const auto bad = synthetic_scan({{-0.4, -0.1}, {-0.3, 0.1}}, {0.5, 1.0});
  const auto verdict = assert_negativity(bad);
  CHECK_FALSE(verdict.passed);
  REQUIRE(verdict.violation);
  CHECK(verdict.violation->k == 2);
  CHECK(verdict.violation->row == 1);
  // Levels inside the box threshold are excluded.
  CHECK(assert_negativity(synthetic_scan({{-0.4, 1e-5}}, {0.5})).passed);
}

TEST_CASE("Coulomb sandwich", "[sandwich]") {
  const auto coulomb = coulomb_sandwich(PotentialSpec::coulomb(), 0, 3, kReference);
  CHECK(coulomb.passed());
  for (const auto& row : coulomb.rows) CHECK(row.energy == Approx(row.lower_bound).margin(row.tolerance));

  const auto screened = coulomb_sandwich(PotentialSpec::screened(1.0), 0, 5, kReference);
  CHECK(screened.passed());
  for (const auto& row : screened.rows) CHECK(row.energy > row.lower_bound);

  const auto truncated = coulomb_sandwich(PotentialSpec::truncated(1.0, 2.0), 1, 3, kReference);
  CHECK(truncated.passed());
  for (const auto& row : truncated.rows) {
    CHECK(row.principal == row.k + 1);
    CHECK(row.energy > row.lower_bound);
  }
}

TEST_CASE("bound-level counts grow with the box", "[count]") {
  const std::vector<double> boxes{50.0, 100.0, 200.0, 400.0};
  const auto ladder = fixed_step_ladder(boxes, 0.05);
  for (const auto& g : ladder) CHECK(g.step() == Approx(0.05).epsilon(1e-12));

  const auto coulomb = count_growth(PotentialSpec::coulomb(), 0, ladder);
  CHECK(coulomb.nondecreasing());
  CHECK(coulomb.grew());
  for (const auto& row : coulomb.rows) {
    CHECK(std::abs(static_cast<double>(row.negative_count) - std::sqrt(row.r_max / 2.0)) <= 2.0 + 0.5 * std::sqrt(row.r_max / 2.0));
  }

  const auto screened = count_growth(PotentialSpec::screened(0.5), 0, ladder);
  CHECK(screened.nondecreasing());
  CHECK(screened.rows.back().negative_count > screened.rows.front().negative_count);

  const std::vector<GridSpec> single{ladder.front()};
  CHECK(count_growth(PotentialSpec::screened(0.5), 0, single).nondecreasing());
}

TEST_CASE("count ladder validation", "[count]") {
  const std::vector<GridSpec> mixed_step{{50.0, 999}, {100.0, 999}};
  CHECK_THROWS_AS(count_growth(PotentialSpec::coulomb(), 0, mixed_step), PreconditionError);
  const std::vector<GridSpec> shrinking{{100.0, 1999}, {50.0, 999}};
  CHECK_THROWS_AS(count_growth(PotentialSpec::coulomb(), 0, shrinking), PreconditionError);
}

TEST_CASE("persisted scans reproduce their verdicts", "[scan][io]") {
  const auto betas = make_beta_grid(0.0, 1.0, 0.2);
  const auto scan = run_beta_scan(Family::Screened, 1.0, 0, 2, betas, {120.0, 3000});
  std::stringstream buffer;
  write_json(buffer, scan_artifact(scan));
  const auto restored = read_scan_json(buffer);
  CHECK(restored.family == scan.family);
  CHECK(restored.grid == scan.grid);
  REQUIRE(restored.rows.size() == scan.rows.size());
  for (std::size_t j = 0; j < scan.rows.size(); ++j) {
    for (int k = 0; k < scan.k_max; ++k) {
      CHECK(restored.rows[j].energies[k] == Approx(scan.rows[j].energies[k]).epsilon(1e-11));
    }
    CHECK(restored.rows[j].box_limited == scan.rows[j].box_limited);
  }
  CHECK(assert_monotone_decrease(restored).passed == assert_monotone_decrease(scan).passed);
  CHECK(assert_negativity(restored).passed == assert_negativity(scan).passed);
}
