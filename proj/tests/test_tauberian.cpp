#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tauber/audit.hpp"
#include "tauber/density.hpp"
#include "tauber/errors.hpp"
#include "tauber/game.hpp"
#include "tauber/tauberian.hpp"

using namespace tauber;

TEST_CASE("family_values: swap2 abel closed forms") {
  const auto table =
      family_values(builtin("swap2"), FamilySpec::abel({1.0, 0.1, 0.01}), 1e-9);
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    const double beta = std::exp(-table.grid[i]);
    const double expected0 = 1.0 / (1.0 + beta);
    const auto mid = table.values[i].midpoint();
    CHECK(std::abs(mid[0] - expected0) <= table.values[i].width() + 1e-9);
    CHECK(std::abs(mid[1] - beta / (1.0 + beta)) <= table.values[i].width() + 1e-9);
  }
}

TEST_CASE("family_values: swap2 discrete cesaro patterns") {
  const auto table =
      family_values(builtin("swap2"), FamilySpec::cesaro_discrete({2.0, 3.0, 4.0}), 0.0);
  CHECK(table.values[0].lo[0] == 0.5);
  CHECK(table.values[1].lo[0] == 2.0 / 3);
  CHECK(table.values[1].lo[1] == 1.0 / 3);
  CHECK(table.values[2].lo[0] == 0.5);
  CHECK(table.values[0].tail_bound == 0.0);
}

TEST_CASE("family_values: swap2 power shifts approach one half") {
  const auto table = family_values(
      builtin("swap2"), FamilySpec::power_shift(Density::power(1.0, 1.0, 2.0), {1.0, 10.0, 100.0}),
      1e-4);
  const auto mid = table.values[2].midpoint();
  CHECK(std::abs(mid[0] - 0.5) <= 0.01 + table.values[2].width());
  CHECK(std::abs(mid[1] - 0.5) <= 0.01 + table.values[2].width());
  // coarser shifts deviate more
  const auto mid0 = table.values[0].midpoint();
  CHECK(std::abs(mid0[0] - 0.5) > std::abs(mid[0] - 0.5));
}

TEST_CASE("family_values: fractional cesaro horizon weights the partial stage") {
  // uniform over [0, 3.5): weights (2/7, 2/7, 2/7, 1/7); swap2 alternates 1,0
  const auto table = family_values(builtin("swap2"), FamilySpec::cesaro({3.5}), 0.0);
  CHECK(table.values[0].tail_bound == 0.0);
  CHECK(table.values[0].lo[0] == doctest::Approx(4.0 / 7).epsilon(1e-12));
  CHECK(table.values[0].lo[1] == doctest::Approx(3.0 / 7).epsilon(1e-12));
  CHECK(table.values[0].hi[0] == doctest::Approx(4.0 / 7).epsilon(1e-12));
}

TEST_CASE("equivalence_report: a single reference family has zero disagreement") {
  const std::vector<FamilySpec> specs{FamilySpec::cesaro_discrete({8.0, 64.0})};
  const auto report = equivalence_report(builtin("swap2"), specs, 0.02, 0.0);
  CHECK(report.u_star_disagreement == 0.0);
  CHECK(report.u_star[0] == 0.5);  // exact finest cesaro midpoint
  REQUIRE(report.verdicts.size() == 1);
  CHECK(report.verdicts[0].deviation == 0.0);
  CHECK(report.verdicts[0].pass);
}

TEST_CASE("family_values: parallel evaluation matches serial bit for bit") {
  const auto spec = FamilySpec::abel({0.5, 0.25, 0.125, 0.0625});
  const auto serial = family_values(builtin("ergodic3"), spec, 1e-8, 1);
  const auto parallel = family_values(builtin("ergodic3"), spec, 1e-8, 4);
  for (std::size_t i = 0; i < serial.values.size(); ++i) {
    CHECK(serial.values[i].lo == parallel.values[i].lo);
    CHECK(serial.values[i].hi == parallel.values[i].hi);
  }
}

TEST_CASE("equivalence_report: all five families pass on swap2 and lazy2") {
  const std::vector<FamilySpec> specs{
      FamilySpec::cesaro({4.0, 16.0, 64.0}),
      FamilySpec::cesaro_discrete({4.0, 16.0, 64.0}),
      FamilySpec::abel({0.25, 0.0625, 1.0 / 64}),
      FamilySpec::power_shift(Density::power(1.0, 1.0, 2.0), {4.0, 16.0, 64.0}),
      FamilySpec::scaled(Density::exponential(1.0), {0.25, 0.0625, 1.0 / 64}),
  };
  for (const char* name : {"swap2", "lazy2"}) {
    CAPTURE(name);
    const auto report = equivalence_report(builtin(name), specs, 0.02, 1e-3);
    CHECK(report.u_star[0] == doctest::Approx(0.5).epsilon(0.01));
    CHECK(report.u_star[1] == doctest::Approx(0.5).epsilon(0.01));
    CHECK(report.u_star_disagreement <= 0.01);
    for (const auto& verdict : report.verdicts) {
      CAPTURE(family_name(verdict.kind));
      CHECK(verdict.pass);
    }
  }
}

TEST_CASE("equivalence_report: reference family is mandatory") {
  const std::vector<FamilySpec> specs{
      FamilySpec::power_shift(Density::power(1.0, 1.0, 2.0), {1.0, 2.0})};
  bool caught = false;
  try {
    (void)equivalence_report(builtin("swap2"), specs, 0.02, 1e-3);
  } catch (const Error& err) {
    caught = err.code() == Errc::MissingReferenceFamily;
  }
  CHECK(caught);
}

TEST_CASE("check_admissible: abel family products are (1-eps) ln(1/eps)") {
  const std::vector<double> grid{1.0, 0.1, 0.01};
  std::vector<Density> family;
  for (double lambda : grid) family.push_back(Density::exponential(lambda));
  const double eps = 0.1;
  const auto report = check_admissible(family, grid, {eps}, 3.0);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(report.rows[i].sup_value == doctest::Approx(grid[i]).epsilon(1e-12));
    CHECK(report.rows[i].products[0] ==
          doctest::Approx((1.0 - eps) * std::log(1.0 / eps)).epsilon(1e-9));
  }
  CHECK(report.sup_trends_to_zero);
  CHECK(report.product_bounded[0]);
}

TEST_CASE("check_admissible: uniform family has zero variation on the window") {
  const std::vector<double> grid{1.0, 0.25, 0.0625};
  std::vector<Density> family;
  for (double lambda : grid) family.push_back(Density::uniform(1.0 / lambda));
  const auto report = check_admissible(family, grid, {0.1, 0.5}, 1.0);
  for (const auto& row : report.rows)
    for (double product : row.products) CHECK(product == 0.0);
  CHECK(report.sup_trends_to_zero);
}

TEST_CASE("check_admissible: lambda-independent spike defeats the sup trend") {
  const std::vector<double> grid{1.0, 0.25, 0.0625};
  std::vector<Density> family;
  for (double lambda : grid) {
    const double support = 1.0 / lambda;
    // height-2 spike on [0, 0.1) regardless of lambda
    const double rest = (1.0 - 0.2) / (support - 0.1);
    family.push_back(Density::piecewise_constant({0.0, 0.1, support}, {2.0, rest}));
  }
  const auto report = check_admissible(family, grid, {0.5}, 100.0);
  CHECK(!report.sup_trends_to_zero);
}

TEST_CASE("check_test_family: exponential, uniform, scaled power") {
  const std::vector<double> grid{1.0, 0.5, 0.1};

  std::vector<Density> abel;
  for (double lambda : grid) abel.push_back(Density::exponential(lambda));
  const auto abel_report = check_test_family(abel, grid, 0.1);
  CHECK(abel_report.peak_equals_lambda);
  CHECK(abel_report.peak_dominates);
  CHECK(abel_report.delta_eps == doctest::Approx(-std::log(0.9)).epsilon(1e-4));

  std::vector<Density> cesaro;
  for (double lambda : grid) cesaro.push_back(Density::uniform(1.0 / lambda));
  const auto cesaro_report = check_test_family(cesaro, grid, 0.3);
  CHECK(cesaro_report.peak_equals_lambda);
  CHECK(cesaro_report.delta_eps == doctest::Approx(1.0));

  // rho_lambda = scale(mu, lambda/mu(0)) for the power base mu
  const auto mu = Density::power(1.0, 1.0, 2.0);
  const double peak = mu.value_at(0.0);
  std::vector<Density> scaled;
  for (double lambda : grid) scaled.push_back(mu.scale(lambda / peak));
  const double eps = 0.5;
  const auto scaled_report = check_test_family(scaled, grid, eps);
  CHECK(scaled_report.peak_equals_lambda);
  CHECK(scaled_report.peak_dominates);
  const double gamma = 2.0;
  const double expected = (gamma - 1.0) * (std::pow(1.0 - eps, -1.0 / gamma) - 1.0);
  CHECK(scaled_report.delta_eps == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("check_shift_uniformity: quartile probes of the test families") {
  const auto game = builtin("swap2");
  const StateFunction u_star{0.5, 0.5};
  const double r0 = 0.4;

  // exponential family: shifts leave every member unchanged, so the probes
  // deviate exactly as the unshifted values do
  std::vector<double> grid{0.25, 0.0625};
  std::vector<Density> abel;
  for (double lambda : grid) abel.push_back(Density::exponential(lambda));
  const auto report = check_shift_uniformity(game, abel, grid, r0, u_star, 1e-9);
  REQUIRE(report.probes.size() == 6);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double beta = std::exp(-grid[i]);
    const double expected = 1.0 / (1.0 + beta) - 0.5;
    for (int quart = 0; quart < 3; ++quart)
      CHECK(report.probes[3 * i + quart].deviation ==
            doctest::Approx(expected).epsilon(1e-6));
  }

  // uniform family: a shift by T inside the support gives uniform(1/lambda-T)
  std::vector<Density> cesaro;
  for (double lambda : grid) cesaro.push_back(Density::uniform(1.0 / lambda));
  const auto uni = check_shift_uniformity(game, cesaro, grid, r0, u_star, 0.0);
  // worst probe: coarsest lambda, deepest shift; remaining support shrinks
  // to (1 - 0.75 r0)/lambda
  CHECK(uni.max_deviation <= 0.5 * grid.front() / (1.0 - 0.75 * r0) + 1e-9);
}

TEST_CASE("power shift and matched scale produce the same value tables") {
  const auto base = Density::power(1.0, 1.0, 2.0);
  const std::vector<double> shifts{1.0, 3.0, 9.0};
  std::vector<double> rates;
  for (double T : shifts) rates.push_back(1.0 / (1.0 + T));

  const auto via_shift =
      family_values(builtin("swap2"), FamilySpec::power_shift(base, shifts), 1e-3);
  const auto via_scale =
      family_values(builtin("swap2"), FamilySpec::scaled(base, rates), 1e-3);

  for (std::size_t i = 0; i < shifts.size(); ++i) {
    // rates are listed finest-last to match shifts; same index, same density
    for (int s = 0; s < 2; ++s) {
      CHECK(via_shift.values[i].lo[s] ==
            doctest::Approx(via_scale.values[i].lo[s]).epsilon(1e-9));
      CHECK(via_shift.values[i].hi[s] ==
            doctest::Approx(via_scale.values[i].hi[s]).epsilon(1e-9));
    }
  }
}
