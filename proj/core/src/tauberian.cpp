#include "tauber/tauberian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "tauber/errors.hpp"

namespace tauber {

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Cesaro: return "cesaro";
    case FamilyKind::CesaroDiscrete: return "cesaro_discrete";
    case FamilyKind::Abel: return "abel";
    case FamilyKind::PowerShift: return "power_shift";
    case FamilyKind::Scaled: return "scaled";
  }
  return "?";
}

FamilyKind family_from_name(std::string_view name) {
  if (name == "cesaro") return FamilyKind::Cesaro;
  if (name == "cesaro_discrete") return FamilyKind::CesaroDiscrete;
  if (name == "abel") return FamilyKind::Abel;
  if (name == "power_shift") return FamilyKind::PowerShift;
  if (name == "scaled") return FamilyKind::Scaled;
  raise(Errc::ParseError, "unknown family \"" + std::string(name) + "\"");
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) raise(Errc::ParseError, "family grid is empty");
  for (double g : grid)
    if (!(g > 0) || !std::isfinite(g)) raise(Errc::ParseError, "family grid must be positive");
  const bool increasing = grid.size() < 2 || grid[1] > grid[0];
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (increasing ? !(grid[i] < grid[i + 1]) : !(grid[i] > grid[i + 1]))
      raise(Errc::ParseError, "family grid must be strictly monotone");
  }
}

}  // namespace

FamilySpec FamilySpec::cesaro(std::vector<double> T_grid) {
  check_grid(T_grid);
  return {FamilyKind::Cesaro, std::move(T_grid), std::nullopt};
}

FamilySpec FamilySpec::cesaro_discrete(std::vector<double> n_grid) {
  check_grid(n_grid);
  return {FamilyKind::CesaroDiscrete, std::move(n_grid), std::nullopt};
}

FamilySpec FamilySpec::abel(std::vector<double> lambda_grid) {
  check_grid(lambda_grid);
  return {FamilyKind::Abel, std::move(lambda_grid), std::nullopt};
}

FamilySpec FamilySpec::power_shift(Density base, std::vector<double> T_grid) {
  check_grid(T_grid);
  if (base.kind() != DensityKind::Power)
    raise(Errc::ParseError, "power_shift needs a power base density");
  return {FamilyKind::PowerShift, std::move(T_grid), std::move(base)};
}

FamilySpec FamilySpec::scaled(Density base, std::vector<double> lambda_grid) {
  check_grid(lambda_grid);
  return {FamilyKind::Scaled, std::move(lambda_grid), std::move(base)};
}

Density FamilySpec::density_at(double grid_point) const {
  switch (kind) {
    case FamilyKind::Cesaro: return Density::uniform(grid_point);
    case FamilyKind::Abel: return Density::exponential(grid_point);
    case FamilyKind::PowerShift: return base->shift(grid_point);
    case FamilyKind::Scaled: return base->scale(grid_point);
    case FamilyKind::CesaroDiscrete:
      raise(Errc::ParseError, "cesaro_discrete is an exact finite path, not a density");
  }
  raise(Errc::ParseError, "unreachable");
}

std::size_t FamilySpec::finest_index() const {
  const bool smallest = kind == FamilyKind::Abel || kind == FamilyKind::Scaled;
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (smallest ? grid[i] < grid[best] : grid[i] > grid[best]) best = i;
  }
  return best;
}

FamilyTable family_values(const StochasticGame& game, const FamilySpec& spec, double tail_eps,
                          int jobs) {
  FamilyTable table;
  table.kind = spec.kind;
  table.grid = spec.grid;
  table.values.resize(spec.grid.size());

  auto evaluate = [&](std::size_t i) {
    const double point = spec.grid[i];
    switch (spec.kind) {
      case FamilyKind::CesaroDiscrete: {
        const StateFunction v = cesaro_finite(game, std::lround(point));
        table.values[i] = {v, v, 0.0};
        break;
      }
      case FamilyKind::Cesaro:
        table.values[i] = value_backward(game, spec.density_at(point), 0.0);
        break;
      default:
        table.values[i] = value_backward(game, spec.density_at(point), tail_eps);
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(spec.grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < spec.grid.size(); ++i) evaluate(i);
    return table;
  }

  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = cursor.fetch_add(1); i < spec.grid.size(); i = cursor.fetch_add(1))
          evaluate(i);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
  return table;
}

EquivalenceReport assemble_report(const std::vector<FamilySpec>& specs,
                                  std::vector<FamilyTable> tables, double tol) {
  if (tables.size() != specs.size())
    raise(Errc::ParseError, "one table per family expected");
  int abel_at = -1, cesaro_at = -1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].kind == FamilyKind::Abel) abel_at = static_cast<int>(i);
    if (specs[i].kind == FamilyKind::CesaroDiscrete) cesaro_at = static_cast<int>(i);
  }
  if (abel_at < 0 && cesaro_at < 0)
    raise(Errc::MissingReferenceFamily, "need an abel or cesaro_discrete family");

  EquivalenceReport report;
  report.tables = std::move(tables);

  // u_star: average of the reference families' finest-grid midpoints.
  const std::size_t n = report.tables.front().values.front().lo.size();
  StateFunction acc(n, 0.0);
  double reference_half_widths = 0;
  std::vector<StateFunction> reference_mids;
  for (int at : {abel_at, cesaro_at}) {
    if (at < 0) continue;
    const auto& table = report.tables[static_cast<std::size_t>(at)];
    const std::size_t fin = specs[static_cast<std::size_t>(at)].finest_index();
    const StateFunction mid = table.values[fin].midpoint();
    for (std::size_t s = 0; s < n; ++s) acc[s] += mid[s];
    reference_half_widths += 0.5 * table.values[fin].width();
    reference_mids.push_back(mid);
  }
  for (std::size_t s = 0; s < n; ++s) acc[s] /= static_cast<double>(reference_mids.size());
  report.u_star = acc;
  report.u_star_disagreement = 0;
  if (reference_mids.size() == 2) {
    for (std::size_t s = 0; s < n; ++s)
      report.u_star_disagreement =
          std::max(report.u_star_disagreement, std::abs(reference_mids[0][s] - reference_mids[1][s]));
  }

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::size_t fin = specs[i].finest_index();
    const auto& bracket = report.tables[i].values[fin];
    const StateFunction mid = bracket.midpoint();
    double deviation = 0;
    for (std::size_t s = 0; s < n; ++s)
      deviation = std::max(deviation, std::abs(mid[s] - report.u_star[s]));
    FamilyVerdict verdict;
    verdict.kind = specs[i].kind;
    verdict.grid_point = specs[i].grid[fin];
    verdict.deviation = deviation;
    verdict.allowance = tol + bracket.width() + reference_half_widths;
    verdict.pass = deviation <= verdict.allowance;
    report.verdicts.push_back(verdict);
  }
  return report;
}

EquivalenceReport equivalence_report(const StochasticGame& game,
                                     const std::vector<FamilySpec>& specs, double tol,
                                     double tail_eps, int jobs) {
  std::vector<FamilyTable> tables;
  tables.reserve(specs.size());
  for (const auto& spec : specs) tables.push_back(family_values(game, spec, tail_eps, jobs));
  return assemble_report(specs, std::move(tables), tol);
}

AdmissibilityReport check_admissible(const std::vector<Density>& family,
                                     const std::vector<double>& lambda_grid,
                                     const std::vector<double>& eps_grid,
                                     double product_threshold) {
  if (family.size() != lambda_grid.size())
    raise(Errc::ParseError, "one density per lambda grid point expected");
  AdmissibilityReport report;
  report.eps_grid = eps_grid;
  report.threshold = product_threshold;
  report.max_product.assign(eps_grid.size(), 0.0);

  for (std::size_t i = 0; i < family.size(); ++i) {
    AdmissibilityRow row;
    row.lambda = lambda_grid[i];
    row.sup_value = family[i].sup_value();
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
      const double q = family[i].quantile(1.0 - eps_grid[e]);
      const double product = q <= 0 ? 0.0 : total_variation(family[i], 0.0, q) * q;
      row.products.push_back(product);
      report.max_product[e] = std::max(report.max_product[e], product);
    }
    report.rows.push_back(std::move(row));
  }

  report.sup_trends_to_zero =
      !report.rows.empty() && report.rows.back().sup_value <= 0.5 * report.rows.front().sup_value;
  for (double max_product : report.max_product)
    report.product_bounded.push_back(max_product <= product_threshold);
  return report;
}

TestFamilyReport check_test_family(const std::vector<Density>& family,
                                   const std::vector<double>& lambda_grid, double eps) {
  if (family.size() != lambda_grid.size())
    raise(Errc::ParseError, "one density per lambda grid point expected");
  if (!(eps > 0) || !(eps < 1)) raise(Errc::QuantileOutOfRange, "eps must lie in (0,1)");

  TestFamilyReport report;
  report.peak_equals_lambda = true;
  report.peak_dominates = true;
  report.delta_eps = 1.0;

  for (std::size_t i = 0; i < family.size(); ++i) {
    const Density& rho = family[i];
    const double lambda = lambda_grid[i];
    const double peak_error = std::abs(rho.value_at(0.0) - lambda);
    report.peak_errors.push_back(peak_error);
    if (peak_error > 1e-9) report.peak_equals_lambda = false;

    // rho <= lambda everywhere: 10^3 samples across the effective support,
    // plus breakpoints for step densities.
    const double span =
        std::min(rho.support_end(), rho.quantile(1.0 - 1e-6)) * (1.0 + 1e-12);
    for (int j = 0; j < 1000; ++j) {
      const double t = span * j / 1000.0;
      if (rho.value_at(t) > lambda + 1e-9) report.peak_dominates = false;
    }
    if (rho.kind() == DensityKind::PiecewiseConstant) {
      for (double b : rho.breakpoints())
        if (rho.value_at(b) > lambda + 1e-9) report.peak_dominates = false;
    }

    // Largest delta in (0,1] with rho >= lambda*(1-eps) on [0, delta/lambda):
    // sampled on the half-open window, bisected to 1e-12.
    auto feasible = [&](double delta) {
      const double window = delta / lambda;
      const int samples = 512;
      for (int j = 0; j < samples; ++j) {
        const double t = window * j / samples;
        if (rho.value_at(t) < lambda * (1.0 - eps) - 1e-12) return false;
      }
      // the window is half-open; probe just inside its right end
      if (rho.value_at(window * (1.0 - 1e-9)) < lambda * (1.0 - eps) - 1e-12) return false;
      if (rho.kind() == DensityKind::PiecewiseConstant) {
        for (double b : rho.breakpoints())
          if (b < window && rho.value_at(b) < lambda * (1.0 - eps) - 1e-12) return false;
      }
      return true;
    };

    double delta = 0;
    if (feasible(1.0)) {
      delta = 1.0;
    } else {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
      }
      delta = lo;
    }
    report.delta_eps = std::min(report.delta_eps, delta);
  }
  return report;
}

ShiftUniformityReport check_shift_uniformity(const StochasticGame& game,
                                             const std::vector<Density>& family,
                                             const std::vector<double>& lambda_grid, double r0,
                                             const StateFunction& u_star, double tail_eps) {
  if (family.size() != lambda_grid.size())
    raise(Errc::ParseError, "one density per lambda grid point expected");
  if (!(r0 > 0) || !(r0 < 1)) raise(Errc::QuantileOutOfRange, "r0 must lie in (0,1)");

  ShiftUniformityReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double q = family[i].quantile(r0);
    for (double quartile : {0.25, 0.5, 0.75}) {
      const Density shifted = family[i].shift(quartile * q);
      const ValueBracket bracket = value_backward(game, shifted, tail_eps);
      const StateFunction mid = bracket.midpoint();
      ShiftProbe probe;
      probe.lambda = lambda_grid[i];
      probe.shift = quartile * q;
      probe.width = bracket.width();
      for (std::size_t s = 0; s < mid.size(); ++s)
        probe.deviation = std::max(probe.deviation, std::abs(mid[s] - u_star[s]));
      report.max_deviation = std::max(report.max_deviation, probe.deviation);
      report.max_width = std::max(report.max_width, probe.width);
      report.probes.push_back(probe);
    }
  }
  return report;
}

}  // namespace tauber
