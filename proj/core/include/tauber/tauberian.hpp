#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tauber/density.hpp"
#include "tauber/game.hpp"
#include "tauber/valuation.hpp"

namespace tauber {

enum class FamilyKind { Cesaro, CesaroDiscrete, Abel, PowerShift, Scaled };

const char* family_name(FamilyKind kind);
FamilyKind family_from_name(std::string_view name);

// One value family over a density grid:
//   cesaro          uniform densities over [0,T], T from the grid
//   cesaro_discrete exact n-stage equal-weight values, n from the grid
//   abel            exponential densities with rate lambda from the grid
//   power_shift     base power density shifted by T from the grid
//   scaled          base density scaled by lambda from the grid
struct FamilySpec {
  FamilyKind kind = FamilyKind::Abel;
  std::vector<double> grid;      // positive, strictly monotone
  std::optional<Density> base;   // power_shift / scaled only

  static FamilySpec cesaro(std::vector<double> T_grid);
  static FamilySpec cesaro_discrete(std::vector<double> n_grid);
  static FamilySpec abel(std::vector<double> lambda_grid);
  static FamilySpec power_shift(Density base, std::vector<double> T_grid);
  static FamilySpec scaled(Density base, std::vector<double> lambda_grid);

  // The density the family evaluates at one grid point (cesaro_discrete has
  // none; it is an exact finite recursion).
  Density density_at(double grid_point) const;
  // Grid index whose value is taken as the family's limit estimate: largest T
  // or n, smallest lambda.
  std::size_t finest_index() const;
};

struct FamilyTable {
  FamilyKind kind = FamilyKind::Abel;
  std::vector<double> grid;
  std::vector<ValueBracket> values;
};

// One bracket per grid point; cesaro/cesaro_discrete are exact finite paths,
// the rest run value_backward at tail_eps. jobs > 1 evaluates grid points in
// parallel; assembly is ordered by grid index, so output is deterministic.
FamilyTable family_values(const StochasticGame& game, const FamilySpec& spec,
                          double tail_eps, int jobs = 1);

struct FamilyVerdict {
  FamilyKind kind = FamilyKind::Abel;
  double grid_point = 0;
  double deviation = 0;   // sup-state |bracket midpoint - u_star| at the finest point
  double allowance = 0;   // tol + family width + reference half-widths
  bool pass = false;
};

struct EquivalenceReport {
  StateFunction u_star;
  double u_star_disagreement = 0;  // sup-gap between the reference midpoints
  std::vector<FamilyTable> tables;
  std::vector<FamilyVerdict> verdicts;
};

// u_star is the average of the finest-grid abel and cesaro_discrete bracket
// midpoints (whichever are present; at least one is required). Per family,
// PASS iff the finest-grid deviation stays within tol plus bracket widths.
EquivalenceReport equivalence_report(const StochasticGame& game,
                                     const std::vector<FamilySpec>& specs, double tol,
                                     double tail_eps, int jobs = 1);

// Same report from already-evaluated tables (one per spec, same order).
EquivalenceReport assemble_report(const std::vector<FamilySpec>& specs,
                                  std::vector<FamilyTable> tables, double tol);

struct AdmissibilityRow {
  double lambda = 0;
  double sup_value = 0;            // sup_t mu_lambda(t)
  std::vector<double> products;    // TV on [0, q(1-eps)) times q(1-eps), per eps
};

// Diagnostics for the admissibility hypotheses: the sup values must trend to
// zero along the grid and the TV-quantile products must stay bounded.
struct AdmissibilityReport {
  std::vector<double> eps_grid;
  std::vector<AdmissibilityRow> rows;       // one per lambda, grid order
  std::vector<double> max_product;          // per eps, max over lambda
  bool sup_trends_to_zero = false;          // last sup <= 0.5 * first sup
  std::vector<bool> product_bounded;        // per eps, max_product <= threshold
  double threshold = 0;
};

AdmissibilityReport check_admissible(const std::vector<Density>& family,
                                     const std::vector<double>& lambda_grid,
                                     const std::vector<double>& eps_grid,
                                     double product_threshold);

// Test-family diagnostics: rho_lambda(0) = lambda, rho_lambda <= lambda
// everywhere (sampled at 10^3 points plus breakpoints), and the largest
// delta_eps with rho_lambda(T) >= lambda*(1-eps) for all T <= delta_eps/lambda
// (found by bisection, capped at 1).
struct TestFamilyReport {
  bool peak_equals_lambda = false;
  bool peak_dominates = false;
  double delta_eps = 0;
  std::vector<double> peak_errors;  // |rho_lambda(0) - lambda| per lambda
};

TestFamilyReport check_test_family(const std::vector<Density>& family,
                                   const std::vector<double>& lambda_grid, double eps);

// Shift-uniformity spot check: the remaining test-family condition asks the
// shifted values to stay near u_star uniformly over shifts below
// q[rho_lambda](r0). A sup over the continuum is not computable, so shifts
// are probed at the quartiles {0.25, 0.5, 0.75} of that quantile.
struct ShiftProbe {
  double lambda = 0;
  double shift = 0;
  double deviation = 0;  // sup-state |bracket midpoint - u_star|
  double width = 0;
};

struct ShiftUniformityReport {
  std::vector<ShiftProbe> probes;  // 3 per lambda, grid order
  double max_deviation = 0;
  double max_width = 0;
};

ShiftUniformityReport check_shift_uniformity(const StochasticGame& game,
                                             const std::vector<Density>& family,
                                             const std::vector<double>& lambda_grid, double r0,
                                             const StateFunction& u_star, double tail_eps);

}  // namespace tauber
