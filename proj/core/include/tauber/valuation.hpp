#pragma once

#include "tauber/density.hpp"
#include "tauber/game.hpp"

namespace tauber {

// Per-state interval [lo, hi] rigorously containing the exact weighted
// value; hi - lo never exceeds the declared truncation tail mass.
struct ValueBracket {
  StateFunction lo;
  StateFunction hi;
  double tail_bound = 0;

  StateFunction midpoint() const;
  double width() const;  // sup-state hi - lo
};

// Backward induction over the stage weights of rho, truncated at the first
// horizon with tail <= tail_eps. The recursion runs twice, with terminal
// value 0 (lo) and tail (hi). Stage reward theta_n * g(state) is
// action-independent, so the stage LP only sees the continuation matrix.
ValueBracket value_backward(const StochasticGame& game, const Density& rho, double tail_eps);

// Direct series sum_n theta_n * (P^n g) for games without choices; the
// independent oracle against value_backward.
ValueBracket chain_series_value(const StochasticGame& game, const Density& rho,
                                double tail_eps);

// Fixed point of v = val[(1-beta) g + beta K v], beta = exp(-lambda) — the
// stationary form the exponential density's memorylessness induces. Value
// iteration stops at residual <= tol*(1-beta), so the returned error is
// at most tol.
StateFunction abel_fixed_point(const StochasticGame& game, double lambda, double tol);

// Exact n-stage equal-weight value (tail 0, degenerate bracket).
StateFunction cesaro_finite(const StochasticGame& game, long n);

// Sup-norm gap between the direct value of rho and the composite payoff
// (n stages of rho's weights, then tail(n) times the shifted game's value).
// Bounded by 2*tail_eps + 1e-9 when the dynamic programming principle holds.
double dpp_check(const StochasticGame& game, const Density& rho, int n, double tail_eps);

// sum_n theta_n * g(z_n) for a step process; eventually periodic tails under
// Exponential densities are summed in closed form, otherwise the series is
// truncated once the density tail drops below 1e-12 (or at `horizon`).
double step_payoff(const StepProcess& z, const Density& rho, const std::vector<double>& g,
                   long horizon = -1);

inline constexpr long kMaxHorizonStages = 10'000'000;

}  // namespace tauber
