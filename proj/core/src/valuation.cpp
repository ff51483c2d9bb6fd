#include "tauber/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "tauber/errors.hpp"
#include "tauber/matrix_game.hpp"

namespace tauber {

StateFunction ValueBracket::midpoint() const {
  StateFunction mid(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
  return mid;
}

double ValueBracket::width() const {
  double w = 0;
  for (std::size_t i = 0; i < lo.size(); ++i) w = std::max(w, hi[i] - lo[i]);
  return w;
}

namespace {

void check_game(const StochasticGame& game) {
  const auto violations = validate(game);
  if (!violations.empty())
    raise(Errc::SchemaError, "invalid game: " + violations.front());
}

// Minimal integer horizon with tail(n) <= tail_eps.
long truncation_horizon(const Density& rho, double tail_eps) {
  if (tail_eps < 0 || tail_eps >= 1)
    raise(Errc::NonPositiveParameter, "tail_eps must lie in [0,1)");
  double cut;
  if (tail_eps == 0) {
    cut = rho.support_end();
    if (std::isinf(cut))
      raise(Errc::TailNeverSmall, "tail of " + rho.describe() + " never vanishes");
  } else {
    cut = rho.quantile(1.0 - tail_eps);
  }
  if (!(cut < static_cast<double>(kMaxHorizonStages)))
    raise(Errc::TailNeverSmall, rho.describe() + " needs more than 1e7 stages for tail_eps");
  long n = static_cast<long>(std::ceil(cut));
  if (n < 1) n = 1;
  while (rho.tail(static_cast<double>(n)) > tail_eps) {  // guard quantile rounding
    if (++n > kMaxHorizonStages)
      raise(Errc::TailNeverSmall, rho.describe() + " needs more than 1e7 stages for tail_eps");
  }
  return n;
}

// One backward stage: w <- theta * g + stage value of the continuation.
void backward_stage(const StochasticGame& game, double theta, StateFunction& w,
                    StateFunction& scratch) {
  const int n = game.state_count;
  for (int s = 0; s < n; ++s) {
    const int na = game.actions_max[s], nb = game.actions_min[s];
    double stage_value;
    if (na == 1 && nb == 1) {
      const auto& row = game.kernel[s][0][0];
      double continuation = 0;
      for (int t = 0; t < n; ++t) continuation += row[t] * w[t];
      stage_value = continuation;
    } else {
      MatrixGame m;
      m.rows = na;
      m.cols = nb;
      m.entries.resize(static_cast<std::size_t>(na) * nb);
      for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) {
          const auto& row = game.kernel[s][a][b];
          double continuation = 0;
          for (int t = 0; t < n; ++t) continuation += row[t] * w[t];
          m.at(a, b) = continuation;
        }
      }
      stage_value = matrix_value(m).value;
    }
    scratch[s] = theta * game.payoff[s] + stage_value;
  }
  w.swap(scratch);
}

StateFunction run_backward(const StochasticGame& game, const std::vector<double>& weights,
                           double terminal) {
  StateFunction w(game.state_count, terminal);
  StateFunction scratch(game.state_count, 0.0);
  for (std::size_t k = weights.size(); k-- > 0;) backward_stage(game, weights[k], w, scratch);
  return w;
}

void clamp_unit(StateFunction& v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

}  // namespace

ValueBracket value_backward(const StochasticGame& game, const Density& rho, double tail_eps) {
  check_game(game);
  const long horizon = truncation_horizon(rho, tail_eps);
  const StageWeights sw = stage_weights(rho, static_cast<std::size_t>(horizon));

  ValueBracket out;
  out.tail_bound = sw.tail;
  out.lo = run_backward(game, sw.weights, 0.0);
  out.hi = sw.tail == 0.0 ? out.lo : run_backward(game, sw.weights, sw.tail);
  clamp_unit(out.lo);
  clamp_unit(out.hi);
  for (int s = 0; s < game.state_count; ++s) out.hi[s] = std::max(out.hi[s], out.lo[s]);
  return out;
}

ValueBracket chain_series_value(const StochasticGame& game, const Density& rho,
                                double tail_eps) {
  check_game(game);
  if (!game.is_chain()) raise(Errc::NotAChain, "chain_series_value needs singleton action sets");
  const long horizon = truncation_horizon(rho, tail_eps);
  const StageWeights sw = stage_weights(rho, static_cast<std::size_t>(horizon));

  const int n = game.state_count;
  StateFunction acc(n, 0.0), cur(game.payoff), next(n, 0.0);
  for (long k = 0; k < horizon; ++k) {
    for (int s = 0; s < n; ++s) acc[s] += sw.weights[static_cast<std::size_t>(k)] * cur[s];
    for (int s = 0; s < n; ++s) {
      const auto& row = game.kernel[s][0][0];
      double dot = 0;
      for (int t = 0; t < n; ++t) dot += row[t] * cur[t];
      next[s] = dot;
    }
    cur.swap(next);
  }

  ValueBracket out;
  out.tail_bound = sw.tail;
  out.lo = acc;
  out.hi = acc;
  if (sw.tail > 0)
    for (double& x : out.hi) x += sw.tail;
  clamp_unit(out.lo);
  clamp_unit(out.hi);
  return out;
}

StateFunction abel_fixed_point(const StochasticGame& game, double lambda, double tol) {
  check_game(game);
  if (!(lambda > 0)) raise(Errc::NonPositiveParameter, "abel rate must be > 0");
  if (!(tol > 0)) raise(Errc::NonPositiveParameter, "tolerance must be > 0");
  const double beta = std::exp(-lambda);
  const double one_minus_beta = -std::expm1(-lambda);

  StateFunction v(game.payoff), next(game.state_count, 0.0), scratch(game.state_count, 0.0);
  const double threshold = tol * one_minus_beta;
  for (long it = 0; it < 100'000'000; ++it) {
    // next = val[(1-beta) g + beta K v]
    next = v;
    for (double& x : next) x *= beta;
    backward_stage(game, one_minus_beta, next, scratch);
    double residual = 0;
    for (int s = 0; s < game.state_count; ++s) residual = std::max(residual, std::abs(next[s] - v[s]));
    v.swap(next);
    if (residual <= threshold) return v;
  }
  raise(Errc::NumericalFailure, "value iteration failed to contract");
}

StateFunction cesaro_finite(const StochasticGame& game, long n) {
  check_game(game);
  if (n < 1) raise(Errc::NonPositiveParameter, "cesaro horizon must be >= 1");
  // Unit stage weights, one division at the end: affinely equivalent to
  // weights 1/n and exact for integer payoff patterns.
  const std::vector<double> unit(static_cast<std::size_t>(n), 1.0);
  StateFunction total = run_backward(game, unit, 0.0);
  for (double& x : total) x /= static_cast<double>(n);
  clamp_unit(total);
  return total;
}

double dpp_check(const StochasticGame& game, const Density& rho, int n, double tail_eps) {
  check_game(game);
  if (n < 1) raise(Errc::NonPositiveParameter, "cut must be a positive integer");
  const double tail_n = rho.tail(static_cast<double>(n));
  if (tail_n <= 1e-12) raise(Errc::ZeroTailMass, "density has no mass past the cut");

  const ValueBracket direct = value_backward(game, rho, tail_eps);
  const ValueBracket shifted = value_backward(game, rho.shift(static_cast<double>(n)), tail_eps);

  const StageWeights sw = stage_weights(rho, static_cast<std::size_t>(n));
  StateFunction scratch(game.state_count, 0.0);
  StateFunction lo(game.state_count), hi(game.state_count);
  for (int s = 0; s < game.state_count; ++s) {
    lo[s] = tail_n * shifted.lo[s];
    hi[s] = tail_n * shifted.hi[s];
  }
  for (std::size_t k = sw.weights.size(); k-- > 0;) {
    backward_stage(game, sw.weights[k], lo, scratch);
    backward_stage(game, sw.weights[k], hi, scratch);
  }

  const StateFunction direct_mid = direct.midpoint();
  double gap = 0;
  for (int s = 0; s < game.state_count; ++s) {
    const double composite_mid = 0.5 * (lo[s] + hi[s]);
    gap = std::max(gap, std::abs(direct_mid[s] - composite_mid));
  }
  return gap;
}

double step_payoff(const StepProcess& z, const Density& rho, const std::vector<double>& g,
                   long horizon) {
  if (z.cycle.empty()) raise(Errc::NonPositiveParameter, "step process needs a nonempty cycle");

  if (rho.kind() == DensityKind::Exponential && horizon < 0) {
    // theta_k = (1-beta) beta^k; the periodic tail sums in closed form.
    const double lambda = rho.exp_lambda();
    const double beta = std::exp(-lambda);
    const double w0 = -std::expm1(-lambda);
    double total = 0;
    double bk = 1.0;
    for (int s : z.prefix) {
      total += w0 * bk * g[static_cast<std::size_t>(s)];
      bk *= beta;
    }
    double cycle_sum = 0;
    double bi = 1.0;
    for (int s : z.cycle) {
      cycle_sum += bi * g[static_cast<std::size_t>(s)];
      bi *= beta;
    }
    const double beta_l = std::pow(beta, static_cast<double>(z.cycle.size()));
    total += w0 * bk * cycle_sum / (1.0 - beta_l);
    return total;
  }

  long n = horizon;
  if (n < 0) {
    double cut = rho.support_end();
    if (std::isinf(cut)) cut = rho.quantile(1.0 - 1e-12);
    n = cut >= 2e6 ? 2'000'000L  // residual bounded by tail(n)
                   : static_cast<long>(std::ceil(std::max(cut, 1.0))) + 1;
  }
  const StageWeights sw = stage_weights(rho, static_cast<std::size_t>(n));
  double total = 0;
  for (long k = 0; k < n; ++k)
    total += sw.weights[static_cast<std::size_t>(k)] *
             g[static_cast<std::size_t>(z.state_at(static_cast<std::size_t>(k)))];
  return total;
}

}  // namespace tauber
