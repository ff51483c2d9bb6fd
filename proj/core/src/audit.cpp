#include "tauber/audit.hpp"

#include <algorithm>
#include <cmath>

#include "tauber/errors.hpp"

namespace tauber {

namespace {

// Mass-preserving step rendition of rho on [lo, hi) over the given cut
// points: each cell's level is its exact mean, so cell masses match rho.
void append_mass_cells(const Density& rho, const std::vector<double>& cuts,
                       std::vector<double>& breaks, std::vector<double>& levels) {
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    if (!(width > 0)) continue;
    const double mass = rho.cdf(cuts[i + 1]) - rho.cdf(cuts[i]);
    breaks.push_back(cuts[i]);
    levels.push_back(std::max(mass, 0.0) / width);
  }
}

std::vector<double> uniform_cuts(double lo, double hi, std::size_t cells) {
  std::vector<double> cuts(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    cuts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  cuts.front() = lo;
  cuts.back() = hi;
  return cuts;
}

// Cut points for [lo, hi): a uniform grid of `cells`, refined by any interior
// breakpoints of rho so piecewise-constant inputs are reproduced exactly.
std::vector<double> window_cuts(const Density& rho, double lo, double hi, std::size_t cells) {
  std::vector<double> cuts = uniform_cuts(lo, hi, cells);
  if (rho.kind() == DensityKind::PiecewiseConstant) {
    for (double b : rho.breakpoints())
      if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  return cuts;
}

}  // namespace

PcApproximation pc_approximate(const Density& rho, int n) {
  if (n < 4) raise(Errc::BinCountTooSmall, "pc_approximate needs n >= 4");
  const double lo = rho.quantile(1.0 / n);
  const double hi = rho.quantile(1.0 - 1.0 / n);
  if (!(hi > lo)) raise(Errc::BinCountTooSmall, "quantile window is degenerate");

  // Enough cells that the window L1 error (1/2 * cell width * window TV for
  // the monotone kinds) stays under 1/n; exact anyway for step inputs.
  std::size_t cells = 16;
  if (rho.kind() != DensityKind::PiecewiseConstant) {
    const double tv = total_variation(rho, lo, hi);
    const double needed = 0.5 * (hi - lo) * tv * static_cast<double>(n);
    cells = static_cast<std::size_t>(std::clamp(needed * 2.0, 16.0, 2.0e6));
  }

  std::vector<double> breaks, levels;
  append_mass_cells(rho, window_cuts(rho, lo, hi, cells), breaks, levels);
  breaks.push_back(hi);
  Density out = Density::piecewise_constant(std::move(breaks), std::move(levels),
                                            /*renormalize=*/true);
  return {out, l1_distance(rho, out)};
}

Density regularize_support(const Density& mu_hat, double epsilon) {
  if (!(epsilon > 0) || !(epsilon < 1))
    raise(Errc::QuantileOutOfRange, "regularization epsilon must lie in (0,1)");
  const double q = mu_hat.quantile(1.0 - epsilon);
  const double addend = epsilon / q;

  const std::vector<double> cuts = window_cuts(mu_hat, 0.0, q, 10'000);
  std::vector<double> breaks, levels;
  append_mass_cells(mu_hat, cuts, breaks, levels);
  for (auto& level : levels) level += addend;
  breaks.push_back(q);
  return Density::piecewise_constant(std::move(breaks), std::move(levels),
                                     /*renormalize=*/true);
}

ProofConstants proof_constants(double epsilon, double M, double r0) {
  if (!(epsilon > 0) || !(epsilon <= 0.1))
    raise(Errc::NonPositiveParameter, "epsilon must lie in (0, 1/10]");
  if (!(M > 1)) raise(Errc::NonPositiveParameter, "M must exceed 1");
  if (!(r0 > 0) || !(r0 < 0.5)) raise(Errc::NonPositiveParameter, "r0 must lie in (0, 1/2)");

  const double log_inv_eps = std::log(1.0 / epsilon);
  const double log1p_eps = std::log1p(epsilon);
  auto admissible = [&](long k) {
    const double kd = static_cast<double>(k);
    return kd > epsilon / r0 && kd * epsilon > log_inv_eps && kd * epsilon * log1p_eps > M;
  };

  const double k_guess =
      std::max({epsilon / r0, log_inv_eps / epsilon, M / (epsilon * log1p_eps), 1.0});
  if (!(k_guess < 1e12))
    raise(Errc::NumericalFailure, "schedule size k would exceed 1e12");
  long k = static_cast<long>(k_guess) + 1;
  while (!admissible(k)) ++k;
  while (k > 1 && admissible(k - 1)) --k;

  ProofConstants c = proof_constants_with_k(epsilon, k);
  c.M = M;
  c.r0 = r0;
  return c;
}

ProofConstants proof_constants_with_k(double epsilon, long k) {
  if (!(epsilon > 0) || !(epsilon < 1))
    raise(Errc::NonPositiveParameter, "epsilon must lie in (0,1)");
  if (k < 1) raise(Errc::NonPositiveParameter, "k must be a positive integer");
  ProofConstants c;
  c.epsilon = epsilon;
  c.M = 0;
  c.r0 = 0;
  c.k = k;
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  c.p = std::pow(epsilon, 1.0 / kk);
  c.delta = 1.0 - c.p;
  c.kappa = epsilon * c.delta;
  return c;
}

QuantilePartition quantile_partition(const Density& mu, const ProofConstants& constants) {
  const long k = constants.k;
  const double p = constants.p;
  const long cells = k * k;
  if (cells > 20'000'000)
    raise(Errc::NumericalFailure, "partition would need " + std::to_string(cells) + " cells");

  QuantilePartition part;
  part.epsilon = constants.epsilon;
  part.k = k;
  part.p = p;
  part.tau.resize(cells + 1);
  part.lambdas.resize(cells);
  part.tau[0] = 0.0;

  for (long m = 1; m <= cells; ++m) {
    const double pm = std::pow(p, static_cast<double>(m));
    const double pm_prev = std::pow(p, static_cast<double>(m - 1));
    part.tau[m] = mu.quantile(1.0 - pm);
    const double width = part.tau[m] - part.tau[m - 1];
    if (!(width > 0))
      raise(Errc::DegenerateInterval, "quantiles coincide at cell " + std::to_string(m));
    part.lambdas[m - 1] = (pm_prev - pm) / width;
  }
  return part;
}

TvCorrection tv_correct(const Density& mu, const QuantilePartition& partition, double M, long k,
                        double epsilon) {
  const double threshold = M / (static_cast<double>(k) * epsilon);
  const long cells = static_cast<long>(partition.lambdas.size());

  std::vector<int> incorrect;
  for (long m = 1; m <= cells; ++m) {
    const double tv = log_total_variation(mu, partition.tau[m - 1], partition.tau[m]);
    if (tv > threshold) incorrect.push_back(static_cast<int>(m));
  }
  if (incorrect.empty()) return {mu, 0, {}};

  const double tau_end = partition.tau[cells];
  auto is_incorrect = [&](long m) {
    return std::binary_search(incorrect.begin(), incorrect.end(), static_cast<int>(m));
  };

  std::vector<double> breaks, levels;
  for (long m = 1; m <= cells; ++m) {
    const double lo = partition.tau[m - 1], hi = partition.tau[m];
    const double cell_mass = mu.cdf(hi) - mu.cdf(lo);
    if (is_incorrect(m)) {
      breaks.push_back(lo);
      levels.push_back(cell_mass / (hi - lo));
    } else if (mu.kind() == DensityKind::PiecewiseConstant) {
      append_mass_cells(mu, window_cuts(mu, lo, hi, 1), breaks, levels);
    } else {
      // Closed-form density on a correct cell: fine mass-preserving rendition.
      append_mass_cells(mu, uniform_cuts(lo, hi, 32), breaks, levels);
    }
  }

  // Beyond tau_{k^2} the density is kept as-is (exactly for PC inputs, as a
  // fine mass rendition otherwise).
  const double far = std::min(mu.support_end(), mu.quantile(1.0 - 1e-9));
  if (far > tau_end) {
    if (mu.kind() == DensityKind::PiecewiseConstant) {
      append_mass_cells(mu, window_cuts(mu, tau_end, mu.support_end(), 1), breaks, levels);
      breaks.push_back(mu.support_end());
    } else {
      append_mass_cells(mu, uniform_cuts(tau_end, far, 4096), breaks, levels);
      breaks.push_back(far);
    }
  } else {
    breaks.push_back(tau_end);
  }

  Density mu_tilde =
      Density::piecewise_constant(std::move(breaks), std::move(levels), /*renormalize=*/true);
  return {mu_tilde, static_cast<int>(incorrect.size()), incorrect};
}

}  // namespace tauber
