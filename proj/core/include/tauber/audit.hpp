#pragma once

#include <vector>

#include "tauber/density.hpp"

namespace tauber {

// Piecewise-constant approximation of rho supported on the quantile window
// [q(1/n), q(1-1/n)], renormalized to unit mass. l1_error is the actually
// computed L1 distance to rho; it is bounded by 5/n.
struct PcApproximation {
  Density density;
  double l1_error = 0;
};

PcApproximation pc_approximate(const Density& rho, int n);

// mu(t) = mu_hat(t) + eps / q[mu_hat](1-eps) on [0, q[mu_hat](1-eps)), zero
// after, returned as a PiecewiseConstant with mass-preserving cells. Unit
// mass exactly; L1 distance to mu_hat <= 2*eps.
Density regularize_support(const Density& mu_hat, double epsilon);

struct ProofConstants {
  double epsilon = 0;
  double M = 0;
  double r0 = 0;
  long k = 0;      // schedule size parameter; the partition has k^2 cells
  double p = 0;    // epsilon^(1/k^2)
  double delta = 0;  // 1 - p
  double kappa = 0;  // epsilon * (1 - p)
};

// Minimal integer k with  k > eps/r0,  k*eps > ln(1/eps),  k*eps*ln(1+eps) > M,
// plus the derived p, delta, kappa.
ProofConstants proof_constants(double epsilon, double M, double r0);

// Constants with a caller-chosen k (small-k partitions in tests and audits).
ProofConstants proof_constants_with_k(double epsilon, long k);

struct QuantilePartition {
  double epsilon = 0;
  long k = 0;
  double p = 0;
  std::vector<double> tau;      // size k^2 + 1, tau[0] = 0, tau[m] = q(1 - p^m)
  std::vector<double> lambdas;  // per-cell average level, size k^2
};

// The k^2 quantile cells [tau_{m-1}, tau_m) of mu with their mass-average
// levels; cell masses are p^(m-1) * (1-p).
QuantilePartition quantile_partition(const Density& mu, const ProofConstants& constants);

struct TvCorrection {
  Density mu_tilde;
  int incorrect_count = 0;
  std::vector<int> incorrect_cells;  // 1-based cell indices that were flattened
};

// Flattens every cell whose log-TV exceeds M/(k*eps) to its mass average;
// cell masses are unchanged, so mu_tilde keeps unit mass and
// l1(mu_tilde, mu) <= 2 * incorrect_count * (1-p).
TvCorrection tv_correct(const Density& mu, const QuantilePartition& partition, double M,
                        long k, double epsilon);

}  // namespace tauber
