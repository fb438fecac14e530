#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinor/observables.hpp"

namespace spinor {

/// Bosonic loss channel: E^(l) = sqrt((1-gamma)^l / l!) gamma^{n/2} a^l,
/// transmission gamma in (0, 1].
struct LossChannel {
  double gamma = 1.0;
  explicit LossChannel(double g);
  /// Truncated single-mode Kraus operators on occupations 0..nmax
  /// (l > nmax annihilates everything, so the family is complete).
  std::vector<Eigen::MatrixXd> kraus_single_mode(int nmax) const;
};

/// Number-basis dephasing: E^(l) = sqrt(kappa^l / l!) e^{-kappa n^2 / 2} n^l.
struct DephasingChannel {
  double kappa = 0.0;
  explicit DephasingChannel(double k);
  /// Truncated family with neglected tail weight below tail_tol.
  std::vector<Eigen::MatrixXd> kraus(int nmax, double tail_tol = 1e-12) const;
};

/// Scalar lambda with sum_l E† S^j E = lambda S^j under two-mode equal loss.
double loss_conjugate_spin(const LossChannel& channel, SpinAxis axis);

/// e^{-kappa/2} for the transverse axes, 1 for z.
double dephasing_conjugate_spin(const DephasingChannel& channel, SpinAxis axis);

/// Mean and variance of C = sum_n c_n on the product state rho^{tensor N}:
/// (N tr(rho c), N Var_rho(c)).
std::pair<double, double> scs_error_observable(const Eigen::MatrixXcd& rho,
                                               const SymmetricObservable& obs, int N);

/// Normalized noise sqrt(Var C)/<C> = (1/sqrt(N)) sqrt(Var c)/<c> of the
/// duplicated state; NaN sentinel when the microscopic mean vanishes.
double snr_scs(const Eigen::MatrixXcd& rho, const SymmetricObservable& obs, int N);

/// sqrt(Var Sz)/<Sz> ~ tan(2 chi)/N for the bipartite Schmidt state, N >> 1.
double snr_spinor_sz(double chi, int N);

struct LogicalError {
  double exact;
  double approx;
};

/// Majority-vote readout of N independent copies with microscopic flip
/// probability eps: exact binomial tail sum_{k <= N/2} C(N,k)(1-eps)^k
/// eps^{N-k} and the [4(1-eps)eps]^{N/2}/sqrt(N) approximation.
LogicalError logical_error_m1(double eps, int N);

/// Readout of the residually entangled register: geometric weight tail
/// sum_{k <= N/2} w_k / sum_k w_k with w_k = (1-eps)^k eps^{N-k}, and the
/// (eps/(1-eps))^{N/2} approximation.
LogicalError logical_error_m2(double eps, int N);

struct MonteCarloResult {
  double estimate;
  double ci_low;   // Wilson 95%
  double ci_high;
  std::int64_t errors;
  std::int64_t samples;
};

/// Stochastic cross-check of the majority-vote tail: Bernoulli flip counts,
/// ties decode as errors. Deterministic for a fixed seed; workers own
/// independent seeded streams and merge by count addition.
MonteCarloResult monte_carlo_majority(double eps, int N, std::int64_t samples,
                                      std::uint64_t seed);

}  // namespace spinor
