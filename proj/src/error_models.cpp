#include "spinor/error_models.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "spinor/log_space.hpp"
#include "spinor/parallel.hpp"

namespace spinor {

LossChannel::LossChannel(double g) : gamma(g) {
  if (!(g > 0.0) || g > 1.0)
    throw std::invalid_argument("LossChannel: transmission gamma must lie in (0, 1]");
}

std::vector<Eigen::MatrixXd> LossChannel::kraus_single_mode(int nmax) const {
  if (nmax < 0) throw std::invalid_argument("kraus_single_mode: nmax >= 0 required");
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(static_cast<size_t>(nmax) + 1);
  for (int l = 0; l <= nmax; ++l) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    for (int n = l; n <= nmax; ++n) {
      if (l > 0 && gamma >= 1.0) break;  // lossless channel: only l = 0 acts
      // sqrt((1-gamma)^l / l!) gamma^{(n-l)/2} sqrt(n!/(n-l)!)
      double lw = (n - l) * std::log(gamma) + log_factorial(n) - log_factorial(n - l) -
                  log_factorial(l);
      if (l > 0) lw += l * std::log1p(-gamma);
      E(n - l, n) = std::exp(0.5 * lw);
    }
    ops.push_back(std::move(E));
  }
  return ops;
}

DephasingChannel::DephasingChannel(double k) : kappa(k) {
  if (k < 0.0) throw std::invalid_argument("DephasingChannel: kappa >= 0 required");
}

std::vector<Eigen::MatrixXd> DephasingChannel::kraus(int nmax, double tail_tol) const {
  if (nmax < 0) throw std::invalid_argument("kraus: nmax >= 0 required");
  // Per occupation n the weights are Poisson(kappa n^2); extend l until the
  // worst-case neglected tail is below tail_tol.
  int lmax = 0;
  if (kappa > 0.0 && nmax > 0) {
    const double lambda = kappa * static_cast<double>(nmax) * nmax;
    double cdf = std::exp(-lambda), term = std::exp(-lambda);
    while (1.0 - cdf > tail_tol && lmax < 100000) {
      ++lmax;
      term *= lambda / lmax;
      cdf += term;
    }
  }
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(static_cast<size_t>(lmax) + 1);
  for (int l = 0; l <= lmax; ++l) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
      if (l > 0 && (kappa == 0.0 || n == 0)) continue;  // kappa^l n^l = 0
      const double lw = 0.5 * (l * std::log(kappa * static_cast<double>(n) * n) -
                               log_factorial(l)) -
                        0.5 * kappa * static_cast<double>(n) * n;
      E(n, n) = l == 0 ? std::exp(-0.5 * kappa * static_cast<double>(n) * n) : std::exp(lw);
    }
    ops.push_back(std::move(E));
  }
  return ops;
}

double loss_conjugate_spin(const LossChannel& channel, SpinAxis) { return channel.gamma; }

double dephasing_conjugate_spin(const DephasingChannel& channel, SpinAxis axis) {
  return axis == SpinAxis::Z ? 1.0 : std::exp(-channel.kappa / 2.0);
}

std::pair<double, double> scs_error_observable(const Eigen::MatrixXcd& rho,
                                               const SymmetricObservable& obs, int N) {
  if (rho.rows() != rho.cols() || rho.rows() != obs.c.rows())
    throw std::invalid_argument("scs_error_observable: dimension mismatch");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("scs_error_observable: rho must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("scs_error_observable: rho must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("scs_error_observable: rho is not positive semidefinite");
  const double mean = (rho * obs.c).trace().real();
  const double second = (rho * obs.c * obs.c).trace().real();
  return {N * mean, N * (second - mean * mean)};
}

double snr_scs(const Eigen::MatrixXcd& rho, const SymmetricObservable& obs, int N) {
  auto [mean, var] = scs_error_observable(rho, obs, N);
  if (mean == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(var) / mean;
}

double snr_spinor_sz(double chi, int N) { return std::tan(2.0 * chi) / N; }

LogicalError logical_error_m1(double eps, int N) {
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("logical_error_m1: eps in [0, 1]");
  if (N < 1) throw std::invalid_argument("logical_error_m1: N >= 1 required");
  if (eps == 0.0) return {0.0, 0.0};
  const int kmax = N / 2;  // ties (k = N/2, N even) count as errors
  Eigen::ArrayXd logs(kmax + 1);
  for (int k = 0; k <= kmax; ++k)
    logs[k] = log_binomial(N, k) + k * std::log1p(-eps) + (N - k) * std::log(eps);
  const double exact = std::exp(log_sum_exp(logs));
  const double approx =
      std::exp(0.5 * N * std::log(4.0 * (1.0 - eps) * eps)) / std::sqrt(static_cast<double>(N));
  return {exact, approx};
}

LogicalError logical_error_m2(double eps, int N) {
  if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("logical_error_m2: eps in [0, 1)");
  if (N < 1) throw std::invalid_argument("logical_error_m2: N >= 1 required");
  if (eps == 0.0) return {0.0, 0.0};
  const int kmax = N / 2;
  Eigen::ArrayXd num(kmax + 1), den(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double lw = k * std::log1p(-eps) + (N - k) * std::log(eps);
    if (k <= kmax) num[k] = lw;
    den[k] = lw;
  }
  const double exact = std::exp(log_sum_exp(num) - log_sum_exp(den));
  const double approx = std::exp(0.5 * N * (std::log(eps) - std::log1p(-eps)));
  return {exact, approx};
}

MonteCarloResult monte_carlo_majority(double eps, int N, std::int64_t samples,
                                      std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("monte_carlo_majority: samples >= 1000");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("monte_carlo_majority: eps in [0, 1]");

  // Raw-integer Bernoulli threshold keeps the stream portable across stdlibs.
  const std::uint64_t thr =
      eps >= 1.0 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::ldexp(eps, 64));

  constexpr std::int64_t kChunk = 1 << 16;
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::int64_t> chunk_errors(static_cast<size_t>(chunks), 0);
  parallel_for(chunks, [&](std::int64_t c) {
    // splitmix64 spreads (seed, chunk) into an independent stream seed
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(c + 1);
    x ^= x >> 30; x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27; x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    std::mt19937_64 rng(x);
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(samples, lo + kChunk);
    std::int64_t errs = 0;
    for (std::int64_t s = lo; s < hi; ++s) {
      int flips = 0;
      for (int i = 0; i < N; ++i) flips += rng() < thr ? 1 : 0;
      if (2 * flips >= N) ++errs;  // tie decodes as an error
    }
    chunk_errors[static_cast<size_t>(c)] = errs;
  });

  std::int64_t errors = 0;
  for (std::int64_t e : chunk_errors) errors += e;

  const double n = static_cast<double>(samples);
  const double phat = errors / n;
  const double z = 1.959963984540054;  // 95%
  const double z2 = z * z;
  const double center = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {phat, center - half, center + half, errors, samples};
}

}  // namespace spinor
