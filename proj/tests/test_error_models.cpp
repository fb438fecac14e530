#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "spinor/error_models.hpp"

using namespace spinor;

TEST_CASE("kraus families are complete on truncated spaces") {
  const int nmax = 10;
  for (double gamma : {0.3, 0.8, 1.0}) {
    const auto ops = LossChannel(gamma).kraus_single_mode(nmax);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    for (const auto& E : ops) acc += E.transpose() * E;
    CHECK((acc - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff() < 1e-9);
  }
  for (double kappa : {0.0, 0.5, 2.0}) {
    const auto ops = DephasingChannel(kappa).kraus(nmax);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    for (const auto& E : ops) acc += E.transpose() * E;
    CHECK((acc - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK_THROWS_AS(LossChannel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LossChannel(1.5), std::invalid_argument);
  CHECK_THROWS_AS(DephasingChannel(-0.1), std::invalid_argument);
}

TEST_CASE("loss rescales collective spins uniformly") {
  CHECK(loss_conjugate_spin(LossChannel(1.0), SpinAxis::X) == 1.0);
  CHECK(loss_conjugate_spin(LossChannel(0.8), SpinAxis::Z) == doctest::Approx(0.8));

  // explicit Kraus sums on the truncated two-mode space
  const int N = 10;
  const int d = N + 1;
  Eigen::MatrixXcd adag = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) adag(n, n - 1) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd a = adag.adjoint();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd A = oracle::kron(a, I), B = oracle::kron(I, a);
  const Eigen::MatrixXcd sx = A.adjoint() * B + B.adjoint() * A;
  const Eigen::MatrixXcd sy =
      Complex(0, -1) * A.adjoint() * B + Complex(0, 1) * B.adjoint() * A;
  const Eigen::MatrixXcd sz = A.adjoint() * A - B.adjoint() * B;
  const Eigen::MatrixXcd number = A.adjoint() * A + B.adjoint() * B;

  for (double gamma : {0.8, 0.45}) {
    const auto ops = LossChannel(gamma).kraus_single_mode(N);
    for (const Eigen::MatrixXcd* S : {&sx, &sy, &sz, &number}) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d * d, d * d);
      for (const auto& Ea : ops)
        for (const auto& Eb : ops) {
          const Eigen::MatrixXcd E = oracle::kron(Ea.cast<Complex>(), Eb.cast<Complex>());
          acc += E.adjoint() * (*S) * E;
        }
      CHECK((acc - gamma * (*S)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("number-basis dephasing damps only the transverse spins") {
  CHECK(dephasing_conjugate_spin(DephasingChannel(0.0), SpinAxis::X) == doctest::Approx(1.0));
  CHECK(dephasing_conjugate_spin(DephasingChannel(0.5), SpinAxis::Y) ==
        doctest::Approx(std::exp(-0.25)));
  CHECK(dephasing_conjugate_spin(DephasingChannel(0.5), SpinAxis::Z) == doctest::Approx(1.0));

  const int N = 10;
  const int d = N + 1;
  Eigen::MatrixXcd adag = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) adag(n, n - 1) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd a = adag.adjoint();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd A = oracle::kron(a, I), B = oracle::kron(I, a);
  const Eigen::MatrixXcd sx = A.adjoint() * B + B.adjoint() * A;
  const Eigen::MatrixXcd sz = A.adjoint() * A - B.adjoint() * B;

  for (double kappa : {0.5, 1.5}) {
    const auto ops = DephasingChannel(kappa).kraus(N);
    Eigen::MatrixXcd accx = Eigen::MatrixXcd::Zero(d * d, d * d);
    Eigen::MatrixXcd accz = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const auto& E : ops) {
      const Eigen::MatrixXcd Em = oracle::kron(E.cast<Complex>(), I);
      accx += Em.adjoint() * sx * Em;
      accz += Em.adjoint() * sz * Em;
    }
    CHECK((accx - std::exp(-kappa / 2.0) * sx).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((accz - sz).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("product-state error observables") {
  const int N = 20;
  // pure state consistency
  Eigen::VectorXcd psi(2);
  psi << std::cos(0.4), std::sin(0.4);
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const SymmetricObservable z = single_site_spin(1, 1, SpinAxis::Z);
  const auto [mean, var] = scs_error_observable(rho, z, N);
  const ScsState scs = scs_from_micro(psi, 1, N);
  CHECK(mean == doctest::Approx(scs_expectation(scs, z)).epsilon(1e-12));
  CHECK(var == doctest::Approx(scs_covariance(scs, z, z)).epsilon(1e-12));

  // fully mixed qubit
  const auto [m0, v0] =
      scs_error_observable(Eigen::MatrixXcd::Identity(2, 2) / 2.0, z, N);
  CHECK(m0 == doctest::Approx(0.0));
  CHECK(v0 == doctest::Approx(static_cast<double>(N)));

  // bit-flip mixture
  const double p = 0.23;
  Eigen::MatrixXcd flip = Eigen::MatrixXcd::Zero(2, 2);
  flip(0, 0) = 1.0 - p;
  flip(1, 1) = p;
  const auto [m1, v1] = scs_error_observable(flip, z, N);
  CHECK(m1 == doctest::Approx(N * (1.0 - 2.0 * p)).epsilon(1e-12));
  CHECK(v1 == doctest::Approx(N * (1.0 - std::pow(1.0 - 2.0 * p, 2))).epsilon(1e-12));

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(0, 0) = -0.5;
  bad(1, 1) = 1.5;
  CHECK_THROWS_AS(scs_error_observable(bad, z, N), std::invalid_argument);
}

TEST_CASE("noise-to-signal scalings") {
  // N copies divide the normalized noise by sqrt(N)
  Eigen::VectorXcd tilted(2);
  const double theta = std::numbers::pi / 4.0;
  tilted << std::cos(theta / 2.0), std::sin(theta / 2.0);
  const Eigen::MatrixXcd rho = tilted * tilted.adjoint();
  const SymmetricObservable z = single_site_spin(1, 1, SpinAxis::Z);
  // microscopic ratio is exactly 1 at this angle
  CHECK(snr_scs(rho, z, 100) == doctest::Approx(0.1).epsilon(1e-12));

  CHECK(snr_spinor_sz(std::numbers::pi / 8.0, 50) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(snr_spinor_sz(0.0, 50) == doctest::Approx(0.0));
  // vanishing mean flags a sentinel
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  CHECK(std::isnan(snr_scs(mixed, z, 100)));
}

TEST_CASE("majority-vote logical error") {
  {
    const auto [exact, approx] = logical_error_m1(0.0, 50);
    CHECK(exact == 0.0);
    CHECK(approx == 0.0);
  }
  {
    const auto [exact, approx] = logical_error_m1(0.1, 50);
    CHECK(exact < 1e-8);
    CHECK(exact / approx < 3.0);
    CHECK(approx / exact < 3.0);
  }
  {
    const auto [exact, approx] = logical_error_m1(0.5, 41);
    CHECK(exact >= 0.5);
    (void)approx;
  }
  // exact tail against direct binomial accumulation
  const int N = 21;
  const double eps = 0.2;
  double tail = 0.0;
  for (int k = 0; k <= N / 2; ++k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (N - i + 1) / i;
    tail += b * std::pow(1.0 - eps, k) * std::pow(eps, N - k);
  }
  CHECK(logical_error_m1(eps, N).exact == doctest::Approx(tail).epsilon(1e-12));
}

TEST_CASE("residual-entanglement logical error") {
  {
    const auto [exact, approx] = logical_error_m2(1e-12, 50);
    CHECK(exact < 1e-100);
    CHECK(approx < 1e-100);
  }
  {
    const auto [exact, approx] = logical_error_m2(0.1, 50);
    // geometric weights: scale (eps/(1-eps))^{N/2} = (1/9)^25
    CHECK(std::log10(exact) == doctest::Approx(25.0 * std::log10(1.0 / 9.0)).epsilon(0.05));
    CHECK(exact / approx < 2.0);
    CHECK(approx / exact < 2.0);
  }
  {
    const auto [exact, approx] = logical_error_m2(0.3, 50);
    CHECK(exact / approx < 2.0);
    CHECK(approx / exact < 2.0);
  }
  // geometric-series oracle
  const int N = 12;
  const double eps = 0.3;
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double w = std::pow(1.0 - eps, k) * std::pow(eps, N - k);
    if (k <= N / 2) num += w;
    den += w;
  }
  CHECK(logical_error_m2(eps, N).exact == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("error curves are ordered") {
  for (int N : {10, 20, 35, 50}) {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      const double eps = 0.5 * i / 40.0;
      const double v = logical_error_m1(eps, N).exact;
      CHECK(v >= prev - 1e-15);
      prev = v;
      if (eps > 0.0 && eps <= 0.4)
        CHECK(logical_error_m2(eps, N).exact <= logical_error_m1(eps, N).exact + 1e-15);
    }
  }
  CHECK(logical_error_m1(0.2, 50).exact < logical_error_m1(0.2, 30).exact);
}

TEST_CASE("sampled majority vote") {
  {
    const MonteCarloResult mc = monte_carlo_majority(0.0, 21, 100000, 0xC0FFEE);
    CHECK(mc.errors == 0);
  }
  for (double eps : {0.2, 0.5}) {
    const MonteCarloResult mc = monte_carlo_majority(eps, 21, 100000, 0xC0FFEE);
    const double exact = logical_error_m1(eps, 21).exact;
    const double n = static_cast<double>(mc.samples);
    const double phat = static_cast<double>(mc.errors) / n;
    const double sigma = std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / n);
    CHECK(std::abs(phat - exact) <= 3.0 * sigma + 1e-9);
    CHECK(mc.ci_low <= mc.estimate);
    CHECK(mc.estimate <= mc.ci_high);
  }
  // determinism under a fixed seed
  const MonteCarloResult a = monte_carlo_majority(0.3, 15, 50000, 7);
  const MonteCarloResult b = monte_carlo_majority(0.3, 15, 50000, 7);
  CHECK(a.errors == b.errors);
  CHECK_THROWS_AS(monte_carlo_majority(0.3, 15, 10, 7), std::invalid_argument);
}
