#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "spinor/wigner.hpp"

using namespace spinor;

namespace {
constexpr double kPi = std::numbers::pi;

SpinorState coherent(double theta, double phi, int N) {
  Eigen::VectorXcd psi(2);
  psi << std::cos(theta / 2.0), std::polar(1.0, phi) * std::sin(theta / 2.0);
  return build_unipartite_spinor(psi, N);
}

}  // namespace

TEST_CASE("coupling coefficient values and selection rules") {
  CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(clebsch_gordan_exact(1, 1, 1, -1, 0, 0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  // M != m1 + m2 vanishes by the selection rule
  CHECK(clebsch_gordan(4, 2, 4, 0, 4, 4) == 0.0);
  CHECK(clebsch_gordan(2, 2, 2, 2, 0, 0) == 0.0);
  // stretched antisymmetric-channel value fixes the sign convention
  for (int two_j : {1, 2, 5, 9}) {
    const double v = clebsch_gordan_exact(two_j, two_j, two_j, -two_j, 0, 0);
    CHECK(v == doctest::Approx(1.0 / std::sqrt(two_j + 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("double-precision coupling matches the exact rational path") {
  double worst = 0.0;
  for (int two_j = 1; two_j <= 12; ++two_j) {
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      for (int two_mp = -two_j; two_mp <= two_j; two_mp += 2) {
        for (int two_L = std::abs(two_m - two_mp); two_L <= 2 * two_j; two_L += 2) {
          const double a = clebsch_gordan(two_j, two_m, two_j, -two_mp, two_L, two_m - two_mp);
          const double b =
              clebsch_gordan_exact(two_j, two_m, two_j, -two_mp, two_L, two_m - two_mp);
          worst = std::max(worst, std::abs(a - b));
        }
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("coupling coefficients are orthogonal up to large spins") {
  double worst = 0.0;
  const int two_j = 40;
  for (int two_M : {0, 2, 14}) {
    for (int L = two_M / 2; L <= two_j; ++L) {
      for (int Lp = L; Lp <= two_j; ++Lp) {
        double acc = 0.0;
        for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
          const int two_mp = two_M - two_m;
          if (std::abs(two_mp) > two_j) continue;
          acc += clebsch_gordan(two_j, two_m, two_j, two_mp, 2 * L, two_M) *
                 clebsch_gordan(two_j, two_m, two_j, two_mp, 2 * Lp, two_M);
        }
        worst = std::max(worst, std::abs(acc - (L == Lp ? 1.0 : 0.0)));
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("spherical harmonic normalization") {
  CHECK(spherical_harmonic(0, 0, 0.7, 0.0).real() ==
        doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-14));
  CHECK(spherical_harmonic(1, 0, 1.1, 2.0).real() ==
        doctest::Approx(std::sqrt(3.0 / (4.0 * kPi)) * std::cos(1.1)).epsilon(1e-13));
  CHECK(spherical_harmonic(2, 3, 1.0, 1.0) == Complex(0.0, 0.0));

  const AngularGrid g = AngularGrid::regular(48, 96);
  CHECK(g.theta_weight.sum() == doctest::Approx(2.0).epsilon(1e-13));
  for (auto [L, M] :
       std::vector<std::pair<int, int>>{{0, 0}, {3, 2}, {10, -7}, {20, 20}, {17, 0}}) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < g.theta.size(); ++i)
      for (Eigen::Index j = 0; j < g.phi.size(); ++j)
        acc += std::norm(spherical_harmonic(L, M, g.theta[i], g.phi[j])) * g.theta_weight[i] *
               (2.0 * kPi / static_cast<double>(g.phi.size()));
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-9));
  }
  // conjugation symmetry fixes the negative orders
  const Complex plus = spherical_harmonic(5, 3, 0.9, 1.3);
  const Complex minus = spherical_harmonic(5, -3, 0.9, 1.3);
  CHECK(std::abs(minus - std::conj(plus) * std::pow(-1.0, 3)) < 1e-13);
}

TEST_CASE("distribution of a polarized state peaks at its angles") {
  const int N = 10;
  const double th0 = 1.9, ph0 = 2.45;
  const AngularGrid g = AngularGrid::regular(64, 64);
  const WignerSlice w = wigner_unipartite(coherent(th0, ph0, N), g);
  CHECK(w.max_imag_residue < 1e-9);
  CHECK(w.convention_tag == "paper-literal");
  Eigen::Index bi = 0, bj = 0;
  w.values.maxCoeff(&bi, &bj);
  double dphi = std::abs(g.phi[bj] - ph0);
  dphi = std::min(dphi, 2.0 * kPi - dphi);
  CHECK(std::abs(g.theta[bi] - th0) <= kPi / 64.0 + 1e-12);
  CHECK(dphi <= 2.0 * kPi / 64.0 + 1e-12);
}

TEST_CASE("correlated slice mirrors the conjugate coherent state") {
  const int N = 10;
  const SpinorState epr = build_epr(N);
  const AngularGrid g = AngularGrid::regular(48, 48);
  const WignerSlice slice = wigner_bipartite_slice(epr, g, kPi / 2.0, 0.0);
  CHECK(slice.max_imag_residue < 1e-9);
  CHECK(slice.has_fixed);
  Eigen::Index bi = 0, bj = 0;
  slice.values.maxCoeff(&bi, &bj);
  // peak near theta1 = theta2 and phi1 = -phi2 (= 0 here)
  CHECK(std::abs(g.theta[bi] - kPi / 2.0) < 0.15);
  double dphi = std::min(g.phi[bj], 2.0 * kPi - g.phi[bj]);
  CHECK(dphi < 0.2);

  // the slice is proportional to the projected state's distribution
  const SpinorState proj = project_second_ensemble(epr, kPi / 2.0, 0.0);
  const WignerSlice pw = wigner_unipartite(proj, g);
  Eigen::Index pi_ = 0, pj = 0;
  pw.values.maxCoeff(&pi_, &pj);
  CHECK(pi_ == bi);
  CHECK(pj == bj);
}

TEST_CASE("projection produces the azimuth-flipped coherent state") {
  const int N = 10;
  const SpinorState epr = build_epr(N);
  for (auto [t2, p2] : std::vector<std::pair<double, double>>{
           {kPi / 2.0, 0.0}, {kPi / 4.0, kPi / 2.0}, {0.0, 1.0}, {1.234, 2.2}}) {
    const SpinorState proj = project_second_ensemble(epr, t2, p2);
    const SpinorState target = coherent(t2, -p2, N);
    CHECK(fidelity(proj, target) >= 1.0 - 1e-10);
  }
}

TEST_CASE("traced balanced state is flat on the sphere") {
  const int N = 10;
  const ReducedState rho = traced_rho1(BipartiteParams(kPi / 4.0, N));
  const AngularGrid g = AngularGrid::regular(32, 32);
  const WignerSlice w = wigner_unipartite(rho, N, g);
  CHECK(w.values.maxCoeff() - w.values.minCoeff() < 1e-8);
}

TEST_CASE("theta marginal concentrates along the diagonal") {
  const int N = 10;
  const SpinorState epr = build_epr(N);
  const AngularGrid g = AngularGrid::regular(24, 24);
  const Eigen::MatrixXd marg = wigner_marginal_theta(epr, g);

  // diagonal dominance row by row in the bulk
  for (Eigen::Index i = 4; i < 20; ++i) {
    Eigen::Index best = 0;
    marg.row(i).maxCoeff(&best);
    CHECK(std::abs(static_cast<double>(best - i)) <= 1.0);
  }
  // enhanced weight at the poles relative to the equator
  CHECK(marg(0, 0) > marg(12, 12));
  CHECK(marg(23, 23) > marg(11, 11));
}

TEST_CASE("product state marginal factorizes") {
  const int N = 8;
  const SpinorState s = build_schmidt_bipartite(0.0, N);
  const AngularGrid g = AngularGrid::regular(12, 12);
  const Eigen::MatrixXd marg = wigner_marginal_theta(s, g);
  for (Eigen::Index a = 0; a < 12; a += 3)
    for (Eigen::Index b = 0; b < 12; b += 3)
      for (Eigen::Index c = 0; c < 12; c += 3)
        for (Eigen::Index d = 0; d < 12; d += 3)
          CHECK(std::abs(marg(a, b) * marg(c, d) - marg(a, d) * marg(c, b)) < 1e-8);
}

TEST_CASE("analytic phi marginal equals brute quadrature") {
  const int N = 6;
  const SpinorState s = build_schmidt_bipartite(kPi / 4.0, N);
  const AngularGrid g = AngularGrid::regular(8, 8);
  const Eigen::MatrixXd marg = wigner_marginal_theta(s, g);
  const int nphi = 96;
  AngularGrid inner;
  inner.theta_weight = Eigen::VectorXd::Ones(1);
  inner.phi.resize(nphi);
  for (int b = 0; b < nphi; ++b) inner.phi[b] = 2.0 * kPi * b / nphi;
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      double acc = 0.0;
      inner.theta = Eigen::VectorXd::Constant(1, g.theta[i]);
      for (int a = 0; a < nphi; ++a) {
        const double p2 = 2.0 * kPi * a / nphi;
        const WignerSlice sl = wigner_bipartite_slice(s, inner, g.theta[j], p2);
        acc += sl.values.row(0).sum() * (2.0 * kPi / nphi) * (2.0 * kPi / nphi);
      }
      CHECK(std::abs(acc - marg(i, j)) < 1e-8);
    }
  }
}

TEST_CASE("distribution rotates with the state") {
  const int N = 6;
  const SpinorState st = coherent(1.2, 0.8, N);
  const Eigen::Vector3d axis = Eigen::Vector3d(0.3, -0.8, 0.52).normalized();
  const LocalUnitary V = LocalUnitary::spin_rotation(1, axis, 1.1);
  const SpinorState rotated = apply_local_unitary(st, V);

  const Eigen::MatrixXcd v = V.matrix();
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  sz << 1, 0, 0, -1;
  const std::array<Eigen::Matrix2cd, 3> sig = {sx, sy, sz};
  Eigen::Matrix3d O;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      O(a, b) = 0.5 * (sig[static_cast<size_t>(a)] * v * sig[static_cast<size_t>(b)] *
                       v.adjoint())
                    .trace()
                    .real();
  for (double th : {0.5, 1.3, 2.2}) {
    for (double ph : {0.2, 2.9, 4.4}) {
      const Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                              std::cos(th));
      const Eigen::Vector3d back = O.transpose() * n;
      const double thb = std::acos(std::clamp(back[2], -1.0, 1.0));
      const double phb = std::atan2(back[1], back[0]);
      CHECK(std::abs(wigner_unipartite_at(rotated, th, ph) -
                     wigner_unipartite_at(st, thb, phb)) < 1e-6);
    }
  }

  // the same covariance on one subsystem of a correlated pair
  const SpinorState pair = build_schmidt_bipartite(kPi / 8.0, N);
  const SpinorState pair_rot = apply_local_unitary(pair, V);
  const double t2 = 0.9, p2 = 1.7;
  for (double th : {0.7, 1.9}) {
    for (double ph : {0.4, 3.3}) {
      const Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                              std::cos(th));
      const Eigen::Vector3d back = O.transpose() * n;
      const double thb = std::acos(std::clamp(back[2], -1.0, 1.0));
      const double phb = std::atan2(back[1], back[0]);
      CHECK(std::abs(wigner_bipartite_at(pair_rot, th, ph, t2, p2) -
                     wigner_bipartite_at(pair, thb, phb, t2, p2)) < 1e-6);
    }
  }
}

TEST_CASE("size cap guards the kernel") {
  const SpinorState big = coherent(1.0, 1.0, 24);
  const AngularGrid g = AngularGrid::regular(16, 16);
  CHECK_THROWS_AS(wigner_unipartite(big, g), CapacityError);
  WignerOptions extended;
  extended.exact_cg = true;
  const WignerSlice w = wigner_unipartite(big, g, extended);
  CHECK(w.max_imag_residue < 1e-9);
  Eigen::Index bi = 0, bj = 0;
  w.values.maxCoeff(&bi, &bj);
  CHECK(std::abs(g.theta[bi] - 1.0) < kPi / 16.0 + 1e-12);
}

TEST_CASE("literal kernel flips sign for odd duplication") {
  // the printed phase equals the usual (-1)^{j-m'} one times (-1)^{N M}, so
  // for odd N the polarized peak carries the extreme negative value
  const int N = 5;
  const double th0 = 1.1, ph0 = 0.6;
  const AngularGrid g = AngularGrid::regular(48, 48);
  const WignerSlice w = wigner_unipartite(coherent(th0, ph0, N), g);
  Eigen::Index bi = 0, bj = 0;
  w.values.cwiseAbs().maxCoeff(&bi, &bj);
  CHECK(std::abs(g.theta[bi] - th0) <= kPi / 48.0 + 1e-12);
  CHECK(w.values(bi, bj) < 0.0);
}

TEST_CASE("gauss-legendre quadrature integrates polynomials exactly") {
  auto [x, w] = gauss_legendre(12);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  double acc = 0.0;
  for (int i = 0; i < 12; ++i) acc += w[i] * std::pow(x[i], 10);
  CHECK(acc == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}
