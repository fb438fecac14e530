#include "spinor/wigner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace spinor {

namespace {

constexpr double kPi = std::numbers::pi;

bool even(int x) { return (x & 1) == 0; }

// All six Racah factorial arguments become integers whenever the quantum
// numbers pass the selection rules; violations yield a zero coefficient.
struct CgInts {
  int a, b, c, d;          // j1+j2-J, j1-j2+J, -j1+j2+J, j1+j2+J+1
  int j1m, j1p, j2m, j2p;  // j1 -+ m1, j2 -+ m2
  int JpM, JmM;
  int kmin, kmax;
  int off1, off2;  // J-j2+m1, J-j1-m2
  bool valid;
};

CgInts cg_ints(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M) {
  CgInts g{};
  g.valid = false;
  if (two_M != two_m1 + two_m2) return g;
  if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 || std::abs(two_M) > two_J) return g;
  if (!even(two_j1 + two_m1) || !even(two_j2 + two_m2) || !even(two_J + two_M)) return g;
  if (two_J < std::abs(two_j1 - two_j2) || two_J > two_j1 + two_j2) return g;
  if (!even(two_j1 + two_j2 + two_J)) return g;
  g.a = (two_j1 + two_j2 - two_J) / 2;
  g.b = (two_j1 - two_j2 + two_J) / 2;
  g.c = (-two_j1 + two_j2 + two_J) / 2;
  g.d = (two_j1 + two_j2 + two_J) / 2 + 1;
  g.j1m = (two_j1 - two_m1) / 2;
  g.j1p = (two_j1 + two_m1) / 2;
  g.j2m = (two_j2 - two_m2) / 2;
  g.j2p = (two_j2 + two_m2) / 2;
  g.JpM = (two_J + two_M) / 2;
  g.JmM = (two_J - two_M) / 2;
  g.off1 = (two_J - two_j2 + two_m1) / 2;
  g.off2 = (two_J - two_j1 - two_m2) / 2;
  g.kmin = std::max({0, -g.off1, -g.off2});
  g.kmax = std::min({g.a, g.j1m, g.j2p});
  g.valid = g.kmin <= g.kmax;
  return g;
}

using BigRat = boost::multiprecision::cpp_rational;

BigInt big_factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M) {
  const CgInts g = cg_ints(two_j1, two_m1, two_j2, two_m2, two_J, two_M);
  if (!g.valid) return 0.0;
  const double pref =
      0.5 * (std::log(two_J + 1.0) + log_factorial(g.a) + log_factorial(g.b) +
             log_factorial(g.c) - log_factorial(g.d) + log_factorial(g.JpM) +
             log_factorial(g.JmM) + log_factorial(g.j1m) + log_factorial(g.j1p) +
             log_factorial(g.j2m) + log_factorial(g.j2p));
  double shift = kNegInf;
  std::vector<double> lt(static_cast<size_t>(g.kmax - g.kmin + 1));
  for (int k = g.kmin; k <= g.kmax; ++k) {
    const double l = -(log_factorial(k) + log_factorial(g.a - k) + log_factorial(g.j1m - k) +
                       log_factorial(g.j2p - k) + log_factorial(g.off1 + k) +
                       log_factorial(g.off2 + k));
    lt[static_cast<size_t>(k - g.kmin)] = l;
    shift = std::max(shift, l);
  }
  double sum = 0.0;
  for (int k = g.kmin; k <= g.kmax; ++k) {
    const double term = std::exp(lt[static_cast<size_t>(k - g.kmin)] - shift);
    sum += even(k) ? term : -term;
  }
  if (sum == 0.0) return 0.0;
  const double sign = sum < 0.0 ? -1.0 : 1.0;
  return sign * std::exp(pref + shift + std::log(std::abs(sum)));
}

double clebsch_gordan_exact(int two_j1, int two_m1, int two_j2, int two_m2, int two_J,
                            int two_M) {
  const CgInts g = cg_ints(two_j1, two_m1, two_j2, two_m2, two_J, two_M);
  if (!g.valid) return 0.0;
  BigRat pre(BigInt(two_J + 1) * big_factorial(g.a) * big_factorial(g.b) * big_factorial(g.c) *
                 big_factorial(g.JpM) * big_factorial(g.JmM) * big_factorial(g.j1m) *
                 big_factorial(g.j1p) * big_factorial(g.j2m) * big_factorial(g.j2p),
             big_factorial(g.d));
  BigRat sum = 0;
  for (int k = g.kmin; k <= g.kmax; ++k) {
    BigRat term(1, big_factorial(k) * big_factorial(g.a - k) * big_factorial(g.j1m - k) *
                       big_factorial(g.j2p - k) * big_factorial(g.off1 + k) *
                       big_factorial(g.off2 + k));
    sum += even(k) ? term : -term;
  }
  if (sum == 0) return 0.0;
  const double sign = sum < 0 ? -1.0 : 1.0;
  const BigRat sq = pre * sum * sum;  // CG^2, exact
  const double lg = log_big(boost::multiprecision::numerator(sq)) -
                    log_big(boost::multiprecision::denominator(sq));
  return sign * std::exp(0.5 * lg);
}

// ---------------------------------------------------------------------------
// Spherical harmonics

namespace {

// Fully normalized associated Legendre values with Condon-Shortley phase:
// Y_{LM} = table(L, M) e^{i M phi} for M >= 0.
Eigen::MatrixXd normalized_legendre_table(int Lmax, double x) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(Lmax + 1, Lmax + 1);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  P(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= Lmax; ++m)
    P(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P(m - 1, m - 1);
  for (int m = 0; m < Lmax; ++m) P(m + 1, m) = x * std::sqrt(2.0 * m + 3.0) * P(m, m);
  for (int m = 0; m <= Lmax; ++m) {
    for (int L = m + 2; L <= Lmax; ++L) {
      const double a =
          std::sqrt((4.0 * L * L - 1.0) / (static_cast<double>(L) * L - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(L - 1) * (L - 1) - static_cast<double>(m) * m) /
                                 (4.0 * static_cast<double>(L - 1) * (L - 1) - 1.0));
      P(L, m) = a * (x * P(L - 1, m) - b * P(L - 2, m));
    }
  }
  return P;
}

double signed_legendre(const Eigen::MatrixXd& table, int L, int M) {
  if (M >= 0) return table(L, M);
  return even(M) ? table(L, -M) : -table(L, -M);
}

}  // namespace

Complex spherical_harmonic(int L, int M, double theta, double phi) {
  if (L < 0 || std::abs(M) > L) return Complex(0.0, 0.0);
  const Eigen::MatrixXd table = normalized_legendre_table(L, std::cos(theta));
  return signed_legendre(table, L, M) * std::polar(1.0, M * phi);
}

// ---------------------------------------------------------------------------
// Grids

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {x, w};
}

AngularGrid AngularGrid::regular(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("AngularGrid: empty grid");
  auto [x, w] = gauss_legendre(n_theta);
  AngularGrid g;
  g.theta.resize(n_theta);
  g.theta_weight.resize(n_theta);
  // x ascending in [-1,1]; theta = acos(x) descending, flip to ascending.
  for (int i = 0; i < n_theta; ++i) {
    g.theta[i] = std::acos(x[n_theta - 1 - i]);
    g.theta_weight[i] = w[n_theta - 1 - i];
  }
  g.phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) g.phi[j] = 2.0 * kPi * j / n_phi;
  return g;
}

// ---------------------------------------------------------------------------
// Kernel assembly

namespace {

double cg_pair(int N, int k, int kp, int L, bool exact) {
  // <j, m; j, -m' | L, m - m'> with j = N/2, m = k - j, m' = kp - j.
  const int two_m = 2 * k - N;
  const int two_mp = 2 * kp - N;
  return exact ? clebsch_gordan_exact(N, two_m, N, -two_mp, 2 * L, two_m - two_mp)
               : clebsch_gordan(N, two_m, N, -two_mp, 2 * L, two_m - two_mp);
}

// cg table indexed [k * (N+1) + kp][L]
std::vector<Eigen::VectorXd> cg_table(int N, bool exact) {
  const int d = N + 1;
  std::vector<Eigen::VectorXd> t(static_cast<size_t>(d) * d);
  for (int k = 0; k < d; ++k)
    for (int kp = 0; kp < d; ++kp) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(N + 1);
      for (int L = std::abs(k - kp); L <= N; ++L) col[L] = cg_pair(N, k, kp, L, exact);
      t[static_cast<size_t>(k) * d + kp] = std::move(col);
    }
  return t;
}

// The phase (-1)^{Mj + sum m'_n} factorizes over subsystems as e^{i pi k'_n};
// kept complex, reality of the assembled sum is checked downstream.
Complex subsystem_phase(int kp) { return std::polar(1.0, kPi * kp); }

// K(theta_i, phi_j) = sum_{k,kp} R(k,kp) e^{i pi kp} sum_L cg Y_{L,k-kp}
Eigen::MatrixXcd eval_kernel(const Eigen::MatrixXcd& R, int N,
                             const Eigen::VectorXd& thetas, const Eigen::VectorXd& phis,
                             bool exact) {
  const int d = N + 1;
  const auto cgs = cg_table(N, exact);
  const Eigen::Index nt = thetas.size(), np = phis.size();

  // G(theta, DeltaM) with DeltaM = k - kp in [-N, N]
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(nt, 2 * N + 1);
  for (Eigen::Index it = 0; it < nt; ++it) {
    const Eigen::MatrixXd leg = normalized_legendre_table(N, std::cos(thetas[it]));
    for (int k = 0; k < d; ++k) {
      for (int kp = 0; kp < d; ++kp) {
        const Complex r = R(k, kp);
        if (r == Complex(0.0, 0.0)) continue;
        const int dm = k - kp;
        const auto& col = cgs[static_cast<size_t>(k) * d + kp];
        double radial = 0.0;
        for (int L = std::abs(dm); L <= N; ++L) radial += col[L] * signed_legendre(leg, L, dm);
        G(it, dm + N) += r * subsystem_phase(kp) * radial;
      }
    }
  }
  Eigen::MatrixXcd vals = Eigen::MatrixXcd::Zero(nt, np);
  for (Eigen::Index jp = 0; jp < np; ++jp) {
    for (int dm = -N; dm <= N; ++dm) {
      const Complex e = std::polar(1.0, dm * phis[jp]);
      for (Eigen::Index it = 0; it < nt; ++it) vals(it, jp) += G(it, dm + N) * e;
    }
  }
  return vals;
}

void require_wigner_size(int N, const WignerOptions& options, const char* who) {
  if (N > options.cap && !options.exact_cg)
    throw CapacityError(std::string(who) + ": N exceeds the Wigner cap " +
                        std::to_string(options.cap) +
                        "; enable the extended-precision path to go higher");
}

// Amplitudes reindexed by mode-a count k = N - i.
Eigen::VectorXcd amps_by_k(const SpinorState& state) {
  const Eigen::VectorXcd amps = state.linear_amplitudes();
  const int N = state.duplication();
  Eigen::VectorXcd b(N + 1);
  for (int k = 0; k <= N; ++k) b[k] = amps[N - k];
  return b;
}

WignerSlice finish_slice(const Eigen::MatrixXcd& vals) {
  WignerSlice s;
  s.values = vals.real();
  s.max_imag_residue = vals.imag().cwiseAbs().maxCoeff();
  return s;
}

}  // namespace

WignerSlice wigner_unipartite(const SpinorState& state, const AngularGrid& grid,
                              const WignerOptions& options) {
  if (state.subsystems() != 1 || state.levels() != 2)
    throw std::invalid_argument("wigner_unipartite: one two-level subsystem required");
  require_wigner_size(state.duplication(), options, "wigner_unipartite");
  const Eigen::VectorXcd b = amps_by_k(state);
  const Eigen::MatrixXcd R = b * b.adjoint();
  return finish_slice(eval_kernel(R, state.duplication(), grid.theta, grid.phi, options.exact_cg));
}

WignerSlice wigner_unipartite(const ReducedState& rho, int N, const AngularGrid& grid,
                              const WignerOptions& options) {
  if (rho.eigenvalues.size() != N + 1)
    throw std::invalid_argument("wigner_unipartite: weight count must be N + 1");
  require_wigner_size(N, options, "wigner_unipartite");
  Eigen::MatrixXcd R = rho.eigenvalues.cast<Complex>().asDiagonal();
  return finish_slice(eval_kernel(R, N, grid.theta, grid.phi, options.exact_cg));
}

double wigner_unipartite_at(const SpinorState& state, double theta, double phi,
                            const WignerOptions& options) {
  Eigen::VectorXd t(1), p(1);
  t << theta;
  p << phi;
  AngularGrid g;
  g.theta = t;
  g.phi = p;
  g.theta_weight = Eigen::VectorXd::Ones(1);
  if (state.subsystems() != 1 || state.levels() != 2)
    throw std::invalid_argument("wigner_unipartite_at: one two-level subsystem required");
  require_wigner_size(state.duplication(), options, "wigner_unipartite_at");
  const Eigen::VectorXcd b = amps_by_k(state);
  const Eigen::MatrixXcd R = b * b.adjoint();
  return eval_kernel(R, state.duplication(), t, p, options.exact_cg)(0, 0).real();
}

namespace {

// Effective subsystem-1 weight matrix of a bipartite state at fixed
// (theta2, phi2): the subsystem-2 kernel factor is contracted in.
Eigen::MatrixXcd bipartite_effective_weights(const SpinorState& state, double theta2, double phi2,
                                             bool exact) {
  const int N = state.duplication();
  const int d = N + 1;
  const Eigen::VectorXcd amps = state.linear_amplitudes();
  auto amp_at = [&](int k1, int k2) { return amps[(N - k1) * d + (N - k2)]; };

  struct NonZero {
    int k1, k2;
    Complex v;
  };
  std::vector<NonZero> nz;
  for (int k1 = 0; k1 < d; ++k1)
    for (int k2 = 0; k2 < d; ++k2)
      if (amp_at(k1, k2) != Complex(0.0, 0.0)) nz.push_back({k1, k2, amp_at(k1, k2)});

  const auto cgs = cg_table(N, exact);
  const Eigen::MatrixXd leg = normalized_legendre_table(N, std::cos(theta2));
  Eigen::MatrixXcd G2(d, d);
  for (int k = 0; k < d; ++k) {
    for (int kp = 0; kp < d; ++kp) {
      const int dm = k - kp;
      const auto& col = cgs[static_cast<size_t>(k) * d + kp];
      double radial = 0.0;
      for (int L = std::abs(dm); L <= N; ++L) radial += col[L] * signed_legendre(leg, L, dm);
      G2(k, kp) = radial * std::polar(1.0, dm * phi2);
    }
  }

  Eigen::MatrixXcd Reff = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& a : nz)
    for (const auto& b : nz)
      Reff(a.k1, b.k1) +=
          a.v * std::conj(b.v) * subsystem_phase(b.k2) * G2(a.k2, b.k2);
  return Reff;
}

void require_bipartite(const SpinorState& state, const char* who) {
  if (state.subsystems() != 2 || state.levels() != 2)
    throw std::invalid_argument(std::string(who) + ": bipartite two-level state required");
}

}  // namespace

WignerSlice wigner_bipartite_slice(const SpinorState& state, const AngularGrid& grid,
                                   double theta2, double phi2, const WignerOptions& options) {
  require_bipartite(state, "wigner_bipartite_slice");
  require_wigner_size(state.duplication(), options, "wigner_bipartite_slice");
  const Eigen::MatrixXcd Reff =
      bipartite_effective_weights(state, theta2, phi2, options.exact_cg);
  WignerSlice s =
      finish_slice(eval_kernel(Reff, state.duplication(), grid.theta, grid.phi, options.exact_cg));
  s.has_fixed = true;
  s.fixed_theta = theta2;
  s.fixed_phi = phi2;
  return s;
}

double wigner_bipartite_at(const SpinorState& state, double theta1, double phi1, double theta2,
                           double phi2, const WignerOptions& options) {
  require_bipartite(state, "wigner_bipartite_at");
  require_wigner_size(state.duplication(), options, "wigner_bipartite_at");
  const Eigen::MatrixXcd Reff =
      bipartite_effective_weights(state, theta2, phi2, options.exact_cg);
  Eigen::VectorXd t(1), p(1);
  t << theta1;
  p << phi1;
  return eval_kernel(Reff, state.duplication(), t, p, options.exact_cg)(0, 0).real();
}

Eigen::MatrixXd wigner_marginal_theta(const SpinorState& state, const AngularGrid& grid,
                                      const WignerOptions& options) {
  require_bipartite(state, "wigner_marginal_theta");
  const int N = state.duplication();
  require_wigner_size(N, options, "wigner_marginal_theta");
  const int d = N + 1;
  const Eigen::VectorXcd amps = state.linear_amplitudes();

  // Only m = m' survives the phi integrals; each integral contributes 2 pi
  // and Y_{L,0} reduces to a Legendre polynomial.
  Eigen::MatrixXd W(d, d);
  for (int k1 = 0; k1 < d; ++k1)
    for (int k2 = 0; k2 < d; ++k2) W(k1, k2) = std::norm(amps[(N - k1) * d + (N - k2)]);

  const auto cgs = cg_table(N, options.exact_cg);
  const Eigen::Index nt = grid.theta.size();
  Eigen::MatrixXcd F(nt, d);
  for (Eigen::Index it = 0; it < nt; ++it) {
    const Eigen::MatrixXd leg = normalized_legendre_table(N, std::cos(grid.theta[it]));
    for (int k = 0; k < d; ++k) {
      const auto& col = cgs[static_cast<size_t>(k) * d + k];
      double radial = 0.0;
      for (int L = 0; L <= N; ++L) radial += col[L] * leg(L, 0);
      F(it, k) = subsystem_phase(k) * radial;
    }
  }
  const double four_pi2 = 4.0 * kPi * kPi;
  Eigen::MatrixXcd M = F * W.cast<Complex>() * F.transpose();
  return four_pi2 * M.real();
}

SpinorState project_second_ensemble(const SpinorState& state, double theta2, double phi2) {
  require_bipartite(state, "project_second_ensemble");
  const int N = state.duplication();
  const int d = N + 1;
  Eigen::VectorXcd coh(2);
  coh << std::cos(theta2 / 2.0), std::polar(1.0, phi2) * std::sin(theta2 / 2.0);
  const SpinorState probe = build_unipartite_spinor(coh, N);
  const Eigen::VectorXcd b = probe.linear_amplitudes();
  const Eigen::VectorXcd amps = state.linear_amplitudes();

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
  for (int i1 = 0; i1 < d; ++i1)
    for (int i2 = 0; i2 < d; ++i2) out[i1] += std::conj(b[i2]) * amps[i1 * d + i2];
  if (out.norm() < 1e-300)
    throw std::runtime_error("project_second_ensemble: projection has zero norm");
  return state_from_amplitudes(N, 1, state.space_ptr(), std::move(out));
}

ReducedState traced_rho1(BipartiteParams p) {
  ReducedState r;
  r.eigenvalues = schmidt_weights(p).matrix();
  return r;
}

}  // namespace spinor
