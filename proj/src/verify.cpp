#include "spinor/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "spinor/closed_forms.hpp"
#include "spinor/entanglement.hpp"
#include "spinor/equivalence.hpp"
#include "spinor/error_models.hpp"
#include "spinor/fock.hpp"
#include "spinor/observables.hpp"
#include "spinor/states.hpp"
#include "spinor/wigner.hpp"

namespace spinor {

namespace {

constexpr double kPi = std::numbers::pi;

class Recorder {
 public:
  Recorder(std::vector<CheckResult>& out, std::string suite)
      : out_(out), suite_(std::move(suite)) {}

  void check(const std::string& name, bool pass, double worst = 0.0) {
    CheckResult r;
    r.suite = suite_;
    r.name = name;
    r.pass = pass;
    std::ostringstream os;
    os << "worst residual " << worst;
    r.detail = os.str();
    out_.push_back(std::move(r));
  }

 private:
  std::vector<CheckResult>& out_;
  std::string suite_;
};

// --- small dense machinery used as the cross-check side -------------------

// Collective spin matrices in the state's dense layout (index i = N - k).
struct DenseSpin {
  Eigen::MatrixXcd x, y, z;
};

DenseSpin dense_spin(int N) {
  const int d = N + 1;
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i)
    sp(i - 1, i) = std::sqrt(static_cast<double>(N - i + 1) * static_cast<double>(i));
  Eigen::MatrixXcd sm = sp.adjoint();
  DenseSpin s;
  s.x = sp + sm;
  s.y = Complex(0, -1) * sp + Complex(0, 1) * sm;
  s.z = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) s.z(i, i) = static_cast<double>(N - 2 * i);
  return s;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Dense Schmidt-state vector in the flattened layout.
Eigen::VectorXcd dense_schmidt(double chi, int N) {
  const int d = N + 1;
  Eigen::VectorXd psi(d);
  for (int k = 0; k <= N; ++k)
    psi[k] = std::pow(std::cos(chi), k) * std::pow(std::sin(chi), N - k);
  psi /= psi.norm();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
  for (int k = 0; k <= N; ++k) v[(N - k) * d + (N - k)] = psi[k];
  return v;
}

double dense_exp(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& M) {
  return (v.adjoint() * M * v)(0, 0).real();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

Eigen::VectorXcd random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h(i, j) = Complex(g(rng), g(rng));
  return (h + h.adjoint().eval()) / 2.0;
}

// --- suites -----------------------------------------------------------------

void verify_fock(std::vector<CheckResult>& out, bool quick, std::uint64_t seed) {
  Recorder rec(out, "fock");

  {
    bool ok = true;
    std::vector<std::pair<int, int>> cases = {{6, 4}, {10, 3}, {40, 2}, {12, 5}};
    if (!quick) {
      cases.emplace_back(100, 3);
      cases.emplace_back(39, 5);
    }
    for (auto [N, L] : cases) {
      FockSpace space(N, L);
      if (space.size() != static_cast<Eigen::Index>(dimension(N, L))) ok = false;
      for (Eigen::Index i = 0; i < space.size() && ok; ++i)
        if (space.index_of(space.state(i)) != i) ok = false;
    }
    rec.check("enumeration is a bijection", ok);
  }
  {
    bool ok = true;
    for (int N = 0; N <= 1000; ++N)
      if (dimension(N, 2) != static_cast<std::uint64_t>(N) + 1) ok = false;
    rec.check("two-level dimension is N+1", ok);
  }
  {
    std::mt19937_64 rng(seed);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_int_distribution<int> ln(0, 8), ll(0, 3);
      Eigen::VectorXi counts(4);
      for (int l = 0; l < 4; ++l) counts[l] = ln(rng);
      OccupationVector occ(counts);
      const int level = ll(rng);
      auto [up, f1] = apply_creation(occ, level);
      auto down = apply_annihilation(up, level);
      if (!down) {
        ok = false;
        continue;
      }
      const double combined = f1 * down->second;
      worst = std::max(worst, std::abs(combined - (occ.counts[level] + 1.0)));
      if (!(down->first == occ)) ok = false;
    }
    rec.check("creation then annihilation returns k+1", ok && worst < 1e-12, worst);
  }
  {
    std::mt19937_64 rng(seed + 1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<int> ln(0, 25);
      Eigen::VectorXi counts(4);
      for (int l = 0; l < 4; ++l) counts[l] = ln(rng);
      const double lg =
          log_multinomial(std::span<const int>(counts.data(), 4));
      const BigInt exact = multinomial_big(std::span<const int>(counts.data(), 4));
      const double lg_exact = log_big(exact);
      worst = std::max(worst, std::abs(lg - lg_exact) / std::max(1.0, std::abs(lg_exact)));
    }
    rec.check("log multinomial matches exact integers", worst < 1e-10, worst);
  }
}

void verify_states(std::vector<CheckResult>& out, bool quick, std::uint64_t seed) {
  Recorder rec(out, "states");
  const int nmax = quick ? 12 : 50;

  {
    double worst = 0.0;
    for (int N : {1, 2, 5, nmax}) {
      for (int i = 1; i < 50; ++i) {
        const double chi = (kPi / 2.0) * i / 50.0;
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
        psi[0] = std::cos(chi);
        psi[3] = std::sin(chi);
        const double ln_build = normalization_factor(psi, 2, N);
        const double ln_closed = log_norm_factor(BipartiteParams(chi, N));
        worst = std::max(worst, std::abs(ln_build - ln_closed));
      }
    }
    rec.check("normalization matches closed form in log scale", worst < 1e-9, worst);
  }
  {
    const SpinorState s = build_schmidt_bipartite(0.7, quick ? 10 : 20);
    const Eigen::Index d = s.subsystem_dim();
    bool ok = true;
    for (Eigen::Index i = 0; i < d && ok; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        if (i != j && s.log_magnitudes()[i * d + j] != kNegInf) {
          ok = false;
          break;
        }
    rec.check("schmidt state is supported on correlated pairs", ok);
  }
  {
    std::mt19937_64 rng(seed + 2);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXcd psi = random_state(rng, 2);
      const int N = 1 + static_cast<int>(rng() % 6);
      const SpinorState a = build_unipartite_spinor(psi, N);
      const SpinorState b = build_multipartite_spinor(psi, 1, N);
      worst = std::max(worst, std::abs(1.0 - fidelity(a, b)));
    }
    rec.check("unipartite builder agrees with the generic expansion", worst < 1e-12, worst);
  }
  {
    std::mt19937_64 rng(seed + 3);
    double worst = 0.0;
    for (int trial = 0; trial < (quick ? 4 : 12); ++trial) {
      const int N = 1 + static_cast<int>(rng() % 6);
      Eigen::VectorXcd psi = random_state(rng, 4);
      const int m = 1 + static_cast<int>(rng() % 2);
      const Eigen::MatrixXcd H = random_hermitian(rng, 2);
      const LocalUnitary V = LocalUnitary::from_generator(m, H, 0.9);
      const SpinorState rotated = apply_local_unitary(build_multipartite_spinor(psi, 2, N), V);

      Eigen::MatrixXcd v = V.matrix();
      Eigen::VectorXcd transformed = psi;
      // act on index m of the 2x2 tensor
      Eigen::Map<Eigen::MatrixXcd> t(transformed.data(), 2, 2);  // t(l2, l1)
      if (m == 1)
        t = (v * t.transpose()).transpose();
      else
        t = v * t;
      const SpinorState direct = build_multipartite_spinor(transformed, 2, N);
      worst = std::max(worst, std::abs(1.0 - fidelity(rotated, direct)));
    }
    rec.check("local unitaries preserve the spinor form", worst < 1e-10, worst);
  }
  {
    double worst = 0.0;
    for (int N : quick ? std::vector<int>{2, 5} : std::vector<int>{2, 5, 10, 20}) {
      for (int i = 1; i <= 9; ++i) {
        const double chi = (kPi / 2.0) * i / 10.0;
        const SpinorState s = build_schmidt_bipartite(chi, N);
        const Eigen::SparseMatrix<double> H = build_h0(chi, N);
        const Eigen::VectorXcd amps = s.linear_amplitudes();
        const Eigen::VectorXcd r = H * amps + N * (N + 2.0) * amps;
        worst = std::max(worst, r.norm() / amps.norm());
      }
    }
    rec.check("parent hamiltonian eigenvalue identity", worst < 1e-9, worst);
  }
  {
    const int N = quick ? 6 : 10;
    const SpinorState epr = build_epr(N);
    Eigen::MatrixXcd had(2, 2);
    had << 1, 1, 1, -1;
    had /= std::sqrt(2.0);
    SpinorState rotated = apply_local_unitary(epr, LocalUnitary::from_matrix(1, had));
    rotated = apply_local_unitary(rotated, LocalUnitary::from_matrix(2, had));
    const double worst = std::abs(1.0 - fidelity(rotated, epr));
    rec.check("maximally entangled state is basis invariant", worst < 1e-10, worst);
  }
}

void verify_observables(std::vector<CheckResult>& out, bool quick, std::uint64_t seed) {
  Recorder rec(out, "observables");

  {
    double worst = 0.0;
    for (int N : quick ? std::vector<int>{5, 12} : std::vector<int>{5, 20, 50}) {
      const DenseSpin s = dense_spin(N);
      const Eigen::MatrixXcd comm = s.x * s.y - s.y * s.x - Complex(0, 2) * s.z;
      worst = std::max(worst, comm.cwiseAbs().maxCoeff() / N);
      const Eigen::MatrixXcd casimir = s.x * s.x + s.y * s.y + s.z * s.z -
                                       N * (N + 2.0) * Eigen::MatrixXcd::Identity(N + 1, N + 1);
      worst = std::max(worst, casimir.cwiseAbs().maxCoeff() / (N * (N + 2.0)));
    }
    rec.check("commutators and casimir", worst < 1e-10, worst);
  }
  {
    // the sparse operator application agrees with dense matrices
    double worst = 0.0;
    const int N = 8;
    const DenseSpin s = dense_spin(N);
    const SpinorState st = build_schmidt_bipartite(0.6, N);
    const Eigen::VectorXcd amps = st.linear_amplitudes();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N + 1, N + 1);
    const std::array<Eigen::MatrixXcd, 3> mats = {s.x, s.y, s.z};
    const auto xi = spin_operator_set();
    for (int j = 0; j < 6; ++j) {
      const Eigen::MatrixXcd M =
          j < 3 ? kron(mats[static_cast<size_t>(j)], I) : kron(I, mats[static_cast<size_t>(j - 3)]);
      const Eigen::VectorXcd a = apply_spin_operator(st, amps, xi[static_cast<size_t>(j)]);
      worst = std::max(worst, (a - M * amps).norm());
    }
    rec.check("band application matches dense matrices", worst < 1e-10, worst);
  }
  {
    double worst = 0.0;
    bool ok = true;
    for (int N : quick ? std::vector<int>{4, 8} : std::vector<int>{4, 12, 20}) {
      for (int i = 1; i < 10; ++i) {
        const double chi = (kPi / 2.0) * i / 10.0;
        const CovarianceReport rep = covariance_report(build_schmidt_bipartite(chi, N));
        for (int r = 0; r < 6; ++r) {
          for (int c = 0; c < 6; ++c) {
            const bool allowed = r == c || (std::abs(r - c) == 3) ||
                                 (r % 3 == 2 && c % 3 == 2);
            if (!allowed) worst = std::max(worst, std::abs(rep.V(r, c)));
          }
        }
        if ((rep.V - rep.V.transpose()).cwiseAbs().maxCoeff() > 1e-10) ok = false;
        if ((rep.Omega + rep.Omega.transpose()).cwiseAbs().maxCoeff() > 1e-10) ok = false;
      }
    }
    rec.check("covariance zero pattern and symmetry", ok && worst < 1e-10, worst);
  }
  {
    double worst = 0.0;
    const int nmax = quick ? 12 : 50;
    for (int N = 1; N <= nmax; N += (N < 10 ? 1 : 7)) {
      for (int i = 1; i < 100; ++i) {
        const double chi = (kPi / 2.0) * i / 100.0;
        const SpinorState st = build_schmidt_bipartite(chi, N);
        worst = std::max(worst, std::abs(correlation(st, SpinAxis::X) - std::sin(2 * chi)));
        worst = std::max(worst, std::abs(correlation(st, SpinAxis::Y) + std::sin(2 * chi)));
        worst = std::max(worst, std::abs(correlation(st, SpinAxis::Z) - 1.0));
      }
    }
    rec.check("correlations are exact for every N", worst < 1e-10, worst);
  }
  {
    // duplicated-state moment relations against brute-force tensor powers
    std::mt19937_64 rng(seed + 5);
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      const int M = 1 + static_cast<int>(rng() % 2);  // L^M <= 8 with one spare
      const int N = 1 + static_cast<int>(rng() % 3);
      const int dim = M == 1 ? 2 : 4;
      Eigen::VectorXcd psi = random_state(rng, dim);
      const ScsState scs = scs_from_micro(psi, M, N);
      const SymmetricObservable c = single_site_spin(M, 1, SpinAxis::Z);
      const SymmetricObservable d = single_site_spin(M, M, SpinAxis::X);

      // brute force: psi^{tensor N}, C = sum_n c_n
      Eigen::VectorXcd big = Eigen::VectorXcd::Ones(1);
      for (int n = 0; n < N; ++n) {
        Eigen::VectorXcd next(big.size() * dim);
        for (Eigen::Index a = 0; a < big.size(); ++a)
          for (int l = 0; l < dim; ++l) next[a * dim + l] = big[a] * psi[l];
        big = std::move(next);
      }
      auto embed = [&](const Eigen::MatrixXcd& site) {
        Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(big.size(), big.size());
        for (int n = 0; n < N; ++n) {
          Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(1, 1);
          for (int q = 0; q < N; ++q)
            term = kron(term, q == n ? site : Eigen::MatrixXcd::Identity(dim, dim));
          total += term;
        }
        return total;
      };
      const Eigen::MatrixXcd C = embed(c.c), D = embed(d.c);
      const double mean_brute = dense_exp(big, C);
      const double cov_brute =
          0.5 * dense_exp(big, C * D + D * C) - dense_exp(big, C) * dense_exp(big, D);
      worst = std::max(worst, std::abs(scs_expectation(scs, c) - mean_brute));
      worst = std::max(worst, std::abs(scs_covariance(scs, c, d) - cov_brute));

      const Eigen::MatrixXcd Cs = C - mean_brute * Eigen::MatrixXcd::Identity(big.size(), big.size());
      const double third_brute = dense_exp(big, Cs * Cs * Cs);
      worst = std::max(worst, std::abs(scs_central_moment3(scs, c, c, c) - third_brute));
    }
    rec.check("duplicated-state moment relations", worst < 1e-9, worst);
  }
  {
    // conjugated spin expectations rotate like vectors
    std::mt19937_64 rng(seed + 6);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const int N = 6;
      std::uniform_real_distribution<double> u(0.2, 2.8);
      Eigen::VectorXcd micro(2);
      const double th = u(rng), ph = u(rng);
      micro << std::cos(th / 2.0), std::polar(1.0, ph) * std::sin(th / 2.0);
      SpinorState st = build_unipartite_spinor(micro, N);

      Eigen::Vector3d axis(u(rng) - 1.5, u(rng) - 1.5, u(rng) - 1.5);
      axis.normalize();
      const double ang = u(rng);
      const LocalUnitary V = LocalUnitary::spin_rotation(1, axis, ang);
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
      Eigen::Vector3d before, after;
      const std::array<SpinAxis, 3> axes = {SpinAxis::X, SpinAxis::Y, SpinAxis::Z};
      for (int a = 0; a < 3; ++a) {
        before[a] = expectation(st, SpinOperator{1, axes[static_cast<size_t>(a)]}).real();
        after[a] = expectation(rotated, SpinOperator{1, axes[static_cast<size_t>(a)]}).real();
      }
      // <V psi|S_a|V psi> = sum_b O(a,b) <S_b>
      worst = std::max(worst,
                       (O * before - after).cwiseAbs().maxCoeff() / std::max(1.0, before.norm()));
    }
    rec.check("spin expectations rotate like bloch vectors", worst < 1e-9, worst);
  }
}

void verify_closed_forms(std::vector<CheckResult>& out, bool quick, std::uint64_t) {
  Recorder rec(out, "closed_forms");
  const int nmax = quick ? 6 : 12;

  {
    double worst = 0.0;
    for (int N = 1; N <= nmax; ++N) {
      const DenseSpin s = dense_spin(N);
      const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N + 1, N + 1);
      for (int i = 1; i <= 25; ++i) {
        const double chi = (kPi / 2.0) * i / 26.0;
        BipartiteParams p(chi, N);
        const Eigen::VectorXcd v = dense_schmidt(chi, N);
        worst = std::max(worst, rel_err(dense_exp(v, kron(s.z, I)), exact_sz_sum(p)));
        worst = std::max(worst, rel_err(dense_exp(v, kron(s.z, s.z)), exact_szsz_sum(p)));
        worst = std::max(worst, rel_err(dense_exp(v, kron(s.x, s.x)), exact_sxsx_sum(p)));
        worst = std::max(worst, rel_err(dense_exp(v, kron(s.x * s.x, I)), exact_sx2_sum(p)));
        // norm: (N!)^2 sum Psi_k^2 against the summation form, in log scale
        Eigen::ArrayXd w(N + 1);
        for (int k = 0; k <= N; ++k)
          w[k] = 2.0 * k * std::log(std::cos(chi)) + 2.0 * (N - k) * std::log(std::sin(chi));
        const double lnn = 2.0 * log_factorial(N) + log_sum_exp(w);
        worst = std::max(worst, std::abs(lnn - log_norm_factor_sum(p)));
      }
    }
    rec.check("summation forms match the dense oracle", worst < 1e-9, worst);
  }
  {
    double worst = 0.0;
    for (int N = 1; N <= nmax; ++N) {
      for (int i = 1; i <= 25; ++i) {
        const double chi = (kPi / 2.0) * i / 26.0;
        if (std::abs(std::cos(2.0 * chi)) < 1e-2) continue;
        BipartiteParams p(chi, N);
        worst = std::max(worst, rel_err(exact_sz_rational(p), exact_sz_sum(p)));
        worst = std::max(worst, rel_err(exact_szsz_rational(p), exact_szsz_sum(p)));
        worst = std::max(worst, rel_err(exact_sxsx_rational(p), exact_sxsx_sum(p)));
        worst = std::max(worst, rel_err(exact_sx2_rational(p), exact_sx2_sum(p)));
        worst = std::max(worst,
                         std::abs(log_norm_factor_rational(p) - log_norm_factor_sum(p)));
      }
    }
    rec.check("rational forms match summation forms", worst < 1e-9, worst);
  }
  {
    double worst = 0.0;
    const int N = 50;
    for (int i = 1; i < 99; ++i) {
      const double chi = (kPi / 2.0) * i / 100.0;
      if (std::abs(chi - kPi / 4.0) <= 0.15 || chi <= 0.05 || chi >= kPi / 2.0 - 0.05) continue;
      BipartiteParams p(chi, N);
      const Matrix6d A = approx_covariance_matrix(p, 0.1);
      const Matrix6d E = exact_covariance_matrix(p);
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
          if (A(r, c) != 0.0)
            worst = std::max(worst, std::abs(A(r, c) - E(r, c)) / std::abs(E(r, c)));
    }
    // frozen regression bound: the sweep's worst entrywise deviation is 4.97%
    rec.check("large-N matrix within 5 percent of exact", worst < 0.05, worst);
  }
  {
    double worst = 0.0;
    const int N = 50;
    for (int i = 1; i < 99; ++i) {
      const double chi = (kPi / 2.0) * i / 100.0;
      if (std::abs(chi - kPi / 4.0) <= 0.2) continue;
      BipartiteParams p(chi, N);
      const double t2 = std::tan(2.0 * chi) * std::tan(2.0 * chi);
      worst = std::max(worst, std::abs(var_sz(p) - t2) / std::max(1e-30, t2));
    }
    rec.check("z variance approaches tan^2", worst < 0.05, worst);
  }
  {
    double worst = 0.0;
    for (int N : {1, 2, 5, 50}) {
      for (int i = 1; i < 50; ++i) {
        const double chi = (kPi / 2.0) * i / 50.0;
        const Eigen::Vector3d r = correlation_ratios(BipartiteParams(chi, N));
        worst = std::max(worst, std::abs(r[0] - std::sin(2 * chi)));
        worst = std::max(worst, std::abs(r[1] + std::sin(2 * chi)));
        worst = std::max(worst, std::abs(r[2] - 1.0));
      }
    }
    rec.check("correlation ratios collapse to the exact relations", worst < 1e-10, worst);
  }
  {
    const int N = 2;
    const DenseSpin s = dense_spin(N);
    const Eigen::VectorXcd v = dense_schmidt(kPi / 4.0, N);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N + 1, N + 1);
    const double var = dense_exp(v, kron(s.x * s.x, I));
    const double worst = std::abs(var - limiting_values(N).var_limit);
    rec.check("limiting variance value at the entangled point", worst < 1e-9, worst);
  }
}

void verify_entanglement(std::vector<CheckResult>& out, bool quick, std::uint64_t) {
  Recorder rec(out, "entanglement");
  const int N = quick ? 12 : 50;

  {
    double worst = std::abs(schmidt_entropy(BipartiteParams(kPi / 4.0, N)) -
                            std::log2(N + 1.0));
    worst = std::max(worst, std::abs(scs_entropy(BipartiteParams(kPi / 4.0, N)) -
                                     static_cast<double>(N)));
    for (int i = 1; i < 99; ++i) {
      const double chi = (kPi / 2.0) * i / 100.0;
      worst = std::max(worst, std::abs(schmidt_entropy(BipartiteParams(chi, N)) -
                                       schmidt_entropy(BipartiteParams(kPi / 2.0 - chi, N))));
      worst = std::max(worst, std::abs(scs_entropy(BipartiteParams(chi, N)) -
                                       scs_entropy(BipartiteParams(kPi / 2.0 - chi, N))));
    }
    rec.check("entropy maxima and symmetry", worst < 1e-9, worst);
  }
  {
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double chi = (kPi / 2.0) * i / 100.0;
      BipartiteParams p(chi, N);
      Eigen::Matrix<double, 6, 1> means = Eigen::Matrix<double, 6, 1>::Zero();
      means[2] = means[5] = exact_sz(p);
      const double eig = ppt_min_eigenvalue(exact_covariance_matrix(p), omega_from_means(means));
      if (chi == 0.0 || chi == kPi / 2.0) {
        if (eig < -1e-9) ok = false;
      } else if ((chi > 0.02 && chi < kPi / 4.0 - 0.02) ||
                 (chi > kPi / 4.0 + 0.02 && chi < kPi / 2.0 - 0.02)) {
        if (eig >= 0.0) ok = false;
      }
      if (std::abs(chi - kPi / 4.0) < 1e-12) worst = std::max(worst, std::abs(eig));
    }
    const double mid = std::abs(ppt_min_eigenvalue(
        exact_covariance_matrix(BipartiteParams(kPi / 4.0, N)),
        omega_from_means(Eigen::Matrix<double, 6, 1>::Zero())));
    worst = std::max(worst, mid);
    rec.check("covariance criterion detects entanglement away from the balanced point",
              ok && worst <= 1e-6, worst);
  }
  {
    bool ok = true;
    double minval = 0.0;
    double argmin = -1.0;
    for (int i = 1; i < 100; ++i) {
      const double chi = (kPi / 2.0) * i / 100.0;
      const double ht = hoffman_takeuchi_spinor(BipartiteParams(chi, N));
      if (ht >= 0.0) ok = false;
      if (ht < minval) {
        minval = ht;
        argmin = chi;
      }
    }
    const double at_quarter = hoffman_takeuchi_spinor(BipartiteParams(kPi / 4.0, N));
    const double at_quarter_scs = hoffman_takeuchi_scs(BipartiteParams(kPi / 4.0, N));
    double worst = std::abs(at_quarter + 4.0 * N);
    worst = std::max(worst, std::abs(at_quarter_scs + 4.0 * N));
    ok = ok && std::abs(argmin - kPi / 4.0) < 0.02;
    rec.check("witness violation is maximal at the balanced point", ok && worst < 1e-9, worst);
  }
  {
    double worst = 0.0;
    for (int n : quick ? std::vector<int>{1, 10} : std::vector<int>{1, 10, 50})
      worst = std::max(worst, epr_variances(build_epr(n)).cwiseAbs().maxCoeff());
    // product state: z difference deterministic, transverse sums independent
    const int n0 = 10;
    const Eigen::Vector3d v0 = epr_variances(build_schmidt_bipartite(0.0, n0));
    worst = std::max(worst, std::abs(v0[0]));
    worst = std::max(worst, std::abs(v0[1] - 2.0 * n0));
    worst = std::max(worst, std::abs(v0[2] - 2.0 * n0));
    rec.check("balanced-point variances vanish", worst < 1e-9, worst);
  }
  {
    const int n = 10;
    const SpinorState epr = build_epr(n);
    Eigen::MatrixXcd had(2, 2);
    had << 1, 1, 1, -1;
    had /= std::sqrt(2.0);
    SpinorState x = apply_local_unitary(epr, LocalUnitary::from_matrix(1, had));
    x = apply_local_unitary(x, LocalUnitary::from_matrix(2, had));
    double worst = (epr_variances(x) - epr_variances(epr)).cwiseAbs().maxCoeff();
    rec.check("parity correlations survive a basis change", worst < 1e-9, worst);
  }
}

void verify_wigner(std::vector<CheckResult>& out, bool quick, std::uint64_t) {
  Recorder rec(out, "wigner");

  {
    const int two_j = quick ? 16 : 40;
    double worst = 0.0;
    for (int two_M : {0, 2, 7 * 2}) {
      for (int L = 0; L <= two_j; ++L) {
        for (int Lp = L; Lp <= two_j; ++Lp) {
          if (two_M > 2 * L || two_M > 2 * Lp) continue;
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
    rec.check("coupling coefficients are orthogonal", worst < 1e-10, worst);
  }
  {
    double worst = 0.0;
    for (int two_j = 1; two_j <= 12; ++two_j) {
      for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
        for (int two_L = 0; two_L <= 2 * two_j; two_L += 2) {
          const double a = clebsch_gordan(two_j, two_m, two_j, -two_m, two_L, 0);
          const double b = clebsch_gordan_exact(two_j, two_m, two_j, -two_m, two_L, 0);
          worst = std::max(worst, std::abs(a - b));
        }
      }
    }
    worst = std::max(worst, std::abs(clebsch_gordan(1, 1, 1, -1, 0, 0) - 1.0 / std::sqrt(2.0)));
    worst = std::max(worst,
                     std::abs(clebsch_gordan(8, 8, 8, -8, 0, 0) - 1.0 / std::sqrt(9.0)));
    rec.check("coupling coefficients match the exact rational path", worst < 1e-11, worst);
  }
  {
    double worst = std::abs(spherical_harmonic(0, 0, 1.1, 0.3).real() -
                            1.0 / std::sqrt(4.0 * kPi));
    worst = std::max(worst, std::abs(spherical_harmonic(1, 0, 1.1, 0.0).real() -
                                     std::sqrt(3.0 / (4.0 * kPi)) * std::cos(1.1)));
    // quadrature normalization on a Gauss-Legendre x uniform grid
    const AngularGrid g = AngularGrid::regular(48, 96);
    for (auto [L, M] : std::vector<std::pair<int, int>>{{3, 2}, {10, -7}, {20, 20}, {17, 0}}) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < g.theta.size(); ++i)
        for (Eigen::Index j = 0; j < g.phi.size(); ++j)
          acc += std::norm(spherical_harmonic(L, M, g.theta[i], g.phi[j])) * g.theta_weight[i] *
                 (2.0 * kPi / g.phi.size());
      worst = std::max(worst, std::abs(acc - 1.0));
    }
    rec.check("spherical harmonics are orthonormal", worst < 1e-9, worst);
  }
  {
    const int N = quick ? 6 : 10;
    const double th0 = 1.9, ph0 = 2.45;
    Eigen::VectorXcd micro(2);
    micro << std::cos(th0 / 2.0), std::polar(1.0, ph0) * std::sin(th0 / 2.0);
    const SpinorState coh = build_unipartite_spinor(micro, N);
    const AngularGrid g = AngularGrid::regular(64, 64);
    const WignerSlice w = wigner_unipartite(coh, g);
    Eigen::Index bi = 0, bj = 0;
    w.values.maxCoeff(&bi, &bj);
    const double dth = kPi / 64.0, dph = 2.0 * kPi / 64.0;
    double dphi = std::abs(g.phi[bj] - ph0);
    dphi = std::min(dphi, 2.0 * kPi - dphi);
    const bool ok = std::abs(g.theta[bi] - th0) <= 1.5 * dth && dphi <= 1.5 * dph &&
                    w.max_imag_residue < 1e-9;
    rec.check("coherent-state distribution peaks at its angles", ok,
              std::abs(g.theta[bi] - th0));
  }
  {
    const int N = quick ? 6 : 10;
    const SpinorState epr = build_epr(N);
    double worst = 0.0;
    for (auto [t2, p2] : std::vector<std::pair<double, double>>{
             {kPi / 2.0, 0.0}, {kPi / 4.0, kPi / 2.0}, {0.35, 1.2}}) {
      const SpinorState proj = project_second_ensemble(epr, t2, p2);
      Eigen::VectorXcd target(2);
      target << std::cos(t2 / 2.0), std::polar(1.0, -p2) * std::sin(t2 / 2.0);
      worst = std::max(worst,
                       std::abs(1.0 - fidelity(proj, build_unipartite_spinor(target, N))));
    }
    rec.check("projection flips the azimuth", worst < 1e-10, worst);
  }
  {
    const int N = quick ? 6 : 10;
    const ReducedState mixed = traced_rho1(BipartiteParams(kPi / 4.0, N));
    const AngularGrid g = AngularGrid::regular(32, 32);
    const WignerSlice w = wigner_unipartite(mixed, N, g);
    const double spread = w.values.maxCoeff() - w.values.minCoeff();
    rec.check("traced balanced state is uniform", spread < 1e-8 && w.max_imag_residue < 1e-9,
              spread);
  }
  {
    const int N = 6;
    const SpinorState st = build_schmidt_bipartite(kPi / 4.0, N);
    const AngularGrid g = AngularGrid::regular(8, 8);
    const Eigen::MatrixXd marg = wigner_marginal_theta(st, g);
    double worst = 0.0;
    const int nphi = 96;
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int a = 0; a < nphi; ++a) {
          const double p1 = 2.0 * kPi * a / nphi;
          AngularGrid one;
          one.theta = Eigen::VectorXd::Constant(1, g.theta[i]);
          one.theta_weight = Eigen::VectorXd::Ones(1);
          one.phi.resize(nphi);
          for (int b = 0; b < nphi; ++b) one.phi[b] = 2.0 * kPi * b / nphi;
          const WignerSlice sl = wigner_bipartite_slice(st, one, g.theta[j], p1);
          acc += sl.values.row(0).sum() * (2.0 * kPi / nphi) * (2.0 * kPi / nphi);
        }
        worst = std::max(worst, std::abs(acc - marg(i, j)));
      }
    }
    rec.check("analytic marginal matches the quadrature", worst < 1e-8, worst);
  }
  {
    // a local rotation rotates the spherical distribution
    const int N = 6;
    Eigen::VectorXcd micro(2);
    micro << std::cos(0.6), std::polar(1.0, 0.8) * std::sin(0.6);
    const SpinorState st = build_unipartite_spinor(micro, N);
    const Eigen::Vector3d axis(0.3, -0.8, 0.52);
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
        O(a, b) =
            0.5 *
            (sig[static_cast<size_t>(a)] * v * sig[static_cast<size_t>(b)] * v.adjoint())
                .trace()
                .real();
    double worst = 0.0;
    for (double th : {0.5, 1.3, 2.2}) {
      for (double ph : {0.2, 2.9, 4.4}) {
        const Eigen::Vector3d n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                std::cos(th));
        const Eigen::Vector3d back = O.transpose() * n;  // inverse rotation
        const double thb = std::acos(std::clamp(back[2], -1.0, 1.0));
        const double phb = std::atan2(back[1], back[0]);
        const double wr = wigner_unipartite_at(rotated, th, ph);
        const double wo = wigner_unipartite_at(st, thb, phb);
        worst = std::max(worst, std::abs(wr - wo));
      }
    }
    rec.check("distribution rotates with the state", worst < 1e-6, worst);
  }
}

void verify_error_models(std::vector<CheckResult>& out, bool quick, std::uint64_t seed) {
  Recorder rec(out, "error_models");
  const int nmax = quick ? 6 : 10;

  {
    double worst = 0.0;
    for (double gamma : {0.3, 0.8, 1.0}) {
      const auto ops = LossChannel(gamma).kraus_single_mode(nmax);
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
      for (const auto& E : ops) acc += E.transpose() * E;
      worst = std::max(worst,
                       (acc - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff());
    }
    for (double kappa : {0.0, 0.5, 2.0}) {
      const auto ops = DephasingChannel(kappa).kraus(nmax);
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
      for (const auto& E : ops) acc += E.transpose() * E;
      worst = std::max(worst,
                       (acc - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff());
    }
    rec.check("kraus completeness", worst < 1e-9, worst);
  }
  {
    // explicit two-mode Kraus sums reproduce the conjugation scalars
    double worst = 0.0;
    const int N = nmax;
    const int d = N + 1;
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) sp(n, n - 1) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd a = sp.adjoint();  // annihilation on the mode ladder
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    // two-mode spin matrices from mode operators
    const Eigen::MatrixXcd A = kron(a, I), B = kron(I, a);
    const Eigen::MatrixXcd sx = A.adjoint() * B + B.adjoint() * A;
    const Eigen::MatrixXcd sy = Complex(0, -1) * A.adjoint() * B + Complex(0, 1) * B.adjoint() * A;
    const Eigen::MatrixXcd szm = A.adjoint() * A - B.adjoint() * B;
    const Eigen::MatrixXcd num = A.adjoint() * A + B.adjoint() * B;

    for (double gamma : {0.8, 0.5}) {
      const auto ops = LossChannel(gamma).kraus_single_mode(N);
      std::vector<Eigen::MatrixXcd> two;
      for (const auto& Ea : ops)
        for (const auto& Eb : ops) two.push_back(kron(Ea.cast<Complex>(), Eb.cast<Complex>()));
      for (const Eigen::MatrixXcd* S : {&sx, &sy, &szm, &num}) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d * d, d * d);
        for (const auto& E : two) acc += E.adjoint() * (*S) * E;
        worst = std::max(worst, (acc - gamma * (*S)).cwiseAbs().maxCoeff());
      }
    }
    for (double kappa : {0.5, 1.5}) {
      const auto ops = DephasingChannel(kappa).kraus(N);
      for (const Eigen::MatrixXcd* S : {&sx, &sy}) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d * d, d * d);
        for (const auto& E : ops) {
          const Eigen::MatrixXcd Em = kron(E.cast<Complex>(), I);
          acc += Em.adjoint() * (*S) * Em;
        }
        // dephasing acts on mode a only here; S^x and S^y pick up e^{-kappa/2}
        worst = std::max(worst,
                         (acc - std::exp(-kappa / 2.0) * (*S)).cwiseAbs().maxCoeff());
      }
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d * d, d * d);
      for (const auto& E : ops) {
        const Eigen::MatrixXcd Em = kron(E.cast<Complex>(), I);
        acc += Em.adjoint() * szm * Em;
      }
      worst = std::max(worst, (acc - szm).cwiseAbs().maxCoeff());
    }
    rec.check("channel conjugation scalars", worst < 1e-9, worst);
  }
  {
    bool ok = true;
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
      const double eps = 0.5 * i / 50.0;
      const double v = logical_error_m1(eps, 31).exact;
      if (v < prev - 1e-15) ok = false;
      prev = v;
    }
    for (int N = 10; N < 50; N += 5) {
      if (logical_error_m1(0.2, N + 5).exact > logical_error_m1(0.2, N).exact) ok = false;
    }
    for (int N = 10; N <= 50; N += 10)
      for (int i = 1; i <= 40; ++i) {
        const double eps = 0.4 * i / 40.0;
        if (logical_error_m2(eps, N).exact > logical_error_m1(eps, N).exact + 1e-15) ok = false;
      }
    rec.check("logical error curves are ordered and monotone", ok);
  }
  {
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double eps = 0.2 * i / 20.0;
      const LogicalError m1 = logical_error_m1(eps, 50);
      const LogicalError m2 = logical_error_m2(eps, 50);
      worst = std::max(worst, m1.exact / m1.approx);
      worst = std::max(worst, m1.approx / m1.exact);
      worst = std::max(worst, m2.exact / m2.approx);
      worst = std::max(worst, m2.approx / m2.exact);
    }
    rec.check("tail approximations stay within a factor of three", worst < 3.0, worst);
  }
  {
    bool ok = true;
    double worst = 0.0;
    const std::int64_t samples = quick ? 20000 : 100000;
    for (double eps : {0.2, 0.5}) {
      const MonteCarloResult mc = monte_carlo_majority(eps, 21, samples, seed);
      const double exact = logical_error_m1(eps, 21).exact;
      // z = 3 Wilson interval from the recorded counts
      const double n = static_cast<double>(mc.samples);
      const double phat = static_cast<double>(mc.errors) / n;
      const double z2 = 9.0;
      const double center = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
      const double half =
          3.0 * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
      if (exact < center - half || exact > center + half) ok = false;
      worst = std::max(worst, std::abs(phat - exact));
    }
    const MonteCarloResult zero = monte_carlo_majority(0.0, 21, samples, seed);
    ok = ok && zero.errors == 0;
    rec.check("sampled majority vote brackets the exact tail", ok, worst);
  }
}

void verify_equivalence(std::vector<CheckResult>& out, bool quick, std::uint64_t seed) {
  Recorder rec(out, "equivalence");

  {
    std::mt19937_64 rng(seed + 7);
    double worst = 0.0;
    const int draws = quick ? 12 : 50;
    for (int t = 0; t < draws; ++t) {
      const int L = 2 + static_cast<int>(rng() % 2);
      const int N = 1 + static_cast<int>(rng() % 6);
      const double f = unipartite_equivalence_check(random_state(rng, L), N);
      worst = std::max(worst, std::abs(1.0 - f));
    }
    rec.check("single-subsystem states map onto symmetrized strings", worst < 1e-10, worst);
  }
  {
    double worst = 0.0;
    bool ok = true;
    Eigen::VectorXi counts(2);
    counts << 2, 1;
    const SymmetrizedState s = fock_to_symmetrized(OccupationVector(counts));
    double norm = 0.0;
    for (const auto& [key, amp] : s.amplitudes) norm += std::norm(amp);
    worst = std::abs(norm - 1.0);
    ok = s.amplitudes.size() == 3;
    rec.check("symmetrization produces the normalized permutation sum", ok && worst < 1e-12,
              worst);
  }
  {
    std::mt19937_64 rng(seed + 8);
    std::normal_distribution<double> g;
    bool ok = true;
    double worst_product = 0.0;
    int entangled_checked = 0;
    for (int t = 0; t < 20; ++t) {
      Eigen::Vector2cd u, v;
      u << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      v << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
      u.normalize();
      v.normalize();
      const double d = bipartite_inequivalence_witness(u[0] * v[0], u[0] * v[1], u[1] * v[0],
                                                       u[1] * v[1]);
      worst_product = std::max(worst_product, d);
    }
    for (int t = 0; t < 40 && entangled_checked < 20; ++t) {
      Eigen::VectorXcd c = random_state(rng, 4);
      if (std::abs(c[0] * c[3] - c[1] * c[2]) <= 0.1) continue;
      ++entangled_checked;
      if (bipartite_inequivalence_witness(c[0], c[1], c[2], c[3]) <= 1e-4) ok = false;
    }
    ok = ok && entangled_checked >= 10;
    rec.check("mapping deficit separates product from entangled coefficients",
              ok && worst_product < 1e-10, worst_product);
  }
  {
    bool ok = true;
    double prev = -1.0;
    for (int i = 0; i <= 10; ++i) {
      const double x = i / 10.0;
      // |alpha omega - beta gamma| = x/2 along this normalized family
      const double t = std::sqrt((1.0 + x) / 4.0);
      const double s = std::sqrt((1.0 - x) / 4.0);
      const double d = bipartite_inequivalence_witness(t, s, s, t);
      if (d < prev - 1e-12) ok = false;
      prev = d;
    }
    rec.check("mapping deficit grows with the coefficient mismatch", ok);
  }
}

}  // namespace

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> suites = {
      "fock",        "states", "observables",  "closed_forms",
      "entanglement", "wigner", "error_models", "equivalence"};
  return suites;
}

std::vector<CheckResult> run_verification(const std::string& suite, bool quick,
                                          std::uint64_t seed) {
  std::vector<CheckResult> out;
  const bool all = suite.empty() || suite == "all";
  auto want = [&](const char* name) { return all || suite == name; };
  if (want("fock")) verify_fock(out, quick, seed);
  if (want("states")) verify_states(out, quick, seed);
  if (want("observables")) verify_observables(out, quick, seed);
  if (want("closed_forms")) verify_closed_forms(out, quick, seed);
  if (want("entanglement")) verify_entanglement(out, quick, seed);
  if (want("wigner")) verify_wigner(out, quick, seed);
  if (want("error_models")) verify_error_models(out, quick, seed);
  if (want("equivalence")) verify_equivalence(out, quick, seed);
  if (out.empty()) throw std::invalid_argument("unknown verification suite: " + suite);
  return out;
}

nlohmann::json verification_to_json(const std::vector<CheckResult>& results) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  int failures = 0;
  for (const auto& r : results) {
    j["checks"].push_back(
        {{"suite", r.suite}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass) ++failures;
  }
  j["failures"] = failures;
  j["total"] = results.size();
  return j;
}

}  // namespace spinor
