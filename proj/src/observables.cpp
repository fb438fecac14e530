#include "spinor/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spinor {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_two_level(const SpinorState& state, const char* who) {
  if (state.levels() != 2)
    throw std::invalid_argument(std::string(who) + ": spin operators need two-level subsystems");
}

}  // namespace

std::array<SpinOperator, 6> spin_operator_set() {
  return {SpinOperator{1, SpinAxis::X}, SpinOperator{1, SpinAxis::Y}, SpinOperator{1, SpinAxis::Z},
          SpinOperator{2, SpinAxis::X}, SpinOperator{2, SpinAxis::Y}, SpinOperator{2, SpinAxis::Z}};
}

Eigen::VectorXcd apply_spin_operator(const SpinorState& state, const Eigen::VectorXcd& amps,
                                     const SpinOperator& op) {
  require_two_level(state, "apply_spin_operator");
  if (op.subsystem < 1 || op.subsystem > state.subsystems())
    throw std::invalid_argument("apply_spin_operator: subsystem out of range");
  const int N = state.duplication();
  const Eigen::Index d = state.subsystem_dim();  // N + 1
  Eigen::Index inner = 1;
  for (int q = op.subsystem; q < state.subsystems(); ++q) inner *= d;

  // Fock index i corresponds to k = N - i bosons in mode a.
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amps.size());
  const bool use_plus = op.axis == SpinAxis::X || op.axis == SpinAxis::Y ||
                        op.axis == SpinAxis::Plus;
  const bool use_minus = op.axis == SpinAxis::X || op.axis == SpinAxis::Y ||
                         op.axis == SpinAxis::Minus;
  const Complex plus_coeff = op.axis == SpinAxis::Y ? -kI : Complex(1.0, 0.0);
  const Complex minus_coeff = op.axis == SpinAxis::Y ? kI : Complex(1.0, 0.0);

  for (Eigen::Index flat = 0; flat < amps.size(); ++flat) {
    const Complex a = amps[flat];
    if (a == Complex(0.0, 0.0)) continue;
    const Eigen::Index i = (flat / inner) % d;
    switch (op.axis) {
      case SpinAxis::Z:
        out[flat] += static_cast<double>(N - 2 * static_cast<int>(i)) * a;
        continue;
      default:
        break;
    }
    if (use_plus && i > 0) {
      const double f = std::sqrt(static_cast<double>(N - i + 1) * static_cast<double>(i));
      out[flat - inner] += plus_coeff * f * a;
    }
    if (use_minus && i < d - 1) {
      const double f = std::sqrt(static_cast<double>(N - i) * static_cast<double>(i + 1));
      out[flat + inner] += minus_coeff * f * a;
    }
  }
  return out;
}

Complex expectation(const SpinorState& state, std::span<const SpinOperator> ops) {
  if (ops.size() > 3)
    throw std::invalid_argument("expectation: products of more than 3 operators unsupported");
  Eigen::VectorXcd amps = state.linear_amplitudes();
  Eigen::VectorXcd cur = amps;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    cur = apply_spin_operator(state, cur, *it);
  return amps.dot(cur);
}

Complex expectation(const SpinorState& state, const SpinOperator& op) {
  return expectation(state, std::span<const SpinOperator>(&op, 1));
}

double expectation_real(const SpinorState& state, std::span<const SpinOperator> ops) {
  Complex v = expectation(state, ops);
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
    throw std::runtime_error("expectation_real: imaginary residue too large");
  return v.real();
}

CovarianceReport covariance_report(const SpinorState& state,
                                   std::span<const LocalUnitary> basis_unitaries) {
  if (state.subsystems() != 2 || state.levels() != 2)
    throw std::invalid_argument("covariance_report: only the bipartite two-level case is supported");

  // <psi|V† S V|psi> = <V psi|S|V psi>: realize the tilde operators by
  // rotating the state once.
  SpinorState rotated = state;
  for (const LocalUnitary& V : basis_unitaries) rotated = apply_local_unitary(rotated, V);

  const auto xi = spin_operator_set();
  Eigen::VectorXcd amps = rotated.linear_amplitudes();
  std::array<Eigen::VectorXcd, 6> applied;
  for (int j = 0; j < 6; ++j) applied[j] = apply_spin_operator(rotated, amps, xi[j]);

  CovarianceReport rep;
  for (int j = 0; j < 6; ++j) rep.means[j] = amps.dot(applied[j]).real();
  for (int j = 0; j < 6; ++j) {
    for (int k = j; k < 6; ++k) {
      // Re<xi_j xi_k> equals the symmetrized product for Hermitian operators.
      const double v = applied[j].dot(applied[k]).real() - rep.means[j] * rep.means[k];
      rep.V(j, k) = v;
      rep.V(k, j) = v;
    }
  }

  // Omega_jk = -i<[xi_j, xi_k]> follows from the means and [S^a,S^b] = 2i eps S^c.
  rep.Omega.setZero();
  for (int m = 0; m < 2; ++m) {
    const int o = 3 * m;
    const double sx = rep.means[o], sy = rep.means[o + 1], sz = rep.means[o + 2];
    rep.Omega(o + 0, o + 1) = 2.0 * sz;
    rep.Omega(o + 1, o + 0) = -2.0 * sz;
    rep.Omega(o + 1, o + 2) = 2.0 * sx;
    rep.Omega(o + 2, o + 1) = -2.0 * sx;
    rep.Omega(o + 2, o + 0) = 2.0 * sy;
    rep.Omega(o + 0, o + 2) = -2.0 * sy;
  }

  for (int j = 0; j < 6; ++j) {
    for (int k = 0; k < 6; ++k) {
      if (j == k) {
        rep.Corr(j, k) = 1.0;
        continue;
      }
      const double denom = rep.V(j, j) * rep.V(k, k);
      rep.Corr(j, k) = denom > 0.0 ? rep.V(j, k) / std::sqrt(denom)
                                   : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rep;
}

double correlation(const SpinorState& state, SpinAxis axis) {
  if (state.subsystems() != 2 || state.levels() != 2)
    throw std::invalid_argument("correlation: only the bipartite two-level case is supported");
  Eigen::VectorXcd amps = state.linear_amplitudes();
  Eigen::VectorXcd w1 = apply_spin_operator(state, amps, {1, axis});
  Eigen::VectorXcd w2 = apply_spin_operator(state, amps, {2, axis});
  const double m1 = amps.dot(w1).real();
  const double m2 = amps.dot(w2).real();
  // all three second moments go through the same primitive so the ratio of
  // ill-conditioned differences cancels exactly on the correlated support
  const double var1 = w1.dot(w1).real() - m1 * m1;
  const double var2 = w2.dot(w2).real() - m2 * m2;
  const double cov = w1.dot(w2).real() - m1 * m2;

  const double N = state.duplication();
  const double tol = 1e-12 * std::max(1.0, N * N);
  if (var1 <= tol || var2 <= tol) {
    if (std::abs(cov) <= tol)
      return axis == SpinAxis::Z ? 1.0 : 0.0;  // closed-form 0/0 limit
    return std::numeric_limits<double>::quiet_NaN();
  }
  return cov / std::sqrt(var1 * var2);
}

SymmetricObservable::SymmetricObservable(Eigen::MatrixXcd c_in) : c(std::move(c_in)) {
  if (c.rows() != c.cols()) throw std::invalid_argument("SymmetricObservable: square matrix required");
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("SymmetricObservable: matrix must be Hermitian");
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

SymmetricObservable single_site_spin(int M, int subsystem, SpinAxis axis) {
  if (subsystem < 1 || subsystem > M)
    throw std::invalid_argument("single_site_spin: subsystem out of range");
  Eigen::MatrixXcd sigma(2, 2);
  switch (axis) {
    case SpinAxis::X: sigma << 0, 1, 1, 0; break;
    case SpinAxis::Y: sigma << Complex(0, 0), -kI, kI, Complex(0, 0); break;
    case SpinAxis::Z: sigma << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("single_site_spin: axis must be x, y or z");
  }
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
  for (int m = 1; m <= M; ++m)
    op = kron(op, m == subsystem ? sigma : Eigen::MatrixXcd::Identity(2, 2));
  return SymmetricObservable(std::move(op));
}

namespace {

void check_scs_dims(const ScsState& scs, const SymmetricObservable& obs, const char* who) {
  if (obs.c.rows() != scs.psi.size())
    throw std::invalid_argument(std::string(who) + ": observable dimension mismatch");
}

}  // namespace

double scs_expectation(const ScsState& scs, const SymmetricObservable& obs) {
  check_scs_dims(scs, obs, "scs_expectation");
  return scs.N * (scs.psi.adjoint() * obs.c * scs.psi)(0, 0).real();
}

double scs_covariance(const ScsState& scs, const SymmetricObservable& c,
                      const SymmetricObservable& d) {
  check_scs_dims(scs, c, "scs_covariance");
  check_scs_dims(scs, d, "scs_covariance");
  const double mc = (scs.psi.adjoint() * c.c * scs.psi)(0, 0).real();
  const double md = (scs.psi.adjoint() * d.c * scs.psi)(0, 0).real();
  const double cd = (scs.psi.adjoint() * (c.c * d.c) * scs.psi)(0, 0).real();
  return scs.N * (cd - mc * md);
}

double scs_central_moment3(const ScsState& scs, const SymmetricObservable& c,
                           const SymmetricObservable& d, const SymmetricObservable& e) {
  check_scs_dims(scs, c, "scs_central_moment3");
  check_scs_dims(scs, d, "scs_central_moment3");
  check_scs_dims(scs, e, "scs_central_moment3");
  const Eigen::Index dim = scs.psi.size();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const double mc = (scs.psi.adjoint() * c.c * scs.psi)(0, 0).real();
  const double md = (scs.psi.adjoint() * d.c * scs.psi)(0, 0).real();
  const double me = (scs.psi.adjoint() * e.c * scs.psi)(0, 0).real();
  const Eigen::MatrixXcd prod = (c.c - mc * id) * (d.c - md * id) * (e.c - me * id);
  return scs.N * (scs.psi.adjoint() * prod * scs.psi)(0, 0).real();
}

Eigen::SparseMatrix<double> build_h0(double chi, int N) {
  // sin(2chi)(Sy1 Sy2 - Sx1 Sx2) - cos(2chi)(Sz1 + Sz2) - Sz1 Sz2.
  // On the correlated ladder SySy - SxSx = -2(S+S+ + S-S-), so the matrix is
  // pentadiagonal in the pair index. The cos(2chi) sign pairs the eigenvalue
  // -N(N+2) with the state that carries cos(chi) on the a modes.
  const double s2 = std::sin(2.0 * chi);
  const double c2 = std::cos(2.0 * chi);
  const int d = N + 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(d) * d * 5);
  auto k_of = [N](int i) { return N - i; };  // Fock index -> mode-a count
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 0; i2 < d; ++i2) {
      const int row = i1 * d + i2;
      const double z1 = 2.0 * k_of(i1) - N;
      const double z2 = 2.0 * k_of(i2) - N;
      trip.emplace_back(row, row, -c2 * (z1 + z2) - z1 * z2);
      // -2 sin(2chi) (S+1 S+2 + S-1 S-2)
      if (i1 > 0 && i2 > 0) {
        const double f = std::sqrt(static_cast<double>(N - i1 + 1) * i1) *
                         std::sqrt(static_cast<double>(N - i2 + 1) * i2);
        trip.emplace_back((i1 - 1) * d + (i2 - 1), row, -2.0 * s2 * f);
      }
      if (i1 < d - 1 && i2 < d - 1) {
        const double f = std::sqrt(static_cast<double>(N - i1) * (i1 + 1)) *
                         std::sqrt(static_cast<double>(N - i2) * (i2 + 1));
        trip.emplace_back((i1 + 1) * d + (i2 + 1), row, -2.0 * s2 * f);
      }
    }
  }
  Eigen::SparseMatrix<double> H(d * d, d * d);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

nlohmann::json report_to_json(const CovarianceReport& report) {
  auto mat = [](const Eigen::Matrix<double, 6, 6>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 6; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < 6; ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::json j;
  j["operator_set"] = {"sx1", "sy1", "sz1", "sx2", "sy2", "sz2"};
  j["means"] = std::vector<double>(report.means.data(), report.means.data() + 6);
  j["V"] = mat(report.V);
  j["Omega"] = mat(report.Omega);
  j["Corr"] = mat(report.Corr);
  return j;
}

}  // namespace spinor
