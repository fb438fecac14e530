#include "spinor/entanglement.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spinor {

namespace {

double entropy_bits(const Eigen::VectorXd& lambda) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double l = lambda[i];
    if (l > 0.0) e -= l * std::log2(l);
  }
  return e;
}

}  // namespace

Eigen::ArrayXd schmidt_weights(BipartiteParams p) {
  const double c = std::cos(p.chi), s = std::sin(p.chi);
  const double lc = c > 0.0 ? std::log(c) : kNegInf;
  const double ls = s > 0.0 ? std::log(s) : kNegInf;
  Eigen::ArrayXd w(p.N + 1);
  for (int k = 0; k <= p.N; ++k) {
    double v = 0.0;
    if (k > 0) v += 2.0 * k * lc;
    if (k < p.N) v += 2.0 * (p.N - k) * ls;
    w[k] = v;
  }
  const double lse = log_sum_exp(w);
  return (w - lse).exp();
}

double von_neumann_entropy(const SpinorState& state) {
  if (state.subsystems() != 2)
    throw std::invalid_argument("von_neumann_entropy: bipartite state required");
  const Eigen::Index d = state.subsystem_dim();
  Eigen::VectorXcd amps = state.linear_amplitudes();
  Eigen::Map<const Eigen::MatrixXcd> A(amps.data(), d, d);  // column-major: A(i2, i1)

  bool diagonal_support = true;
  for (Eigen::Index i = 0; i < d && diagonal_support; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j && A(i, j) != Complex(0.0, 0.0)) {
        diagonal_support = false;
        break;
      }
  if (diagonal_support) {
    Eigen::VectorXd lambda = A.diagonal().cwiseAbs2();
    return entropy_bits(lambda);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  Eigen::VectorXd lambda = svd.singularValues().array().square();
  return entropy_bits(lambda);
}

double schmidt_entropy(BipartiteParams p) {
  Eigen::VectorXd lambda = schmidt_weights(p).matrix();
  return entropy_bits(lambda);
}

double scs_entropy(BipartiteParams p) {
  const double q = std::cos(p.chi) * std::cos(p.chi);
  double h = 0.0;
  if (q > 0.0) h -= q * std::log2(q);
  if (q < 1.0) h -= (1.0 - q) * std::log2(1.0 - q);
  return p.N * h;
}

Matrix6d omega_from_means(const Eigen::Matrix<double, 6, 1>& means) {
  Matrix6d Omega = Matrix6d::Zero();
  for (int m = 0; m < 2; ++m) {
    const int o = 3 * m;
    const double sx = means[o], sy = means[o + 1], sz = means[o + 2];
    Omega(o + 0, o + 1) = 2.0 * sz;
    Omega(o + 1, o + 0) = -2.0 * sz;
    Omega(o + 1, o + 2) = 2.0 * sx;
    Omega(o + 2, o + 1) = -2.0 * sx;
    Omega(o + 2, o + 0) = 2.0 * sy;
    Omega(o + 0, o + 2) = -2.0 * sy;
  }
  return Omega;
}

double ppt_min_eigenvalue(const Matrix6d& V, const Matrix6d& Omega) {
  // Index parity flip on the S^y_2 slot (row/column 4).
  Eigen::Matrix<double, 6, 1> f;
  f << 1, 1, 1, 1, -1, 1;
  const Matrix6d Vpt = f.asDiagonal() * V * f.asDiagonal();
  Eigen::Matrix<std::complex<double>, 6, 6> H =
      Vpt.cast<std::complex<double>>() +
      std::complex<double>(0.0, 0.5) * Omega.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<double>, 6, 6>> es(H);
  return es.eigenvalues().minCoeff();
}

double ppt_min_eigenvalue(const CovarianceReport& report) {
  if ((report.V - report.V.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("ppt_min_eigenvalue: covariance matrix must be symmetric");
  return ppt_min_eigenvalue(report.V, report.Omega);
}

double hoffman_takeuchi(const SpinorState& state) {
  const auto xi = spin_operator_set();
  Eigen::VectorXcd amps = state.linear_amplitudes();
  auto var_of = [&](const SpinOperator& a, const SpinOperator& b, double sign) {
    // Var(A + sign B) with A, B on different subsystems.
    Eigen::VectorXcd wa = apply_spin_operator(state, amps, a);
    Eigen::VectorXcd wb = apply_spin_operator(state, amps, b);
    Eigen::VectorXcd w = wa + sign * wb;
    const double mean = amps.dot(w).real();
    return w.squaredNorm() - mean * mean;
  };
  const double vx = var_of(xi[0], xi[3], -1.0);
  const double vy = var_of(xi[1], xi[4], +1.0);
  const double vz = var_of(xi[2], xi[5], -1.0);
  return vx + vy + vz - 4.0 * state.duplication();
}

double hoffman_takeuchi_spinor(BipartiteParams p) {
  // Var(Sx1-Sx2) = Var(Sy1+Sy2) = 2(<Sx^2> - <Sx1 Sx2>); Var(Sz1-Sz2) = 0.
  const double x2 = exact_sx2(p);
  const double xx = exact_sxsx(p);
  return 4.0 * (x2 - xx) - 4.0 * p.N;
}

double hoffman_takeuchi_scs(BipartiteParams p) {
  const Matrix6d V = scs_covariance_matrix(p);
  const double vx = V(0, 0) + V(3, 3) - 2.0 * V(0, 3);
  const double vy = V(1, 1) + V(4, 4) + 2.0 * V(1, 4);
  const double vz = V(2, 2) + V(5, 5) - 2.0 * V(2, 5);
  return vx + vy + vz - 4.0 * p.N;
}

Eigen::Vector3d epr_variances(const SpinorState& state) {
  const auto xi = spin_operator_set();
  Eigen::VectorXcd amps = state.linear_amplitudes();
  auto var_of = [&](const SpinOperator& a, const SpinOperator& b, double sign) {
    Eigen::VectorXcd w = apply_spin_operator(state, amps, a) +
                         sign * apply_spin_operator(state, amps, b);
    const double mean = amps.dot(w).real();
    return w.squaredNorm() - mean * mean;
  };
  return {var_of(xi[2], xi[5], -1.0), var_of(xi[0], xi[3], -1.0), var_of(xi[1], xi[4], +1.0)};
}

}  // namespace spinor
