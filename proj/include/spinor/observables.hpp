#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <json.hpp>

#include "spinor/states.hpp"

namespace spinor {

enum class SpinAxis { X, Y, Z, Plus, Minus };

/// Collective spin operator on one two-level subsystem, in Schwinger-boson
/// form: S^+|k> = sqrt((k+1)(N-k))|k+1>, S^-|k> = sqrt(k(N-k+1))|k-1>,
/// S^z|k> = (2k-N)|k>, S^x = S^+ + S^-, S^y = -i S^+ + i S^-.
/// The action is applied band-sparsely; matrices are never materialized.
struct SpinOperator {
  int subsystem = 1;  // 1-based
  SpinAxis axis = SpinAxis::Z;
};

/// The Schmidt-basis operator set (x1, y1, z1, x2, y2, z2).
std::array<SpinOperator, 6> spin_operator_set();

/// op applied to a linear amplitude vector of `state`'s layout.
Eigen::VectorXcd apply_spin_operator(const SpinorState& state, const Eigen::VectorXcd& amps,
                                     const SpinOperator& op);

/// <state| ops[0] ops[1] ... |state>; products of up to 3 operators.
Complex expectation(const SpinorState& state, std::span<const SpinOperator> ops);
Complex expectation(const SpinorState& state, const SpinOperator& op);

/// Hermitian products are real; asserts the imaginary residue stays tiny.
double expectation_real(const SpinorState& state, std::span<const SpinOperator> ops);

/// Symmetrized covariance matrix V, commutation matrix Omega, correlation
/// matrix and means over the operator set above.
struct CovarianceReport {
  Eigen::Matrix<double, 6, 1> means;
  Eigen::Matrix<double, 6, 6> V;
  Eigen::Matrix<double, 6, 6> Omega;
  Eigen::Matrix<double, 6, 6> Corr;
};

nlohmann::json report_to_json(const CovarianceReport& report);

/// Covariance report for a bipartite two-level state. The tilde (Schmidt
/// basis) operators V†SV are realized by rotating the state with the supplied
/// unitaries. Throws for M != 2 or L != 2.
CovarianceReport covariance_report(const SpinorState& state,
                                   std::span<const LocalUnitary> basis_unitaries = {});

/// Corr(S^j_1, S^j_2) with a guarded zero-variance path: when covariance and
/// both variances vanish together the closed-form limit is returned (1 on the
/// z axis); an underflowing denominator alone yields a quiet NaN sentinel.
double correlation(const SpinorState& state, SpinAxis axis);

/// One-molecule operator c of a particle-interchange-symmetric observable
/// C = sum_n c_n.
struct SymmetricObservable {
  explicit SymmetricObservable(Eigen::MatrixXcd c_in);
  Eigen::MatrixXcd c;
};

/// sigma^axis acting on one subsystem of an M-partite two-level molecule.
SymmetricObservable single_site_spin(int M, int subsystem, SpinAxis axis);

/// <C> = N <c> on an N-fold duplicated microscopic state.
double scs_expectation(const ScsState& scs, const SymmetricObservable& obs);

/// Cov(C, D) = N Cov(c, d) (symmetrized product).
double scs_covariance(const ScsState& scs, const SymmetricObservable& c,
                      const SymmetricObservable& d);

/// Third central moments also scale linearly: N <(c-<c>)(d-<d>)(e-<e>)>.
double scs_central_moment3(const ScsState& scs, const SymmetricObservable& c,
                           const SymmetricObservable& d, const SymmetricObservable& e);

/// Parent Hamiltonian of the bipartite Schmidt state on the (N+1)^2 space;
/// satisfies H0 |state(chi)> = -N(N+2) |state(chi)> for all chi.
Eigen::SparseMatrix<double> build_h0(double chi, int N);

}  // namespace spinor
