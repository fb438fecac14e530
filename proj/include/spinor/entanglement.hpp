#pragma once

#include <Eigen/Dense>

#include "spinor/closed_forms.hpp"
#include "spinor/observables.hpp"
#include "spinor/states.hpp"

namespace spinor {

/// Diagonal Fock mixture of one subsystem after tracing out the other.
struct ReducedState {
  Eigen::VectorXd eigenvalues;  // probabilities over Fock index k = 0..N
};

/// Normalized Schmidt weights cos^{2k} sin^{2N-2k} (log-domain softmax).
Eigen::ArrayXd schmidt_weights(BipartiteParams p);

/// Entanglement entropy -sum lambda log2 lambda of a bipartite pure state.
/// States supported on the correlated pairs keep their analytic Schmidt
/// spectrum; general states go through an SVD of the amplitude matrix.
double von_neumann_entropy(const SpinorState& state);

/// Analytic Schmidt-state entropy from the normalized weights
/// cos^{2k} sin^{2N-2k}.
double schmidt_entropy(BipartiteParams p);

/// Entropy of the N-fold duplicated two-qubit Schmidt product state:
/// N h(cos^2 chi) bits, additive over the independent copies.
double scs_entropy(BipartiteParams p);

/// Minimum eigenvalue of PT(V) + (i/2) PT(Omega), where PT flips the sign of
/// every entry involving S^y_2 an odd number of times and leaves Omega fixed
/// (the transverse means vanish in scope). Negative => entanglement detected.
double ppt_min_eigenvalue(const Matrix6d& V, const Matrix6d& Omega);
double ppt_min_eigenvalue(const CovarianceReport& report);

/// Commutation matrix from the six operator means.
Matrix6d omega_from_means(const Eigen::Matrix<double, 6, 1>& means);

/// Hoffman-Takeuchi witness
/// Var(Sx1-Sx2) + Var(Sy1+Sy2) + Var(Sz1-Sz2) - 4N; negative => entangled.
double hoffman_takeuchi(const SpinorState& state);
double hoffman_takeuchi_spinor(BipartiteParams p);  // closed-form route
double hoffman_takeuchi_scs(BipartiteParams p);     // via scs_covariance_matrix

/// (Var(Sz1-Sz2), Var(Sx1-Sx2), Var(Sy1+Sy2)).
Eigen::Vector3d epr_variances(const SpinorState& state);

}  // namespace spinor
