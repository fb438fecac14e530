#pragma once

#include <unordered_map>
#include <string>

#include <Eigen/Dense>

#include "spinor/fock.hpp"
#include "spinor/log_space.hpp"

namespace spinor {

/// A state over distinguishable-particle basis strings (l_1, ..., l_N),
/// stored sparsely; invariant under transposition of particle labels.
struct SymmetrizedState {
  int N = 0;
  int L = 0;
  std::unordered_map<std::string, Complex> amplitudes;  // key: bytes l_1..l_N
};

inline constexpr int kDistinguishableCap = 8;  // L^N growth

/// The normalized equal superposition over all distinct permutations of the
/// occupation pattern: multinomial(N;k) strings of amplitude 1/sqrt(mult).
SymmetrizedState fock_to_symmetrized(const OccupationVector& occ);

/// Fidelity between |psi>^{tensor N} expanded over distinguishable strings
/// and the image of the N-boson expansion under fock_to_symmetrized;
/// 1 up to roundoff for every single-subsystem state.
double unipartite_equivalence_check(const Eigen::VectorXcd& psi, int N);

/// |1 - F| where F is the fidelity between the two-copy product of the
/// two-qubit state (alpha, beta, gamma, omega) and the image of its
/// two-boson counterpart, both with per-subsystem particle grouping.
/// Vanishes exactly when alpha*omega = beta*gamma (unentangled coefficients);
/// the mismatch weight sits on the antisymmetric-within-subsystem component.
double bipartite_inequivalence_witness(Complex alpha, Complex beta, Complex gamma,
                                       Complex omega);

}  // namespace spinor
