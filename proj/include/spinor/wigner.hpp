#pragma once

#include <string>

#include <Eigen/Dense>

#include "spinor/entanglement.hpp"
#include "spinor/states.hpp"

namespace spinor {

/// <j1 m1; j2 m2 | J M> by the Racah formula, quantum numbers passed doubled
/// so half-integers stay exact. Log-factorial evaluation with sign tracking;
/// selection-rule violations return 0 rather than throwing.
double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M);

/// Exact big-rational Racah evaluation; reference path for large j where the
/// alternating sum loses digits in doubles, and the test oracle for small j.
double clebsch_gordan_exact(int two_j1, int two_m1, int two_j2, int two_m2, int two_J,
                            int two_M);

/// Orthonormal spherical harmonic with the Condon-Shortley phase, associated
/// Legendre part by stable upward recurrence in L. Returns 0 for |M| > L.
Complex spherical_harmonic(int L, int M, double theta, double phi);

/// Gauss-Legendre nodes in cos(theta) x uniform phi grid on [0, 2pi).
struct AngularGrid {
  Eigen::VectorXd theta;
  Eigen::VectorXd theta_weight;  // GL weights in cos(theta); sum to 2
  Eigen::VectorXd phi;
  static AngularGrid regular(int n_theta, int n_phi);
};

/// Gauss-Legendre nodes/weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

struct WignerOptions {
  int cap = 20;           // largest N without the extended-precision path
  bool exact_cg = false;  // use the big-rational CG path (lifts the cap)
};

struct WignerSlice {
  bool has_fixed = false;
  double fixed_theta = 0.0;
  double fixed_phi = 0.0;
  Eigen::MatrixXd values;  // n_theta x n_phi
  double max_imag_residue = 0.0;
  std::string convention_tag = "paper-literal";
};

/// Spherical Wigner function of a one-subsystem state, kernel exactly as the
/// multipartite formula with M = 1 (no extra normalization constant; outputs
/// are tagged with the convention).
WignerSlice wigner_unipartite(const SpinorState& state, const AngularGrid& grid,
                              const WignerOptions& options = {});
WignerSlice wigner_unipartite(const ReducedState& rho, int N, const AngularGrid& grid,
                              const WignerOptions& options = {});
double wigner_unipartite_at(const SpinorState& state, double theta, double phi,
                            const WignerOptions& options = {});

/// Bipartite Wigner function on the (theta1, phi1) grid at fixed
/// (theta2, phi2). Schmidt-support states restrict the double sum to the
/// correlated pairs automatically (zero amplitudes are skipped).
WignerSlice wigner_bipartite_slice(const SpinorState& state, const AngularGrid& grid,
                                   double theta2, double phi2,
                                   const WignerOptions& options = {});
double wigner_bipartite_at(const SpinorState& state, double theta1, double phi1, double theta2,
                           double phi2, const WignerOptions& options = {});

/// Marginal over both phi angles, done analytically: only m = m' terms
/// survive the phi integrals, leaving a Legendre-polynomial double sum.
Eigen::MatrixXd wigner_marginal_theta(const SpinorState& state, const AngularGrid& grid,
                                      const WignerOptions& options = {});

/// <<theta2, phi2| state >>, normalized; for the maximally entangled state
/// this produces the coherent state at (theta2, -phi2) on subsystem 1.
SpinorState project_second_ensemble(const SpinorState& state, double theta2, double phi2);

/// Diagonal reduced state of subsystem 1 of the Schmidt state: weights
/// cos^{2k} sin^{2N-2k}, normalized.
ReducedState traced_rho1(BipartiteParams p);

}  // namespace spinor
