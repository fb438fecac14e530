#pragma once

#include <Eigen/Dense>

#include "spinor/errors.hpp"

namespace spinor {

/// Parameters of the bipartite Schmidt-form state
/// (cos(chi) a†_1 a†_2 + sin(chi) b†_1 b†_2)^N |vac>.
struct BipartiteParams {
  double chi = 0.0;  // [0, pi/2]
  int N = 1;
  BipartiteParams(double chi_in, int N_in);
};

using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Every exact expression below has two code paths: a rational-trig closed
// form and the normalized Fock summation. The printed forms are 0/0 at
// cos(2chi) = 0, so the summation path is authoritative there (and at the
// chi = 0, pi/2 endpoints). The dispatching functions switch within
// |cos 2chi| < 1e-3 of the crossing.

double log_norm_factor(BipartiteParams p);      // ln N_Psi
double exact_sz(BipartiteParams p);             // <Sz_m>
double exact_szsz(BipartiteParams p);           // <Sz_1 Sz_2> = <(Sz_m)^2>
double exact_sxsx(BipartiteParams p);           // <Sx_1 Sx_2> = -<Sy_1 Sy_2>
double exact_sx2(BipartiteParams p);            // <(Sx_m)^2> = <(Sy_m)^2>

// Individual paths, exposed for cross-validation.
double log_norm_factor_sum(BipartiteParams p);
double log_norm_factor_rational(BipartiteParams p);
double exact_sz_sum(BipartiteParams p);
double exact_sz_rational(BipartiteParams p);
double exact_szsz_sum(BipartiteParams p);
double exact_szsz_rational(BipartiteParams p);
double exact_sxsx_sum(BipartiteParams p);
double exact_sxsx_rational(BipartiteParams p);
double exact_sx2_sum(BipartiteParams p);
double exact_sx2_rational(BipartiteParams p);

// Derived second moments.
double var_sz(BipartiteParams p);
double cov_szsz(BipartiteParams p);

/// Full 6x6 symmetrized covariance matrix over (x1,y1,z1,x2,y2,z2) assembled
/// from the exact expressions.
Matrix6d exact_covariance_matrix(BipartiteParams p);

/// Exact correlation ratios: (sin 2chi, -sin 2chi, 1) for (x, y, z).
Eigen::Vector3d correlation_ratios(BipartiteParams p);

/// Large-N approximate covariance matrix (entries N/|cos 2chi|,
/// +-N sin2chi/|cos 2chi|, tan^2 2chi). Valid away from chi = pi/4; throws
/// DomainOfValidityError inside the margin or for small N.
Matrix6d approx_covariance_matrix(BipartiteParams p, double margin = 0.1);

/// Exact covariance matrix of the matching N-fold duplicated product state:
/// N x (unit variances, sin 2chi cross terms, sin^2 2chi on z).
Matrix6d scs_covariance_matrix(BipartiteParams p);

/// chi -> pi/4 limits: every variance approaches N(N+2)/3 and the covariance
/// carries sign (-1)^{delta_{jy}}.
struct LimitingValues {
  double var_limit;
  Eigen::Vector3d cov_sign;
};
LimitingValues limiting_values(int N);

}  // namespace spinor
