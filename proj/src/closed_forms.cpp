#include "spinor/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinor/log_space.hpp"

namespace spinor {

namespace {

constexpr double kSumWindow = 1e-3;  // |cos 2chi| below which the summation form rules

struct LogTrig {
  double lc;  // ln cos(chi), -inf at chi = pi/2
  double ls;  // ln sin(chi), -inf at chi = 0
};

LogTrig log_trig(double chi) {
  const double c = std::cos(chi), s = std::sin(chi);
  return {c > 0.0 ? std::log(c) : kNegInf, s > 0.0 ? std::log(s) : kNegInf};
}

// w_k = ln |Psi_k|^2 = 2k ln cos + 2(N-k) ln sin, with 0 * (-inf) = 0.
Eigen::ArrayXd log_weights(BipartiteParams p) {
  const LogTrig t = log_trig(p.chi);
  Eigen::ArrayXd w(p.N + 1);
  for (int k = 0; k <= p.N; ++k) {
    double v = 0.0;
    if (k > 0) v += 2.0 * k * t.lc;
    if (k < p.N) v += 2.0 * (p.N - k) * t.ls;
    w[k] = v;
  }
  return w;
}

// sign * e^log of c^{2N+2} - s^{2N+2}-style differences.
std::pair<double, double> pow_diff(double lc, double ls, int exponent) {
  return log_diff_exp(exponent * lc, exponent * ls);
}

// Shared numerator of <Sz> and <(Sx)^2>:
//   N(c^{2N+4} - s^{2N+4}) + (N+2) s^2 c^2 (s^{2N} - c^{2N})
std::pair<double, double> sz_numerator(BipartiteParams p, const LogTrig& t) {
  auto [sa, la] = pow_diff(t.lc, t.ls, 2 * p.N + 4);
  la += std::log(static_cast<double>(p.N));
  auto [sb, lb] = pow_diff(t.ls, t.lc, 2 * p.N);
  lb += std::log(static_cast<double>(p.N) + 2.0) + 2.0 * t.ls + 2.0 * t.lc;
  const double m = std::max(la, lb);
  if (m == kNegInf) return {0.0, kNegInf};
  const double lin = sa * std::exp(la - m) + sb * std::exp(lb - m);
  if (lin == 0.0) return {0.0, kNegInf};
  return {lin < 0.0 ? -1.0 : 1.0, m + std::log(std::abs(lin))};
}

}  // namespace

BipartiteParams::BipartiteParams(double chi_in, int N_in) : chi(chi_in), N(N_in) {
  if (N < 1) throw std::invalid_argument("BipartiteParams: N >= 1 required");
  if (chi < -1e-12 || chi > std::numbers::pi / 2.0 + 1e-12)
    throw std::invalid_argument("BipartiteParams: chi must lie in [0, pi/2]");
}

// ---------------------------------------------------------------------------
// Summation path

double log_norm_factor_sum(BipartiteParams p) {
  return 2.0 * log_factorial(p.N) + log_sum_exp(log_weights(p));
}

double exact_sz_sum(BipartiteParams p) {
  Eigen::ArrayXd w = log_weights(p);
  const double lse = log_sum_exp(w);
  double acc = 0.0;
  for (int k = 0; k <= p.N; ++k) acc += std::exp(w[k] - lse) * (2.0 * k - p.N);
  return acc;
}

double exact_szsz_sum(BipartiteParams p) {
  Eigen::ArrayXd w = log_weights(p);
  const double lse = log_sum_exp(w);
  double acc = 0.0;
  for (int k = 0; k <= p.N; ++k) {
    const double z = 2.0 * k - p.N;
    acc += std::exp(w[k] - lse) * z * z;
  }
  return acc;
}

double exact_sxsx_sum(BipartiteParams p) {
  // <Sx_1 Sx_2> = 2 <S+_1 S+_2> = 2 (N!)^2/N_Psi sum_k k(N-k+1) Psi_k Psi_{k-1}
  Eigen::ArrayXd w = log_weights(p);
  const double lse = log_sum_exp(w);
  double acc = 0.0;
  for (int k = 1; k <= p.N; ++k) {
    const double lw = 0.5 * (w[k] + w[k - 1]) - lse;
    if (lw == kNegInf) continue;
    acc += std::exp(lw) * k * (p.N - k + 1.0);
  }
  return 2.0 * acc;
}

double exact_sx2_sum(BipartiteParams p) {
  Eigen::ArrayXd w = log_weights(p);
  const double lse = log_sum_exp(w);
  double acc = 0.0;
  for (int k = 0; k <= p.N; ++k)
    acc += std::exp(w[k] - lse) * (k * (p.N - k + 1.0) + (k + 1.0) * (p.N - k));
  return acc;
}

// ---------------------------------------------------------------------------
// Rational-trig path

double log_norm_factor_rational(BipartiteParams p) {
  const LogTrig t = log_trig(p.chi);
  const double c2 = std::cos(2.0 * p.chi);
  // (N!)^2 (c^{2N+2} - s^{2N+2}) / cos 2chi; numerator and cos 2chi share signs.
  auto [sd, ld] = pow_diff(t.lc, t.ls, 2 * p.N + 2);
  (void)sd;
  return 2.0 * log_factorial(p.N) + ld - std::log(std::abs(c2));
}

double exact_sz_rational(BipartiteParams p) {
  const LogTrig t = log_trig(p.chi);
  const double c2 = std::cos(2.0 * p.chi);
  auto [sn, ln_] = sz_numerator(p, t);
  auto [sd, ld] = pow_diff(t.lc, t.ls, 2 * p.N + 2);
  if (sn == 0.0) return 0.0;
  return sn * sd * std::exp(ln_ - ld) / c2;
}

double exact_szsz_rational(BipartiteParams p) {
  const double c2 = std::cos(2.0 * p.chi);
  const LogTrig t = log_trig(p.chi);
  // First term simplifies exactly: (4+2N+N^2+N(N+2)cos 4chi)/(2 cos^2 2chi)
  //                              = 2/cos^2 2chi + N(N+2).
  const double t1 = 2.0 / (c2 * c2) + static_cast<double>(p.N) * (p.N + 2.0);
  auto [sd, ld] = pow_diff(t.lc, t.ls, 2 * p.N + 2);
  const double lsum = log_sum_exp((Eigen::ArrayXd(2) << (2 * p.N + 2) * t.lc,
                                   (2 * p.N + 2) * t.ls).finished());
  const double t2 = 2.0 * (p.N + 1.0) * sd * std::exp(lsum - ld) / c2;
  return t1 - t2;
}

double exact_sxsx_rational(BipartiteParams p) {
  // [N sin 4chi (c^{2N+2}+s^{2N+2}) - sin^3 2chi (c^{2N}-s^{2N})]
  //   / [2 cos^2 2chi (c^{2N+2}-s^{2N+2})]
  const LogTrig t = log_trig(p.chi);
  const double s2 = std::sin(2.0 * p.chi);
  const double c2 = std::cos(2.0 * p.chi);
  const double s4 = std::sin(4.0 * p.chi);

  double la = kNegInf, sa = 0.0;
  if (s4 != 0.0) {
    la = std::log(static_cast<double>(p.N)) + std::log(std::abs(s4)) +
         log_sum_exp((Eigen::ArrayXd(2) << (2 * p.N + 2) * t.lc, (2 * p.N + 2) * t.ls).finished());
    sa = s4 > 0.0 ? 1.0 : -1.0;
  }
  auto [sg, lg] = pow_diff(t.lc, t.ls, 2 * p.N);
  double lb = kNegInf, sb = 0.0;
  if (sg != 0.0 && s2 > 0.0) {
    lb = 3.0 * std::log(s2) + lg;
    sb = -sg;
  }
  const double m = std::max(la, lb);
  if (m == kNegInf) return 0.0;
  const double num = sa * std::exp(la - m) + sb * std::exp(lb - m);
  auto [sd, ld] = pow_diff(t.lc, t.ls, 2 * p.N + 2);
  return num * sd * std::exp(m - ld) / (2.0 * c2 * c2);
}

double exact_sx2_rational(BipartiteParams p) {
  const LogTrig t = log_trig(p.chi);
  const double c2 = std::cos(2.0 * p.chi);
  auto [sn, ln_] = sz_numerator(p, t);
  auto [sd, ld] = pow_diff(t.lc, t.ls, 2 * p.N + 2);
  if (sn == 0.0) return 0.0;
  return sn * sd * std::exp(ln_ - ld) / (c2 * c2);
}

// ---------------------------------------------------------------------------
// Dispatchers and derived quantities

namespace {

bool use_sum(BipartiteParams p) { return std::abs(std::cos(2.0 * p.chi)) < kSumWindow; }

}  // namespace

double log_norm_factor(BipartiteParams p) {
  return use_sum(p) ? log_norm_factor_sum(p) : log_norm_factor_rational(p);
}
double exact_sz(BipartiteParams p) { return use_sum(p) ? exact_sz_sum(p) : exact_sz_rational(p); }
double exact_szsz(BipartiteParams p) {
  return use_sum(p) ? exact_szsz_sum(p) : exact_szsz_rational(p);
}
double exact_sxsx(BipartiteParams p) {
  return use_sum(p) ? exact_sxsx_sum(p) : exact_sxsx_rational(p);
}
double exact_sx2(BipartiteParams p) { return use_sum(p) ? exact_sx2_sum(p) : exact_sx2_rational(p); }

double var_sz(BipartiteParams p) {
  const double sz = exact_sz(p);
  return exact_szsz(p) - sz * sz;
}

double cov_szsz(BipartiteParams p) { return var_sz(p); }  // <Sz1 Sz2> = <Sz^2> on this state

Matrix6d exact_covariance_matrix(BipartiteParams p) {
  Matrix6d V = Matrix6d::Zero();
  const double x2 = exact_sx2(p);
  const double xx = exact_sxsx(p);
  const double vz = var_sz(p);
  V(0, 0) = V(1, 1) = V(3, 3) = V(4, 4) = x2;
  V(2, 2) = V(5, 5) = vz;
  V(0, 3) = V(3, 0) = xx;
  V(1, 4) = V(4, 1) = -xx;
  V(2, 5) = V(5, 2) = vz;
  return V;
}

Eigen::Vector3d correlation_ratios(BipartiteParams p) {
  const double x2 = exact_sx2(p);
  const double xx = exact_sxsx(p);
  const double vz = var_sz(p);
  const double cz = cov_szsz(p);
  const double rx = xx / x2;
  const double rz = vz != 0.0 ? cz / vz : 1.0;  // identical sums; 0/0 limit is 1
  return {rx, -rx, rz};
}

Matrix6d approx_covariance_matrix(BipartiteParams p, double margin) {
  const double quarter = std::numbers::pi / 4.0;
  if (std::abs(p.chi - quarter) <= margin)
    throw DomainOfValidityError("approx_covariance_matrix: chi within margin of pi/4");
  if (p.N < 20)
    throw DomainOfValidityError("approx_covariance_matrix: large-N form needs N >= 20");
  const double c2 = std::abs(std::cos(2.0 * p.chi));
  const double s2 = std::sin(2.0 * p.chi);
  const double t2 = std::tan(2.0 * p.chi);
  const double d = p.N / c2;
  const double o = p.N * s2 / c2;
  const double z = t2 * t2;
  Matrix6d V = Matrix6d::Zero();
  V(0, 0) = V(1, 1) = V(3, 3) = V(4, 4) = d;
  V(2, 2) = V(5, 5) = z;
  V(0, 3) = V(3, 0) = o;
  V(1, 4) = V(4, 1) = -o;
  V(2, 5) = V(5, 2) = z;
  return V;
}

Matrix6d scs_covariance_matrix(BipartiteParams p) {
  const double s2 = std::sin(2.0 * p.chi);
  Matrix6d V = Matrix6d::Zero();
  V(0, 0) = V(1, 1) = V(3, 3) = V(4, 4) = 1.0;
  V(2, 2) = V(5, 5) = s2 * s2;
  V(0, 3) = V(3, 0) = s2;
  V(1, 4) = V(4, 1) = -s2;
  V(2, 5) = V(5, 2) = s2 * s2;
  return p.N * V;
}

LimitingValues limiting_values(int N) {
  return {static_cast<double>(N) * (N + 2.0) / 3.0, Eigen::Vector3d(1.0, -1.0, 1.0)};
}

}  // namespace spinor
