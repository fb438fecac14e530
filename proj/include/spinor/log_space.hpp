#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>

#include <Eigen/Dense>

namespace spinor {

using Complex = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// ln(n!) from a cached table (exact log accumulation in extended precision).
/// Relative error <= 1e-12 for n <= 10^4; lgamma beyond the table.
double log_factorial(int n);

/// ln C(n, k); 0 <= k <= n.
double log_binomial(int n, int k);

/// ln of the multinomial coefficient C(sum; counts...).
double log_multinomial(std::span<const int> counts);

/// Stable ln(sum_i exp(logs[i])). Returns -inf for an empty or all -inf input.
double log_sum_exp(const Eigen::ArrayXd& logs);

/// Signed log-domain difference e^a - e^b, returned as (sign, ln|e^a - e^b|).
/// Uses expm1 so nearly-cancelling inputs keep full relative precision.
std::pair<double, double> log_diff_exp(double a, double b);

/// A complex amplitude split into log-magnitude and unit phase.
/// Amplitudes of the polynomial state expansions involve (N!)^2-scale factors,
/// so all per-entry arithmetic stays in this form; conversion back to linear
/// scale happens only after a global max-shift.
struct LogAmplitude {
  double log_mag = kNegInf;
  Complex phase = Complex(1.0, 0.0);

  static LogAmplitude zero() { return {}; }

  static LogAmplitude from_linear(Complex z) {
    double m = std::abs(z);
    if (m == 0.0) return zero();
    return {std::log(m), z / m};
  }

  bool is_zero() const { return log_mag == kNegInf; }

  /// Linear value relative to an external log shift: e^(log_mag - shift) * phase.
  Complex linear_shifted(double shift) const {
    if (is_zero()) return Complex(0.0, 0.0);
    return std::exp(log_mag - shift) * phase;
  }

  friend LogAmplitude operator*(const LogAmplitude& a, const LogAmplitude& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.log_mag + b.log_mag, a.phase * b.phase};
  }
};

}  // namespace spinor
