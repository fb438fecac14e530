#include "spinor/log_space.hpp"

#include <stdexcept>
#include <vector>

namespace spinor {

namespace {

constexpr int kLogFactorialCache = 10000;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialCache + 1);
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int i = 1; i <= kLogFactorialCache; ++i) {
      acc += std::log(static_cast<long double>(i));
      t[i] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (n <= kLogFactorialCache) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k out of range");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_multinomial(std::span<const int> counts) {
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("log_multinomial: negative count");
    total += c;
  }
  double r = log_factorial(total);
  for (int c : counts) r -= log_factorial(c);
  return r;
}

double log_sum_exp(const Eigen::ArrayXd& logs) {
  if (logs.size() == 0) return kNegInf;
  double m = logs.maxCoeff();
  if (m == kNegInf) return kNegInf;
  double s = (logs - m).exp().sum();
  return m + std::log(s);
}

std::pair<double, double> log_diff_exp(double a, double b) {
  if (a == b) return {0.0, kNegInf};
  double sign = 1.0;
  if (b > a) {
    std::swap(a, b);
    sign = -1.0;
  }
  if (b == kNegInf) return {sign, a};
  // e^a - e^b = e^a (1 - e^(b-a)) with b < a
  return {sign, a + std::log(-std::expm1(b - a))};
}

}  // namespace spinor
