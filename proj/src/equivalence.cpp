#include "spinor/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "spinor/errors.hpp"
#include "spinor/states.hpp"

namespace spinor {

SymmetrizedState fock_to_symmetrized(const OccupationVector& occ) {
  const int N = occ.total();
  const int L = occ.levels();
  if (N > kDistinguishableCap)
    throw CapacityError("fock_to_symmetrized: distinguishable space grows as L^N, N cap is " +
                        std::to_string(kDistinguishableCap));
  std::string pattern;
  pattern.reserve(static_cast<size_t>(N));
  for (int l = 0; l < L; ++l) pattern.append(static_cast<size_t>(occ.counts[l]), static_cast<char>(l));

  const double mult = multinomial_big(std::span<const int>(occ.counts.data(),
                                                           static_cast<size_t>(L)))
                          .convert_to<double>();
  const double amp = 1.0 / std::sqrt(mult);

  SymmetrizedState s;
  s.N = N;
  s.L = L;
  std::string perm = pattern;  // ascending => next_permutation walks all distinct orders
  do {
    s.amplitudes.emplace(perm, Complex(amp, 0.0));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s;
}

namespace {

Eigen::Index string_index(const std::string& str, int L) {
  Eigen::Index idx = 0;
  for (char ch : str) idx = idx * L + static_cast<Eigen::Index>(ch);
  return idx;
}

}  // namespace

double unipartite_equivalence_check(const Eigen::VectorXcd& psi, int N) {
  const int L = static_cast<int>(psi.size());
  if (N > kDistinguishableCap)
    throw CapacityError("unipartite_equivalence_check: N cap is " +
                        std::to_string(kDistinguishableCap));
  Eigen::Index dim = 1;
  for (int i = 0; i < N; ++i) dim *= L;

  // Tensor power, expanded over distinguishable strings.
  Eigen::VectorXcd product = Eigen::VectorXcd::Ones(1);
  for (int i = 0; i < N; ++i) {
    Eigen::VectorXcd next(product.size() * L);
    for (Eigen::Index a = 0; a < product.size(); ++a)
      for (int l = 0; l < L; ++l) next[a * L + l] = product[a] * psi[l];
    product = std::move(next);
  }

  // Image of the boson expansion under the symmetrization map.
  const FockSpace space(N, L);
  Eigen::VectorXcd image = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index i = 0; i < space.size(); ++i) {
    const auto& occ = space.state(i);
    LogAmplitude boson{0.5 * log_multinomial(std::span<const int>(occ.counts.data(),
                                                                  static_cast<size_t>(L))),
                       Complex(1.0, 0.0)};
    for (int l = 0; l < L && !boson.is_zero(); ++l) {
      const int k = occ.counts[l];
      if (k == 0) continue;
      const double m = std::abs(psi[l]);
      if (m == 0.0) {
        boson = LogAmplitude::zero();
        break;
      }
      boson.log_mag += k * std::log(m);
      boson.phase *= std::pow(psi[l] / m, k);
    }
    if (boson.is_zero()) continue;
    const Complex amp = boson.linear_shifted(0.0);
    const SymmetrizedState sym = fock_to_symmetrized(occ);
    for (const auto& [str, a] : sym.amplitudes) image[string_index(str, L)] += amp * a;
  }

  const double pn = product.squaredNorm();
  const double in = image.squaredNorm();
  if (pn == 0.0 || in == 0.0) throw std::invalid_argument("equivalence check: zero state");
  return std::norm(product.dot(image)) / (pn * in);
}

double bipartite_inequivalence_witness(Complex alpha, Complex beta, Complex gamma,
                                       Complex omega) {
  Eigen::VectorXcd v(4);
  v << alpha, beta, gamma, omega;
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument("bipartite_inequivalence_witness: zero coefficients");
  v /= n;

  // Two copies of the two-qubit state, regrouped so qubits (q1 q3) form
  // subsystem 1 and (q2 q4) form subsystem 2.
  Eigen::VectorXcd grouped = Eigen::VectorXcd::Zero(16);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int q3 = 0; q3 < 2; ++q3)
        for (int q4 = 0; q4 < 2; ++q4)
          grouped[((q1 * 2 + q3) * 2 + q2) * 2 + q4] = v[q1 * 2 + q2] * v[q3 * 2 + q4];

  // Two-boson counterpart with the same coefficients, embedded through the
  // per-subsystem correspondence |2,0> -> |00>, |1,1> -> (|01>+|10>)/sqrt2,
  // |0,2> -> |11>.
  const SpinorState spin = build_multipartite_spinor(v, 2, 2);
  const Eigen::VectorXcd amps = spin.linear_amplitudes();
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(4, 3);
  T(0, 0) = 1.0;
  T(1, 1) = T(2, 1) = 1.0 / std::sqrt(2.0);
  T(3, 2) = 1.0;
  Eigen::VectorXcd embedded = Eigen::VectorXcd::Zero(16);
  for (int i1 = 0; i1 < 3; ++i1)
    for (int i2 = 0; i2 < 3; ++i2)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          embedded[a * 4 + b] += T(a, i1) * T(b, i2) * amps[i1 * 3 + i2];

  const double F = std::norm(grouped.dot(embedded)) /
                   (grouped.squaredNorm() * embedded.squaredNorm());
  return std::abs(1.0 - F);
}

}  // namespace spinor
