#include "spinor/fock.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spinor {

namespace {

// C(n, q) for small q, exact in uint64 (throws on overflow).
std::uint64_t binom_u64(std::int64_t n, int q) {
  if (q < 0 || n < q) return 0;
  BigInt r = 1;
  for (int i = 1; i <= q; ++i) {
    r *= (n - q + i);
    r /= i;
  }
  if (r > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("binomial exceeds uint64");
  return static_cast<std::uint64_t>(r);
}

void enumerate_rec(int remaining, int level, int L, Eigen::VectorXi& work,
                   std::vector<OccupationVector>& out) {
  if (level == L - 1) {
    work[level] = remaining;
    out.emplace_back(work);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    work[level] = k;
    enumerate_rec(remaining - k, level + 1, L, work, out);
  }
}

}  // namespace

BigInt dimension_big(int N, int L) {
  if (N < 0 || L < 1) throw std::invalid_argument("dimension: require N >= 0, L >= 1");
  BigInt r = 1;
  for (int i = 1; i <= L - 1; ++i) {
    r *= (N + i);
    r /= i;
  }
  return r;
}

std::uint64_t dimension(int N, int L) {
  BigInt d = dimension_big(N, L);
  if (d > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("dimension exceeds uint64; use dimension_big");
  return static_cast<std::uint64_t>(d);
}

BigInt multinomial_big(std::span<const int> counts) {
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("multinomial: negative count");
    total += c;
  }
  BigInt r = 1;
  int used = 0;
  for (int c : counts) {
    // r *= C(used + c, c)
    for (int i = 1; i <= c; ++i) {
      r *= (used + i);
      r /= i;
    }
    used += c;
  }
  return r;
}

double log_big(const BigInt& x) {
  if (x <= 0) throw std::invalid_argument("log_big: positive argument required");
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits <= 52) return std::log(x.convert_to<double>());
  const BigInt top = x >> (bits - 52);
  return std::log(top.convert_to<double>()) + (bits - 52) * std::numbers::ln2;
}

std::pair<OccupationVector, double> apply_creation(const OccupationVector& state, int level) {
  if (level < 0 || level >= state.levels())
    throw std::invalid_argument("apply_creation: level out of range");
  OccupationVector out = state;
  double f = std::sqrt(static_cast<double>(out.counts[level] + 1));
  out.counts[level] += 1;
  return {std::move(out), f};
}

std::optional<std::pair<OccupationVector, double>> apply_annihilation(const OccupationVector& state,
                                                                      int level) {
  if (level < 0 || level >= state.levels())
    throw std::invalid_argument("apply_annihilation: level out of range");
  if (state.counts[level] == 0) return std::nullopt;
  OccupationVector out = state;
  double f = std::sqrt(static_cast<double>(out.counts[level]));
  out.counts[level] -= 1;
  return {{std::move(out), f}};
}

FockSpace::FockSpace(int N, int L) : N_(N), L_(L) {
  if (N < 0 || L < 1) throw std::invalid_argument("FockSpace: require N >= 0, L >= 1");
  states_.reserve(static_cast<size_t>(dimension(N, L)));
  Eigen::VectorXi work(L);
  enumerate_rec(N, 0, L, work, states_);
}

Eigen::Index FockSpace::rank(const Eigen::VectorXi& counts) {
  const int L = static_cast<int>(counts.size());
  std::uint64_t idx = 0;
  int remaining = counts.sum();
  for (int j = 0; j < L - 1; ++j) {
    const int m = remaining - counts[j] - 1;
    if (m >= 0) idx += binom_u64(static_cast<std::int64_t>(m) + (L - j - 1), L - j - 1);
    remaining -= counts[j];
  }
  return static_cast<Eigen::Index>(idx);
}

Eigen::Index FockSpace::index_of(const OccupationVector& occ) const {
  if (occ.levels() != L_ || occ.total() != N_)
    throw std::invalid_argument("index_of: occupation does not belong to this space");
  return rank(occ.counts);
}

}  // namespace spinor
