#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "spinor/log_space.hpp"

namespace spinor {

using BigInt = boost::multiprecision::cpp_int;

/// Per-level boson counts (k_0, ..., k_{L-1}) of one subsystem, summing to N.
struct OccupationVector {
  Eigen::VectorXi counts;

  OccupationVector() = default;
  explicit OccupationVector(Eigen::VectorXi c) : counts(std::move(c)) {}

  int levels() const { return static_cast<int>(counts.size()); }
  int total() const { return counts.sum(); }

  friend bool operator==(const OccupationVector& a, const OccupationVector& b) {
    return a.counts.size() == b.counts.size() && (a.counts.array() == b.counts.array()).all();
  }
};

/// Number of Fock states with N bosons in L levels: binomial(N+L-1, L-1),
/// exact arbitrary-size arithmetic.
BigInt dimension_big(int N, int L);

/// Same, narrowed to uint64. Throws std::overflow_error when it does not fit.
std::uint64_t dimension(int N, int L);

/// Exact multinomial C(sum counts; counts...) in arbitrary-size arithmetic.
BigInt multinomial_big(std::span<const int> counts);

/// Natural log of a positive big integer, accurate to double precision.
double log_big(const BigInt& x);

/// a†_level |...k...> = sqrt(k_level + 1) |...k_level+1...>
std::pair<OccupationVector, double> apply_creation(const OccupationVector& state, int level);

/// a_level |...k...> = sqrt(k_level) |...k_level-1...>; empty when k_level = 0
/// (the annihilated-vacuum component, not an error).
std::optional<std::pair<OccupationVector, double>> apply_annihilation(const OccupationVector& state,
                                                                      int level);

/// All occupation vectors of (N, L) in a fixed deterministic order
/// (lexicographically descending, level-0 count first), with O(1) ranking in
/// both directions. Built once and shared read-only between workers.
class FockSpace {
 public:
  FockSpace(int N, int L);

  int particles() const { return N_; }
  int levels() const { return L_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }

  const OccupationVector& state(Eigen::Index i) const { return states_[static_cast<size_t>(i)]; }
  const std::vector<OccupationVector>& states() const { return states_; }

  /// Dense index of an occupation vector (combinatorial ranking).
  Eigen::Index index_of(const OccupationVector& occ) const;

  /// Dense index of occ with level incremented, valid within FockSpace(N+1, L).
  /// Provided as a raw ranking so builders can hop between particle sectors.
  static Eigen::Index rank(const Eigen::VectorXi& counts);

 private:
  int N_;
  int L_;
  std::vector<OccupationVector> states_;
};

}  // namespace spinor
