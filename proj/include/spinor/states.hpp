#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "spinor/errors.hpp"
#include "spinor/fock.hpp"
#include "spinor/log_space.hpp"

namespace spinor {

/// Default cap on the number of amplitudes D(N,L)^M a state may occupy.
inline constexpr std::uint64_t kDefaultAmplitudeCap = 5'000'000;

/// Local single-subsystem linear unitary exp(-i sum_{ll'} H_{ll'} a†_l a_{l'}).
/// Carries the L x L single-particle matrix v together with a Hermitian
/// generator so the many-body representation can be exponentiated exactly.
class LocalUnitary {
 public:
  static LocalUnitary identity(int subsystem, int L);
  static LocalUnitary from_generator(int subsystem, Eigen::MatrixXcd H, double t = 1.0);
  /// Recovers a Hermitian generator from a unitary matrix (Schur form).
  static LocalUnitary from_matrix(int subsystem, const Eigen::MatrixXcd& v);
  /// exp(-i n.S theta/2) on a two-level subsystem.
  static LocalUnitary spin_rotation(int subsystem, const Eigen::Vector3d& axis, double angle);

  int subsystem() const { return subsystem_; }  // 1-based
  int levels() const { return static_cast<int>(generator_.rows()); }
  const Eigen::MatrixXcd& generator() const { return generator_; }
  double time() const { return time_; }
  Eigen::MatrixXcd matrix() const;  // v = exp(-i H t)
  bool is_identity() const;

 private:
  LocalUnitary(int subsystem, Eigen::MatrixXcd H, double t);
  int subsystem_;
  Eigen::MatrixXcd generator_;
  double time_;
};

/// An N-boson-per-subsystem state over the product of M Fock spaces,
/// stored as log-domain amplitudes on the dense flattened basis
/// (subsystem-1-major; each subsystem in FockSpace enumeration order).
class SpinorState {
 public:
  SpinorState(int N, int M, std::shared_ptr<const FockSpace> space, Eigen::ArrayXd log_mag,
              Eigen::ArrayXcd phase, double log_norm);

  int duplication() const { return N_; }
  int subsystems() const { return M_; }
  int levels() const { return space_->levels(); }
  const FockSpace& space() const { return *space_; }
  std::shared_ptr<const FockSpace> space_ptr() const { return space_; }

  Eigen::Index subsystem_dim() const { return space_->size(); }
  Eigen::Index size() const { return log_mag_.size(); }

  const Eigen::ArrayXd& log_magnitudes() const { return log_mag_; }
  const Eigen::ArrayXcd& phases() const { return phase_; }
  LogAmplitude amplitude(Eigen::Index flat) const { return {log_mag_[flat], phase_[flat]}; }

  /// ln N_Psi of the generating polynomial expansion this state came from.
  double log_norm() const { return log_norm_; }

  /// Linear-scale amplitudes (states are kept normalized, so this is safe).
  Eigen::VectorXcd linear_amplitudes() const;

  Eigen::Index flat_index(std::span<const Eigen::Index> per_subsystem) const;
  void unflatten(Eigen::Index flat, std::span<Eigen::Index> out) const;

 private:
  int N_;
  int M_;
  std::shared_ptr<const FockSpace> space_;
  Eigen::ArrayXd log_mag_;
  Eigen::ArrayXcd phase_;
  double log_norm_;
};

/// Analytic representation of an N-fold tensor-product state: the microscopic
/// L^M wavefunction plus the duplication factor. Never expanded.
struct ScsState {
  Eigen::VectorXcd psi;
  int M = 1;
  int L = 2;
  int N = 1;
};

/// (sum_l psi_l a†_l)^N |vac> / sqrt(N!), expanded over occupations:
/// amplitude(k) = sqrt(multinomial(N;k)) prod_l psi_l^{k_l}.
SpinorState build_unipartite_spinor(const Eigen::VectorXcd& psi, int N);

/// (sum_{l1..lM} Psi a†_{1,l1}...a†_{M,lM})^N |vac> / sqrt(N_Psi), by N-fold
/// polynomial self-multiplication. psi_tensor is indexed subsystem-1-major
/// (size L^M). Throws CapacityError when D(N,L)^M exceeds amplitude_cap.
SpinorState build_multipartite_spinor(const Eigen::VectorXcd& psi_tensor, int M, int N,
                                      std::uint64_t amplitude_cap = kDefaultAmplitudeCap);

/// ln N_Psi of the unnormalized expansion of psi_tensor at duplication N.
double normalization_factor(const Eigen::VectorXcd& psi_tensor, int M, int N,
                            std::uint64_t amplitude_cap = kDefaultAmplitudeCap);

/// V1 V2 (cos(chi) a†_1 a†_2 + sin(chi) b†_1 b†_2)^N |vac>, normalized.
SpinorState build_schmidt_bipartite(double chi, int N, const LocalUnitary& V1,
                                    const LocalUnitary& V2,
                                    std::uint64_t amplitude_cap = kDefaultAmplitudeCap);
SpinorState build_schmidt_bipartite(double chi, int N,
                                    std::uint64_t amplitude_cap = kDefaultAmplitudeCap);

/// The chi = pi/4 point: 1/sqrt(N+1) sum_k |k>|k>.
SpinorState build_epr(int N, std::uint64_t amplitude_cap = kDefaultAmplitudeCap);

/// Applies the many-body unitary exp(-i t sum H_{ll'} a†_{m,l} a_{m,l'}) by
/// building its D x D representation on subsystem m and exponentiating.
SpinorState apply_local_unitary(const SpinorState& state, const LocalUnitary& V);

ScsState scs_from_micro(const Eigen::VectorXcd& psi_tensor, int M, int N);

/// Wraps raw linear amplitudes (normalizing and fixing the global phase).
SpinorState state_from_amplitudes(int N, int M, std::shared_ptr<const FockSpace> space,
                                  Eigen::VectorXcd amps, double log_norm = 0.0);

/// |<a|b>|^2 for states over the same basis layout.
double fidelity(const SpinorState& a, const SpinorState& b);

/// {N, M, L, entries:[{occ: [[k...]...], re, im}]} with linear amplitudes.
nlohmann::json state_to_json(const SpinorState& state);

}  // namespace spinor
