#include "spinor/states.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spinor {

namespace {

constexpr double kUnitaryTol = 1e-12;
constexpr double kNormTol = 1e-9;

void check_normalized(const Eigen::VectorXcd& psi, const char* who) {
  if (std::abs(psi.squaredNorm() - 1.0) > kNormTol)
    throw std::invalid_argument(std::string(who) + ": input wavefunction is not normalized");
}

int infer_levels(Eigen::Index tensor_size, int M) {
  if (M < 1) throw std::invalid_argument("subsystem count must be >= 1");
  int L = static_cast<int>(std::llround(std::pow(static_cast<double>(tensor_size), 1.0 / M)));
  for (int cand = std::max(1, L - 1); cand <= L + 1; ++cand) {
    Eigen::Index p = 1;
    for (int m = 0; m < M; ++m) p *= cand;
    if (p == tensor_size) return cand;
  }
  throw std::invalid_argument("psi tensor size is not a perfect M-th power");
}

// Rotate all phases so the first nonzero amplitude is real-positive.
void apply_phase_convention(Eigen::VectorXcd& amps) {
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (amps[i] != Complex(0.0, 0.0)) {
      Complex p = amps[i] / std::abs(amps[i]);
      amps *= std::conj(p);
      amps[i] = Complex(amps[i].real(), 0.0);
      return;
    }
  }
}

SpinorState state_from_linear(int N, int M, std::shared_ptr<const FockSpace> space,
                              Eigen::VectorXcd amps, double log_norm) {
  // Normalize in linear scale (amps are max-shifted, so this is safe), then
  // split into log magnitudes and unit phases.
  double nrm2 = amps.squaredNorm();
  if (nrm2 <= 0.0) throw std::invalid_argument("state has zero norm");
  amps /= std::sqrt(nrm2);
  apply_phase_convention(amps);
  Eigen::ArrayXd log_mag(amps.size());
  Eigen::ArrayXcd phase(amps.size());
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    double m = std::abs(amps[i]);
    if (m == 0.0) {
      log_mag[i] = kNegInf;
      phase[i] = Complex(1.0, 0.0);
    } else {
      log_mag[i] = std::log(m);
      phase[i] = amps[i] / m;
    }
  }
  return SpinorState(N, M, std::move(space), std::move(log_mag), std::move(phase), log_norm);
}

struct ExpansionResult {
  Eigen::VectorXcd amps;  // max-shifted linear amplitudes
  double log_shift;       // true amplitude = amps * e^log_shift
  std::shared_ptr<const FockSpace> space;
};

// Core of the multipartite builder: N multiplications by the degree-1
// generating polynomial, amplitudes keyed on flattened occupation tuples.
// Linear values are rescaled to unit max after every step; the running
// log shift keeps the (N!)-scale growth exactly representable.
ExpansionResult expand_polynomial(const Eigen::VectorXcd& psi, int M, int N, int L,
                                  std::uint64_t amplitude_cap) {
  BigInt full = 1;
  for (int m = 0; m < M; ++m) full *= dimension_big(N, L);
  if (full > amplitude_cap)
    throw CapacityError("state needs D(N,L)^M = " + full.str() + " amplitudes, cap is " +
                        std::to_string(amplitude_cap));

  // Nonzero monomials of the generating polynomial.
  struct Term {
    std::vector<int> level;
    Complex coeff;
  };
  std::vector<Term> terms;
  for (Eigen::Index t = 0; t < psi.size(); ++t) {
    if (psi[t] == Complex(0.0, 0.0)) continue;
    Term term;
    term.coeff = psi[t];
    term.level.resize(M);
    Eigen::Index rest = t;
    for (int m = M - 1; m >= 0; --m) {
      term.level[m] = static_cast<int>(rest % L);
      rest /= L;
    }
    terms.push_back(std::move(term));
  }
  if (terms.empty()) throw std::invalid_argument("psi tensor is identically zero");

  auto prev_space = std::make_shared<const FockSpace>(0, L);
  Eigen::VectorXcd cur(1);
  cur[0] = Complex(1.0, 0.0);
  double shift = 0.0;

  for (int n = 1; n <= N; ++n) {
    auto next_space = std::make_shared<const FockSpace>(n, L);
    const Eigen::Index dp = prev_space->size();
    const Eigen::Index dn = next_space->size();

    // Creation map for this sector: index in FockSpace(n) and sqrt(k+1).
    Eigen::MatrixX<Eigen::Index> cre_idx(dp, L);
    Eigen::MatrixXd cre_fac(dp, L);
    for (Eigen::Index i = 0; i < dp; ++i) {
      const auto& occ = prev_space->state(i);
      for (int l = 0; l < L; ++l) {
        Eigen::VectorXi c = occ.counts;
        c[l] += 1;
        cre_idx(i, l) = FockSpace::rank(c);
        cre_fac(i, l) = std::sqrt(static_cast<double>(occ.counts[l] + 1));
      }
    }

    Eigen::Index tot_prev = 1, tot_next = 1;
    for (int m = 0; m < M; ++m) {
      tot_prev *= dp;
      tot_next *= dn;
    }
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(tot_next);
    std::vector<Eigen::Index> idx(M);
    for (Eigen::Index flat = 0; flat < tot_prev; ++flat) {
      const Complex a = cur[flat];
      if (a == Complex(0.0, 0.0)) continue;
      Eigen::Index rest = flat;
      for (int m = M - 1; m >= 0; --m) {
        idx[m] = rest % dp;
        rest /= dp;
      }
      for (const Term& term : terms) {
        Complex fac = term.coeff;
        Eigen::Index tgt = 0;
        for (int m = 0; m < M; ++m) {
          const Eigen::Index im = idx[m];
          const int l = term.level[m];
          fac *= cre_fac(im, l);
          tgt = tgt * dn + cre_idx(im, l);
        }
        next[tgt] += a * fac;
      }
    }
    double mx = next.cwiseAbs().maxCoeff();
    if (mx <= 0.0) throw std::invalid_argument("expansion vanished");
    next /= mx;
    shift += std::log(mx);
    cur = std::move(next);
    prev_space = std::move(next_space);
  }
  return {std::move(cur), shift, std::move(prev_space)};
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalUnitary

LocalUnitary::LocalUnitary(int subsystem, Eigen::MatrixXcd H, double t)
    : subsystem_(subsystem), generator_(std::move(H)), time_(t) {
  if (subsystem_ < 1) throw std::invalid_argument("LocalUnitary: subsystem is 1-based");
  if (generator_.rows() != generator_.cols())
    throw std::invalid_argument("LocalUnitary: generator must be square");
  if ((generator_ - generator_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("LocalUnitary: generator must be Hermitian");
}

LocalUnitary LocalUnitary::identity(int subsystem, int L) {
  return LocalUnitary(subsystem, Eigen::MatrixXcd::Zero(L, L), 0.0);
}

LocalUnitary LocalUnitary::from_generator(int subsystem, Eigen::MatrixXcd H, double t) {
  return LocalUnitary(subsystem, std::move(H), t);
}

LocalUnitary LocalUnitary::from_matrix(int subsystem, const Eigen::MatrixXcd& v) {
  const Eigen::Index L = v.rows();
  if (v.cols() != L) throw std::invalid_argument("LocalUnitary: matrix must be square");
  if ((v * v.adjoint() - Eigen::MatrixXcd::Identity(L, L)).cwiseAbs().maxCoeff() > kUnitaryTol)
    throw std::invalid_argument("LocalUnitary: matrix is not unitary");
  // A unitary is normal, so its Schur form is diagonal: v = Q diag(e^{-i h}) Q†
  // with real h, giving the Hermitian generator H = Q diag(h) Q†.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(v);
  Eigen::VectorXd h(L);
  for (Eigen::Index i = 0; i < L; ++i) h[i] = -std::arg(schur.matrixT()(i, i));
  Eigen::MatrixXcd H =
      schur.matrixU() * h.cast<Complex>().asDiagonal() * schur.matrixU().adjoint();
  H = (H + H.adjoint().eval()) / 2.0;
  return LocalUnitary(subsystem, std::move(H), 1.0);
}

LocalUnitary LocalUnitary::spin_rotation(int subsystem, const Eigen::Vector3d& axis,
                                         double angle) {
  Eigen::Vector3d n = axis.normalized();
  Eigen::MatrixXcd H(2, 2);
  const Complex i01(0.0, 1.0);
  H << Complex(n.z(), 0.0), Complex(n.x(), 0.0) - i01 * n.y(),
      Complex(n.x(), 0.0) + i01 * n.y(), Complex(-n.z(), 0.0);
  return LocalUnitary(subsystem, H, angle / 2.0);
}

Eigen::MatrixXcd LocalUnitary::matrix() const {
  const Eigen::Index L = generator_.rows();
  if (is_identity()) return Eigen::MatrixXcd::Identity(L, L);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(generator_);
  Eigen::VectorXcd ph(L);
  for (Eigen::Index i = 0; i < L; ++i)
    ph[i] = std::polar(1.0, -es.eigenvalues()[i] * time_);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

bool LocalUnitary::is_identity() const {
  return time_ == 0.0 || generator_.cwiseAbs().maxCoeff() == 0.0;
}

// ---------------------------------------------------------------------------
// SpinorState

SpinorState::SpinorState(int N, int M, std::shared_ptr<const FockSpace> space,
                         Eigen::ArrayXd log_mag, Eigen::ArrayXcd phase, double log_norm)
    : N_(N),
      M_(M),
      space_(std::move(space)),
      log_mag_(std::move(log_mag)),
      phase_(std::move(phase)),
      log_norm_(log_norm) {
  Eigen::Index expect = 1;
  for (int m = 0; m < M_; ++m) expect *= space_->size();
  if (log_mag_.size() != expect || phase_.size() != expect)
    throw std::invalid_argument("SpinorState: amplitude size mismatch");
}

Eigen::VectorXcd SpinorState::linear_amplitudes() const {
  double shift = log_mag_.maxCoeff();
  if (shift < 0.0) shift = 0.0;  // normalized states need no shift
  Eigen::VectorXcd out(log_mag_.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = LogAmplitude{log_mag_[i], phase_[i]}.linear_shifted(shift);
  return out;
}

Eigen::Index SpinorState::flat_index(std::span<const Eigen::Index> per_subsystem) const {
  Eigen::Index flat = 0;
  const Eigen::Index d = space_->size();
  for (Eigen::Index i : per_subsystem) flat = flat * d + i;
  return flat;
}

void SpinorState::unflatten(Eigen::Index flat, std::span<Eigen::Index> out) const {
  const Eigen::Index d = space_->size();
  for (int m = M_ - 1; m >= 0; --m) {
    out[m] = flat % d;
    flat /= d;
  }
}

// ---------------------------------------------------------------------------
// Builders

SpinorState build_unipartite_spinor(const Eigen::VectorXcd& psi, int N) {
  if (N < 1) throw std::invalid_argument("build_unipartite_spinor: N >= 1 required");
  check_normalized(psi, "build_unipartite_spinor");
  const int L = static_cast<int>(psi.size());
  auto space = std::make_shared<const FockSpace>(N, L);

  // amplitude(k) = sqrt(multinomial(N;k)) prod_l psi_l^{k_l}, assembled in
  // log magnitude + phase to keep large-N multinomials exact.
  Eigen::ArrayXd log_mag(space->size());
  Eigen::ArrayXcd phase(space->size());
  for (Eigen::Index i = 0; i < space->size(); ++i) {
    const auto& occ = space->state(i);
    LogAmplitude a{0.5 * log_multinomial(std::span<const int>(occ.counts.data(),
                                                              static_cast<size_t>(L))),
                   Complex(1.0, 0.0)};
    for (int l = 0; l < L && !a.is_zero(); ++l) {
      const int k = occ.counts[l];
      if (k == 0) continue;
      const double m = std::abs(psi[l]);
      if (m == 0.0) {
        a = LogAmplitude::zero();
        break;
      }
      a.log_mag += k * std::log(m);
      a.phase *= std::pow(psi[l] / m, k);
    }
    log_mag[i] = a.log_mag;
    phase[i] = a.is_zero() ? Complex(1.0, 0.0) : a.phase;
  }

  // Normalize in log domain and fix the global phase without leaving it.
  const double log_sum = log_sum_exp(2.0 * log_mag);  // ~0 for normalized psi
  log_mag -= 0.5 * log_sum;
  for (Eigen::Index i = 0; i < log_mag.size(); ++i) {
    if (log_mag[i] == kNegInf) continue;
    const Complex p = std::conj(phase[i]);
    for (Eigen::Index q = i; q < log_mag.size(); ++q) phase[q] *= p;
    phase[i] = Complex(1.0, 0.0);
    break;
  }
  return SpinorState(N, 1, std::move(space), std::move(log_mag), std::move(phase),
                     log_factorial(N) + log_sum);
}

SpinorState build_multipartite_spinor(const Eigen::VectorXcd& psi_tensor, int M, int N,
                                      std::uint64_t amplitude_cap) {
  if (N < 1) throw std::invalid_argument("build_multipartite_spinor: N >= 1 required");
  check_normalized(psi_tensor, "build_multipartite_spinor");
  const int L = infer_levels(psi_tensor.size(), M);
  ExpansionResult r = expand_polynomial(psi_tensor, M, N, L, amplitude_cap);
  const double log_norm = 2.0 * r.log_shift + std::log(r.amps.squaredNorm());
  return state_from_linear(N, M, std::move(r.space), std::move(r.amps), log_norm);
}

double normalization_factor(const Eigen::VectorXcd& psi_tensor, int M, int N,
                            std::uint64_t amplitude_cap) {
  if (N < 1) throw std::invalid_argument("normalization_factor: N >= 1 required");
  check_normalized(psi_tensor, "normalization_factor");
  const int L = infer_levels(psi_tensor.size(), M);
  ExpansionResult r = expand_polynomial(psi_tensor, M, N, L, amplitude_cap);
  return 2.0 * r.log_shift + std::log(r.amps.squaredNorm());
}

SpinorState build_schmidt_bipartite(double chi, int N, const LocalUnitary& V1,
                                    const LocalUnitary& V2, std::uint64_t amplitude_cap) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[0] = std::cos(chi);
  psi[3] = std::sin(chi);
  SpinorState s = build_multipartite_spinor(psi, 2, N, amplitude_cap);
  if (!V1.is_identity()) s = apply_local_unitary(s, V1);
  if (!V2.is_identity()) s = apply_local_unitary(s, V2);
  return s;
}

SpinorState build_schmidt_bipartite(double chi, int N, std::uint64_t amplitude_cap) {
  return build_schmidt_bipartite(chi, N, LocalUnitary::identity(1, 2),
                                 LocalUnitary::identity(2, 2), amplitude_cap);
}

SpinorState build_epr(int N, std::uint64_t amplitude_cap) {
  return build_schmidt_bipartite(std::numbers::pi / 4.0, N, amplitude_cap);
}

SpinorState apply_local_unitary(const SpinorState& state, const LocalUnitary& V) {
  const int m = V.subsystem();
  if (m < 1 || m > state.subsystems())
    throw std::invalid_argument("apply_local_unitary: subsystem out of range");
  if (V.levels() != state.levels())
    throw std::invalid_argument("apply_local_unitary: level count mismatch");
  if (V.is_identity()) return state;

  const FockSpace& space = state.space();
  const Eigen::Index d = space.size();
  const int L = state.levels();
  const Eigen::MatrixXcd& H = V.generator();

  // Many-body quadratic generator sum_{ll'} H_{ll'} a†_l a_{l'} on the sector.
  Eigen::MatrixXcd Hm = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& occ = space.state(i);
    Complex diag(0.0, 0.0);
    for (int l = 0; l < L; ++l) diag += H(l, l) * static_cast<double>(occ.counts[l]);
    Hm(i, i) += diag;
    for (int l = 0; l < L; ++l) {
      for (int lp = 0; lp < L; ++lp) {
        if (l == lp || occ.counts[lp] == 0 || H(l, lp) == Complex(0.0, 0.0)) continue;
        Eigen::VectorXi c = occ.counts;
        c[lp] -= 1;
        c[l] += 1;
        const Eigen::Index j = FockSpace::rank(c);
        Hm(j, i) += H(l, lp) * std::sqrt(static_cast<double>(occ.counts[lp]) *
                                         static_cast<double>(occ.counts[l] + 1));
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hm);
  Eigen::VectorXcd ph(d);
  for (Eigen::Index i = 0; i < d; ++i)
    ph[i] = std::polar(1.0, -es.eigenvalues()[i] * V.time());
  Eigen::MatrixXcd U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();

  // Contract U along axis m-1 of the amplitude tensor.
  Eigen::VectorXcd amps = state.linear_amplitudes();
  const int M = state.subsystems();
  Eigen::Index outer = 1, inner = 1;
  for (int q = 0; q < m - 1; ++q) outer *= d;
  for (int q = m; q < M; ++q) inner *= d;
  Eigen::VectorXcd out(amps.size());
  Eigen::MatrixXcd block(d, inner);
  for (Eigen::Index o = 0; o < outer; ++o) {
    const Eigen::Index base = o * d * inner;
    for (Eigen::Index i = 0; i < d; ++i)
      block.row(i) = amps.segment(base + i * inner, inner).transpose();
    Eigen::MatrixXcd res = U * block;
    for (Eigen::Index i = 0; i < d; ++i)
      out.segment(base + i * inner, inner) = res.row(i).transpose();
  }
  return state_from_linear(state.duplication(), M, state.space_ptr(), std::move(out),
                           state.log_norm());
}

ScsState scs_from_micro(const Eigen::VectorXcd& psi_tensor, int M, int N) {
  check_normalized(psi_tensor, "scs_from_micro");
  const int L = infer_levels(psi_tensor.size(), M);
  ScsState s;
  s.psi = psi_tensor / psi_tensor.norm();
  s.M = M;
  s.L = L;
  s.N = N;
  return s;
}

SpinorState state_from_amplitudes(int N, int M, std::shared_ptr<const FockSpace> space,
                                  Eigen::VectorXcd amps, double log_norm) {
  return state_from_linear(N, M, std::move(space), std::move(amps), log_norm);
}

double fidelity(const SpinorState& a, const SpinorState& b) {
  if (a.size() != b.size() || a.subsystems() != b.subsystems())
    throw std::invalid_argument("fidelity: mismatched state layouts");
  const Complex ov = a.linear_amplitudes().dot(b.linear_amplitudes());
  return std::norm(ov);
}

nlohmann::json state_to_json(const SpinorState& state) {
  nlohmann::json j;
  j["N"] = state.duplication();
  j["M"] = state.subsystems();
  j["L"] = state.levels();
  nlohmann::json entries = nlohmann::json::array();
  Eigen::VectorXcd amps = state.linear_amplitudes();
  std::vector<Eigen::Index> idx(static_cast<size_t>(state.subsystems()));
  for (Eigen::Index flat = 0; flat < amps.size(); ++flat) {
    if (amps[flat] == Complex(0.0, 0.0)) continue;
    state.unflatten(flat, idx);
    nlohmann::json occ = nlohmann::json::array();
    for (Eigen::Index im : idx) {
      const auto& counts = state.space().state(im).counts;
      occ.push_back(std::vector<int>(counts.data(), counts.data() + counts.size()));
    }
    entries.push_back({{"occ", occ}, {"re", amps[flat].real()}, {"im", amps[flat].imag()}});
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace spinor
