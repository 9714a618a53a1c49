#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fermiwork/covariance.hpp"
#include "fermiwork/modes.hpp"
#include "fermiwork/transform.hpp"

namespace fermiwork {

/// Hard cap for the dense Fock-space representation (2^8 = 256 dimensions).
inline constexpr int kMaxFockModes = 8;

/// Dense operator on the 2^n-dimensional Fock space of n modes.
/// Basis: occupation bitstrings |s_1 ... s_n> with mode 1 most significant.
class FockOperator {
 public:
  FockOperator(int n_modes, Eigen::MatrixXcd matrix);

  int n_modes() const { return n_modes_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  int n_modes_;
  Eigen::MatrixXcd matrix_;
};

/// Density matrix on the Fock space. Construction validates Hermiticity and
/// unit trace (1e-12), positivity (eigenvalues >= -1e-12), and evenness under
/// the parity operator prod_k (1 - 2 n_k) (1e-12): fermionic superselection.
class FockState {
 public:
  FockState(int n_modes, Eigen::MatrixXcd rho);

  int n_modes() const { return n_modes_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

 private:
  int n_modes_;
  Eigen::MatrixXcd rho_;
};

/// Majorana operators c_1 ... c_2n under Jordan-Wigner, normalized c_k^2 = 1:
/// c_{2k-1} = a_k + a_k^dag, c_{2k} = i(a_k - a_k^dag), {c_i, c_j} = 2 delta_ij.
std::vector<FockOperator> majorana_ops(int n_modes);

/// H = sum_k omega_k a_k^dag a_k (diagonal in the occupation basis).
FockOperator hamiltonian(const ModeSystem& modes);

/// Projector |s><s| onto the occupation bitstring with the given basis index.
FockState basis_state(std::uint32_t index, int n_modes);

/// Product of per-mode Gibbs states, populations (1, e^{-beta_k omega_k}) / Z_k.
/// beta_k in (0, inf]; +inf selects the mode vacuum.
FockState thermal_state(const std::vector<double>& betas, const ModeSystem& modes);

/// Tr[H rho].
double energy(const FockState& state, const ModeSystem& modes);

/// Maximum unitarily extractable work: Tr[H rho] minus the energy of the
/// passive rearrangement (populations sorted descending onto levels ascending).
double ergotropy(const FockState& state, const ModeSystem& modes);

/// True iff ergotropy <= tol and [rho, H] vanishes to tol.
bool is_passive(const FockState& state, const ModeSystem& modes, double tol = 1e-8);

/// F = Tr[H rho] - T S(rho), S = -Tr[rho ln rho]; minimized by the Gibbs
/// state at temperature T.
double free_energy(const FockState& state, const ModeSystem& modes, double temperature);

/// Covariance matrix Gamma_kl = (i/2) Tr(rho [c_k, c_l]).
CovarianceMatrix density_to_cm(const FockState& state);

/// Gaussian density matrix with the given covariance matrix:
/// rho = 2^{-n} prod_j (1 + i m_j ctilde_{2j-1} ctilde_{2j}) built on the
/// canonical form of cm. Round-trips through density_to_cm to 1e-10.
FockState cm_to_density(const CovarianceMatrix& cm);

enum class GaussianUnitaryKind { rotation, squeeze, beamsplit };

/// Matrix exponential of the quadratic generator:
///   rotation  exp(-i theta a^dag a)        on mode_a,
///   squeeze   exp(r (a b - b^dag a^dag))   on (mode_a, mode_b),
///   beamsplit exp(phi (a b^dag + a^dag b)) on (mode_a, mode_b).
/// mode_b is ignored for rotation.
FockOperator fock_gaussian_unitary(GaussianUnitaryKind kind, double angle, int n_modes,
                                   int mode_a, int mode_b = -1);

/// The orthogonal O with U^dag c_k U = sum_l O_kl c_l, recovered by
/// trace inner products. Throws RepresentationError if conjugation leaves
/// the Majorana span (non-Gaussian U) beyond 1e-10, so that
/// density_to_cm(U rho U^dag) = O density_to_cm(rho) O^T.
OrthogonalTransform extract_orthogonal_action(const FockOperator& u);

/// Self-inverse swap of |010> and |101> on three modes, identity elsewhere.
/// Exchanges a single excitation of mode 2 with a pair on modes 1 and 3.
FockOperator activation_unitary_3mode();

/// Tr[H rho] - Tr[H U rho U^dag]: work extracted by conjugating with U.
double work_extracted(const FockState& state, const FockOperator& u, const ModeSystem& modes);

}  // namespace fermiwork
