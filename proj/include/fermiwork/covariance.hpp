#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fermiwork/modes.hpp"
#include "fermiwork/transform.hpp"

namespace fermiwork {

/// Majorana covariance matrix Gamma_kl = (i/2) <[c_k, c_l]> with the c_k^2 = 1
/// normalization, interleaved mode ordering. Real antisymmetric, physical iff
/// all singular values are <= 1. A single mode in state lambda = 1 - 2<n> has
/// the block [[0, lambda], [-lambda, 0]]; the vacuum block is [[0,1],[-1,0]].
class CovarianceMatrix {
 public:
  /// Validates antisymmetry (1e-12) and physicality (singular values <= 1 + 1e-10).
  explicit CovarianceMatrix(Eigen::MatrixXd gamma);

  int n_modes() const { return static_cast<int>(m_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  /// Gamma(2j, 2j+1), the lambda-value of mode j (0-based). Equals 1 - 2<n_j>.
  double block_value(int j) const { return m_(2 * j, 2 * j + 1); }

 private:
  Eigen::MatrixXd m_;
};

/// Structural report for a candidate covariance matrix; never throws.
struct CmDiagnostics {
  bool square_even = false;
  double max_antisymmetry_violation = 0.0;  // max |(G + G^T)_kl|
  int violation_row = -1;                   // worst entry of G + G^T
  int violation_col = -1;
  double max_singular_value = 0.0;
  bool antisymmetric = false;               // violation < 1e-12
  bool physical = false;                    // antisymmetric and max sv <= 1 + 1e-10
};

CmDiagnostics diagnose_cm(const Eigen::MatrixXd& gamma);

/// Checked construction; throws ValidationError carrying the diagnostics
/// (worst antisymmetry entry, max singular value) on failure.
CovarianceMatrix validate(const Eigen::MatrixXd& gamma);

/// Block-diagonal form of an antisymmetric matrix under a real orthogonal
/// transform: transform * Gamma * transform^T = blocks [[0, m_j], [-m_j, 0]].
/// Values are normalized nonnegative and sorted descending; det_sign records
/// det(transform), so sign(det * prod m_j) is the Pfaffian sign of Gamma.
struct CanonicalForm {
  OrthogonalTransform transform;
  std::vector<double> values;
  int det_sign;
};

/// Product of thermal modes: block j is [[0, tanh(beta_j omega_j / 2)], ...].
/// beta_j in (0, inf]; +inf gives the vacuum block.
CovarianceMatrix thermal_cm(const std::vector<double>& betas, const ModeSystem& modes);

/// E = sum_j (omega_j / 2) (1 - Gamma_{2j-1,2j}); zero for the vacuum,
/// omega_j for a filled mode.
double energy_cm(const CovarianceMatrix& cm, const ModeSystem& modes);

/// Jacobi-style block diagonalization: cyclic sweeps of exact two-mode
/// solves until the off-block mass is < 1e-12 (at most 200 sweeps).
CanonicalForm canonical_form(const CovarianceMatrix& cm);

/// sign(det(O) * prod m_j) from canonical_form; 0 if any |m_j| < 1e-10.
int pfaffian_sign(const CovarianceMatrix& cm);

/// Two-mode standard form: local rotations O_a (+) O_b zero the diagonal of
/// the correlation block, leaving the six-parameter pattern
///   Gamma_sf(0,1) = a, Gamma_sf(2,3) = b, Gamma_sf(0,3) = e1, Gamma_sf(1,2) = e2
/// with Gamma_sf(0,2) = Gamma_sf(1,3) = 0. Per-mode energies are unchanged.
struct StandardForm {
  OrthogonalTransform transform;
  CovarianceMatrix cm;
  double a;
  double b;
  double e1;
  double e2;
};

StandardForm standard_form_two_mode(const CovarianceMatrix& cm);

/// True iff Gamma Gamma^T = 1 within tol (all canonical values 1).
bool is_pure(const CovarianceMatrix& cm, double tol = 1e-10);

}  // namespace fermiwork
