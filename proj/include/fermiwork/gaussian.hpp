#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermiwork/covariance.hpp"
#include "fermiwork/modes.hpp"
#include "fermiwork/transform.hpp"

namespace fermiwork {

/// Phase-space actions of the three Gaussian unitaries in interleaved
/// Majorana ordering, defined as the orthogonal O with U^dag c_k U = O c_k
/// (matching fock extract_orthogonal_action exactly). All have det +1.

/// exp(-i theta a^dag a) on `mode`: [[cos, -sin], [sin, cos]] on its pair.
OrthogonalTransform rotation_matrix(int n_modes, int mode, double theta);

/// exp(r (a b - b^dag a^dag)) on (mode_a, mode_b): 2x2 blocks
/// [[cos r * I, sin r * sigma_z], [-sin r * sigma_z, cos r * I]].
OrthogonalTransform squeeze_matrix(int n_modes, int mode_a, int mode_b, double r);

/// exp(phi (a b^dag + a^dag b)) on (mode_a, mode_b): 2x2 blocks
/// [[cos phi * I, sin phi * I], [-sin phi * I, cos phi * I]].
OrthogonalTransform beamsplit_matrix(int n_modes, int mode_a, int mode_b, double phi);

/// O Gamma O^T with exact re-antisymmetrization of the rounding residue.
CovarianceMatrix apply(const OrthogonalTransform& o, const CovarianceMatrix& cm);

/// One optimized stage: the chosen angle, the transformed CM, its energy.
struct StageResult {
  double angle;
  CovarianceMatrix cm;
  double energy;
};

/// Energy-optimal two-mode squeeze on a standard-form CM (a, b, e1, e2
/// pattern required to 1e-10). Both stationarity branches of
/// (a+b) sin 2r + (e1+e2) cos 2r = 0 are evaluated and the lower-energy one
/// returned; r_star is the global minimizer over [0, pi). The result has the
/// single-parameter correlation pattern e1' = -e2' = (e1 - e2)/2.
StageResult optimal_squeeze(const CovarianceMatrix& standard_form, const ModeSystem& modes);

/// Energy-optimal two-mode beamsplit on a single-e pattern CM. Both branches
/// of (b - a) sin 2theta + 2 e cos 2theta = 0 are evaluated; the result is
/// block diagonal (Williamson form). For omega_a = omega_b the energy is
/// unchanged for every theta and the first branch is returned.
StageResult optimal_beamsplit(const CovarianceMatrix& single_e_form, const ModeSystem& modes);

struct MinimizationStage {
  std::string name;   // "input", "standard_form", "squeeze", "beamsplit", "canonical_opt"
  double param;       // r or theta where applicable, else 0
  OrthogonalTransform transform;  // applied at this stage (identity for "input")
  CovarianceMatrix cm;            // state after the stage
  double energy;
};

/// Stage-by-stage record of a Gaussian energy minimization. Energies are
/// non-increasing; the first stage is the untouched input.
struct MinimizationTrace {
  std::vector<MinimizationStage> stages;

  const MinimizationStage& final_stage() const { return stages.back(); }
  double final_energy() const { return stages.back().energy; }
  const CovarianceMatrix& final_cm() const { return stages.back().cm; }
};

/// Minimal-energy Gaussian (special-orthogonal) transformation of cm.
/// Two modes: standard form -> optimal squeeze -> optimal beamsplit, which
/// attains the exact minimum. Other mode counts: a single constructive stage
/// realizing the optimal Pfaffian-feasible signed permutation of the
/// canonical values (canonical transform composed with block swaps and
/// paired sign flips, det +1 throughout).
MinimizationTrace gaussian_minimize(const CovarianceMatrix& cm, const ModeSystem& modes);

/// energy_cm(cm) minus the minimum over the special-orthogonal orbit:
/// min over permutations pi and signs sigma_j of
///   sum_j (omega_j/2)(1 - sigma_j nu_pi(j)),
/// subject to prod sigma_j = pfaffian_sign(cm) when no canonical value
/// vanishes (the constraint is void if some nu_j < 1e-10). Always >= -1e-12.
double gaussian_ergotropy(const CovarianceMatrix& cm, const ModeSystem& modes);

/// True iff gaussian_ergotropy(cm) <= tol.
bool is_gaussian_passive(const CovarianceMatrix& cm, const ModeSystem& modes, double tol = 1e-8);

/// Best (lowest) energy over `trials` seeded random special-orthogonal
/// conjugations (Givens-product sampling), polished by cyclic exact line
/// searches over single and paired rotation planes from the best samples.
/// Deterministic per seed.
double random_orthogonal_search(const CovarianceMatrix& cm, const ModeSystem& modes,
                                std::uint64_t trials, std::uint64_t seed = 42);

}  // namespace fermiwork
