#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermiwork/modes.hpp"

namespace fermiwork {

/// Cap for occupation-diagonal computations (2^16 populations).
inline constexpr int kMaxDiagonalModes = 16;

/// Occupation-diagonal state: one population per occupation bitstring,
/// indexed like the Fock basis (mode 1 most significant). Populations are
/// nonnegative and sum to 1 within 1e-12.
class DiagonalState {
 public:
  DiagonalState(ModeSystem modes, std::vector<double> populations);

  int n_modes() const { return modes_.n_modes(); }
  const ModeSystem& modes() const { return modes_; }
  const std::vector<double>& populations() const { return populations_; }
  double population(std::uint32_t index) const { return populations_.at(index); }

 private:
  ModeSystem modes_;
  std::vector<double> populations_;
};

/// Product of per-mode Gibbs populations; beta_k in (0, inf].
DiagonalState thermal_diagonal(const std::vector<double>& betas, const ModeSystem& modes);

/// k-fold tensor power: populations multiply, the mode list repeats.
DiagonalState tensor_power(const DiagonalState& state, int k);

/// Extractable work of a diagonal state under level permutations:
/// current energy minus the passive arrangement (populations sorted
/// descending onto bitstring energies sorted ascending).
double diagonal_ergotropy(const DiagonalState& state);

/// A population inversion in a product of thermal modes: bitstrings with
///   sum_i s_i beta_i omega_i > sum_i s'_i beta_i omega_i   (s less populated)
///   sum_i s'_i omega_i      > sum_i s_i omega_i            (s' higher in energy)
/// so that swapping them extracts (E_s' - E_s)(p_s' - p_s) > 0.
struct NonpassivityWitness {
  std::uint32_t s;
  std::uint32_t s_prime;
  double work_gain;
};

/// Lexicographically first maximal-gain witness, or nullopt if the thermal
/// product is passive. Scans all bitstring pairs; intended for small n.
std::optional<NonpassivityWitness> nonpassivity_witness(const std::vector<double>& betas,
                                                        const ModeSystem& modes);

/// Work extracted from the thermal product by swapping the populations of
/// two bitstrings: (E_s' - E_s)(p_s' - p_s).
double activation_work(const std::vector<double>& betas, const ModeSystem& modes,
                       std::uint32_t s, std::uint32_t s_prime);

/// One checklist row for a proposed two-bitstring swap protocol.
struct ProtocolCondition {
  std::string name;
  bool satisfied;
  std::string detail;
};

struct ProtocolReport {
  std::vector<ProtocolCondition> conditions;
  bool all_satisfied() const;
};

/// Evaluates the swap-protocol conditions for (s, s'):
/// neither endpoint fully filled or empty; both creation and annihilation
/// among the flipped modes; the beta-omega weight leaving the populated side
/// exceeds the weight entering the unpopulated side; untouched modes do not
/// affect the sign of the extracted work.
ProtocolReport protocol_check(std::uint32_t s, std::uint32_t s_prime,
                              const std::vector<double>& betas, const ModeSystem& modes);

/// Smallest k <= k_max with diagonal_ergotropy(state^(tensor k)) > 1e-12,
/// or nullopt if every power up to k_max is passive.
std::optional<int> activation_number(const DiagonalState& single_copy, int k_max);

/// Aggregate answer to "is this thermal product activable, and how".
struct ActivationReport {
  bool passive;
  std::optional<NonpassivityWitness> witness;
  double work_gain;            // witness gain, 0 when passive
  std::optional<int> k_used;   // smallest activating copy count within k_max
};

ActivationReport make_activation_report(const std::vector<double>& betas,
                                        const ModeSystem& modes, int k_max);

}  // namespace fermiwork
