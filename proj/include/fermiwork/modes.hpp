#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermiwork/errors.hpp"

namespace fermiwork {

/// Frequencies of a register of non-interacting fermionic modes,
/// H = sum_k omega_k n_k with hbar = 1. Mode numbering is 1-based in
/// formulas and bitstrings, 0-based in code indices.
class ModeSystem {
 public:
  explicit ModeSystem(std::vector<double> omegas);

  int n_modes() const { return static_cast<int>(omegas_.size()); }
  double omega(int k) const { return omegas_.at(k); }
  const std::vector<double>& omegas() const { return omegas_; }

 private:
  std::vector<double> omegas_;
};

/// Occupation s_k of mode k (0-based) in a basis index. Bitstrings read
/// |s_1 s_2 ... s_n> with mode 1 as the most significant position, so
/// index = sum_k s_k 2^(n-1-k).
inline int occupation(std::uint32_t index, int k, int n_modes) {
  return static_cast<int>((index >> (n_modes - 1 - k)) & 1u);
}

/// Energy of the occupation bitstring `index` under `modes`.
double bitstring_energy(std::uint32_t index, const ModeSystem& modes);

/// "s_1 s_2 ... s_n" rendering of a basis index, e.g. 0b010 with n=3 -> "010".
std::string bitstring_label(std::uint32_t index, int n_modes);

}  // namespace fermiwork
