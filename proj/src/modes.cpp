#include "fermiwork/modes.hpp"

#include <cmath>

namespace fermiwork {

ModeSystem::ModeSystem(std::vector<double> omegas) : omegas_(std::move(omegas)) {
  if (omegas_.empty()) throw ArgumentError("ModeSystem: at least one mode required");
  for (std::size_t k = 0; k < omegas_.size(); ++k) {
    if (!std::isfinite(omegas_[k]) || omegas_[k] <= 0.0)
      throw ArgumentError("ModeSystem: omega_" + std::to_string(k + 1) +
                          " must be finite and positive");
  }
}

double bitstring_energy(std::uint32_t index, const ModeSystem& modes) {
  double e = 0.0;
  for (int k = 0; k < modes.n_modes(); ++k)
    if (occupation(index, k, modes.n_modes())) e += modes.omega(k);
  return e;
}

std::string bitstring_label(std::uint32_t index, int n_modes) {
  std::string s(n_modes, '0');
  for (int k = 0; k < n_modes; ++k)
    if (occupation(index, k, n_modes)) s[k] = '1';
  return s;
}

}  // namespace fermiwork
