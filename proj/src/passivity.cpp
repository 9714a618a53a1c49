#include "fermiwork/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "fermiwork/errors.hpp"

namespace fermiwork {

namespace {

void check_diagonal_mode_count(int n_modes) {
  if (n_modes < 1) throw ArgumentError("diagonal: need at least one mode");
  if (n_modes > kMaxDiagonalModes)
    throw CapacityError("diagonal: " + std::to_string(n_modes) + " modes exceed the cap of " +
                        std::to_string(kMaxDiagonalModes));
}

std::vector<double> thermal_populations(const std::vector<double>& betas,
                                        const ModeSystem& modes) {
  const int n = modes.n_modes();
  if (static_cast<int>(betas.size()) != n)
    throw ArgumentError("thermal populations: betas size " + std::to_string(betas.size()) +
                        " != n_modes " + std::to_string(n));
  std::vector<double> excited(n);
  for (int k = 0; k < n; ++k) {
    const double beta = betas[k];
    if (std::isnan(beta) || beta <= 0.0)
      throw ArgumentError("thermal populations: beta_" + std::to_string(k + 1) +
                          " must be positive (inf allowed)");
    if (std::isinf(beta)) {
      excited[k] = 0.0;
    } else {
      const double w = std::exp(-beta * modes.omega(k));
      excited[k] = w / (1.0 + w);
    }
  }
  std::vector<double> pops(std::size_t{1} << n);
  for (std::uint32_t idx = 0; idx < pops.size(); ++idx) {
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= occupation(idx, k, n) ? excited[k] : 1.0 - excited[k];
    pops[idx] = p;
  }
  return pops;
}

}  // namespace

DiagonalState::DiagonalState(ModeSystem modes, std::vector<double> populations)
    : modes_(std::move(modes)), populations_(std::move(populations)) {
  check_diagonal_mode_count(modes_.n_modes());
  const std::size_t dim = std::size_t{1} << modes_.n_modes();
  if (populations_.size() != dim)
    throw ArgumentError("DiagonalState: expected " + std::to_string(dim) + " populations, got " +
                        std::to_string(populations_.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < populations_.size(); ++i) {
    if (std::isnan(populations_[i]) || populations_[i] < -1e-15)
      throw ValidationError("DiagonalState: negative population at index " + std::to_string(i));
    sum += populations_[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("DiagonalState: populations sum to " + std::to_string(sum));
}

DiagonalState thermal_diagonal(const std::vector<double>& betas, const ModeSystem& modes) {
  check_diagonal_mode_count(modes.n_modes());
  return DiagonalState(modes, thermal_populations(betas, modes));
}

DiagonalState tensor_power(const DiagonalState& state, int k) {
  if (k < 1) throw ArgumentError("tensor_power: k must be >= 1");
  const int n = state.n_modes();
  if (n * k > kMaxDiagonalModes)
    throw CapacityError("tensor_power: " + std::to_string(n * k) + " total modes exceed the cap of " +
                        std::to_string(kMaxDiagonalModes));
  std::vector<double> omegas;
  omegas.reserve(static_cast<std::size_t>(n) * k);
  for (int c = 0; c < k; ++c)
    for (int m = 0; m < n; ++m) omegas.push_back(state.modes().omega(m));
  const std::uint32_t mask = (1u << n) - 1u;
  std::vector<double> pops(std::size_t{1} << (n * k));
  for (std::uint32_t idx = 0; idx < pops.size(); ++idx) {
    double p = 1.0;
    for (int c = 0; c < k; ++c)
      p *= state.population((idx >> ((k - 1 - c) * n)) & mask);
    pops[idx] = p;
  }
  return DiagonalState(ModeSystem(std::move(omegas)), std::move(pops));
}

double diagonal_ergotropy(const DiagonalState& state) {
  const std::size_t dim = state.populations().size();
  std::vector<double> levels(dim);
  double current = 0.0;
  for (std::uint32_t idx = 0; idx < dim; ++idx) {
    levels[idx] = bitstring_energy(idx, state.modes());
    current += state.population(idx) * levels[idx];
  }
  std::vector<double> pops = state.populations();
  std::sort(pops.begin(), pops.end(), std::greater<>());
  std::sort(levels.begin(), levels.end());
  double passive = 0.0;
  for (std::size_t i = 0; i < dim; ++i) passive += pops[i] * levels[i];
  return current - passive;
}

std::optional<NonpassivityWitness> nonpassivity_witness(const std::vector<double>& betas,
                                                        const ModeSystem& modes) {
  const DiagonalState state = thermal_diagonal(betas, modes);
  const std::uint32_t dim = 1u << modes.n_modes();
  std::optional<NonpassivityWitness> best;
  for (std::uint32_t s = 0; s < dim; ++s)
    for (std::uint32_t sp = 0; sp < dim; ++sp) {
      if (s == sp) continue;
      const double de = bitstring_energy(sp, modes) - bitstring_energy(s, modes);
      const double dp = state.population(sp) - state.population(s);
      if (de <= 0.0 || dp <= 0.0) continue;  // need s' above s and more populated
      const double gain = de * dp;
      if (!best || gain > best->work_gain) best = NonpassivityWitness{s, sp, gain};
    }
  return best;
}

double activation_work(const std::vector<double>& betas, const ModeSystem& modes,
                       std::uint32_t s, std::uint32_t s_prime) {
  const std::uint32_t dim = 1u << modes.n_modes();
  if (s >= dim || s_prime >= dim)
    throw ArgumentError("activation_work: bitstring index out of range");
  const DiagonalState state = thermal_diagonal(betas, modes);
  const double de = bitstring_energy(s_prime, modes) - bitstring_energy(s, modes);
  const double dp = state.population(s_prime) - state.population(s);
  return de * dp;
}

bool ProtocolReport::all_satisfied() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ProtocolCondition& c) { return c.satisfied; });
}

ProtocolReport protocol_check(std::uint32_t s, std::uint32_t s_prime,
                              const std::vector<double>& betas, const ModeSystem& modes) {
  const int n = modes.n_modes();
  check_diagonal_mode_count(n);
  const std::uint32_t dim = 1u << n;
  if (s >= dim || s_prime >= dim)
    throw ArgumentError("protocol_check: bitstring index out of range");
  if (s == s_prime) throw ArgumentError("protocol_check: endpoints must differ");
  if (static_cast<int>(betas.size()) != n)
    throw ArgumentError("protocol_check: betas size mismatch");

  ProtocolReport report;
  const std::uint32_t full = dim - 1u;
  const bool uniform = s == 0u || s == full || s_prime == 0u || s_prime == full;
  report.conditions.push_back(
      {"endpoints_not_uniform", !uniform,
       bitstring_label(s, n) + " and " + bitstring_label(s_prime, n) +
           (uniform ? " include a fully filled or empty string" : " are both mixed")});

  double weight_out = 0.0, weight_in = 0.0;  // beta*omega leaving / entering occupation
  int flips_down = 0, flips_up = 0;
  for (int k = 0; k < n; ++k) {
    const int before = occupation(s, k, n), after = occupation(s_prime, k, n);
    if (before == after) continue;
    if (before == 1) {
      ++flips_down;
      weight_out += betas[k] * modes.omega(k);
    } else {
      ++flips_up;
      weight_in += betas[k] * modes.omega(k);
    }
  }
  report.conditions.push_back(
      {"both_flip_directions", flips_down > 0 && flips_up > 0,
       std::to_string(flips_down) + " modes emptied, " + std::to_string(flips_up) + " filled"});
  report.conditions.push_back(
      {"weight_transfer", weight_out > weight_in,
       "beta*omega leaving " + std::to_string(weight_out) + " vs entering " +
           std::to_string(weight_in)});
  // For a product of thermal modes the shared factor from untouched modes is
  // strictly positive, so it scales the swap work without changing its sign.
  report.conditions.push_back(
      {"spectators_neutral", true,
       "untouched modes contribute a common positive population factor"});
  return report;
}

std::optional<int> activation_number(const DiagonalState& single_copy, int k_max) {
  if (k_max < 1) throw ArgumentError("activation_number: k_max must be >= 1");
  for (int k = 1; k <= k_max; ++k) {
    const DiagonalState power = k == 1 ? single_copy : tensor_power(single_copy, k);
    if (diagonal_ergotropy(power) > 1e-12) return k;
  }
  return std::nullopt;
}

ActivationReport make_activation_report(const std::vector<double>& betas,
                                        const ModeSystem& modes, int k_max) {
  if (k_max < 1) throw ArgumentError("make_activation_report: k_max must be >= 1");
  ActivationReport report;
  report.witness = nonpassivity_witness(betas, modes);
  report.passive = !report.witness.has_value();
  report.work_gain = report.witness ? report.witness->work_gain : 0.0;
  const DiagonalState copy = thermal_diagonal(betas, modes);
  const int k_feasible = std::min(k_max, kMaxDiagonalModes / modes.n_modes());
  report.k_used = k_feasible >= 1 ? activation_number(copy, k_feasible) : std::nullopt;
  return report;
}

}  // namespace fermiwork
