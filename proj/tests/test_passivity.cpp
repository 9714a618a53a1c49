#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fermiwork/errors.hpp"
#include "fermiwork/fock.hpp"
#include "fermiwork/passivity.hpp"

using namespace fermiwork;

namespace {

// Independent activation oracle: a k-copy diagonal ensemble is active exactly
// when sorting its populations against ascending energy levels lowers the mean
// energy. Built directly on the k-fold product, no witness logic involved.
bool brute_force_active(const DiagonalState& s, int k, double tol = 1e-12) {
  const DiagonalState big = k == 1 ? s : tensor_power(s, k);
  const std::size_t dim = big.populations().size();
  std::vector<double> energies(dim);
  for (std::uint32_t idx = 0; idx < dim; ++idx)
    energies[idx] = bitstring_energy(idx, big.modes());
  double current = 0.0;
  for (std::uint32_t idx = 0; idx < dim; ++idx)
    current += big.population(idx) * energies[idx];
  std::vector<double> p = big.populations();
  std::sort(p.begin(), p.end(), std::greater<double>());
  std::sort(energies.begin(), energies.end());
  const double floor_energy = std::inner_product(p.begin(), p.end(), energies.begin(), 0.0);
  return current - floor_energy > tol;
}

// (0.7, 0.3) x (0.55, 0.45) written as a thermal product so both the diagonal
// and the witness entry points see the same state.
const std::vector<double> kQubitBetas{std::log(7.0 / 3.0), std::log(11.0 / 9.0)};

}  // namespace

TEST_CASE("diagonal state validation") {
  CHECK_NOTHROW(DiagonalState(ModeSystem({1.0}), {0.5, 0.5}));
  CHECK_THROWS_AS(DiagonalState(ModeSystem({1.0}), {0.6, 0.6}), ValidationError);
  CHECK_THROWS_AS(DiagonalState(ModeSystem({1.0}), {1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(DiagonalState(ModeSystem({1.0, 2.0}), {0.5, 0.5}), ArgumentError);
  // A tiny negative within rounding noise is accepted.
  CHECK_NOTHROW(DiagonalState(ModeSystem({1.0}), {1.0 + 1e-16, -1e-16}));
}

TEST_CASE("thermal_diagonal matches the dense thermal state") {
  const std::vector<double> betas{0.3, 1.7};
  const ModeSystem m({1.0, 2.0});
  const DiagonalState d = thermal_diagonal(betas, m);
  const FockState rho = thermal_state(betas, m);
  for (std::uint32_t idx = 0; idx < d.populations().size(); ++idx) {
    const auto v = static_cast<Eigen::Index>(idx);
    CHECK(d.population(idx) == doctest::Approx(rho.matrix()(v, v).real()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(thermal_diagonal({0.3}, m), ArgumentError);
  CHECK_THROWS_AS(thermal_diagonal({0.3, -1.0}, m), ArgumentError);
}

TEST_CASE("tensor_power replicates populations and frequencies") {
  const DiagonalState s(ModeSystem({1.5}), {0.8, 0.2});
  const DiagonalState sq = tensor_power(s, 2);
  REQUIRE(sq.populations().size() == 4);
  CHECK(sq.population(0) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(sq.population(1) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(sq.population(2) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(sq.population(3) == doctest::Approx(0.04).epsilon(1e-15));
  REQUIRE(sq.n_modes() == 2);
  CHECK(sq.modes().omega(0) == 1.5);
  CHECK(sq.modes().omega(1) == 1.5);
  CHECK(tensor_power(s, 1).populations() == s.populations());
  CHECK_THROWS_AS(tensor_power(s, 0), ArgumentError);
  // 17 two-level copies would exceed the supported register width.
  CHECK_THROWS_AS(tensor_power(s, 17), CapacityError);
}

TEST_CASE("diagonal_ergotropy agrees with the dense oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<double> p(std::size_t{1} << n), omegas;
    double z = 0.0;
    for (double& x : p) { x = unit(rng) + 1e-3; z += x; }
    for (double& x : p) x /= z;
    for (int k = 0; k < n; ++k) omegas.push_back(0.5 + unit(rng));
    const ModeSystem m(omegas);
    const DiagonalState s(m, p);

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
    for (int idx = 0; idx < (1 << n); ++idx) rho(idx, idx) = p[idx];
    // Diagonal matrices are automatically parity-even, so FockState accepts them.
    const FockState dense(n, rho);
    CHECK(diagonal_ergotropy(s) == doctest::Approx(ergotropy(dense, m)).epsilon(1e-11));
  }
  CHECK(diagonal_ergotropy(thermal_diagonal({1.0, 2.0}, ModeSystem({1.0, 1.0}))) ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK(diagonal_ergotropy(DiagonalState(ModeSystem({1.0}), {0.3, 0.7})) ==
        doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("witness search finds the unique inverted pair") {
  const std::vector<double> betas{0.25, 0.25, 1.0};
  const ModeSystem m({1.0, 1.0, 1.0});
  const auto w = nonpassivity_witness(betas, m);
  REQUIRE(w.has_value());
  // |001> holds one expensive excitation; |110> holds two cheap ones.
  CHECK(w->s == 1);
  CHECK(w->s_prime == 6);
  CHECK(w->work_gain > 0.0);
  CHECK(w->work_gain == doctest::Approx(activation_work(betas, m, 1, 6)).epsilon(1e-15));
  // Maximality: re-scan every ordered pair by hand.
  const DiagonalState s = thermal_diagonal(betas, m);
  double best = 0.0;
  for (std::uint32_t i = 0; i < s.populations().size(); ++i)
    for (std::uint32_t j = 0; j < s.populations().size(); ++j) {
      const double gain = (bitstring_energy(j, m) - bitstring_energy(i, m)) *
                          (s.population(j) - s.population(i));
      if (gain > best) best = gain;
    }
  CHECK(w->work_gain == doctest::Approx(best).epsilon(1e-15));
}

TEST_CASE("thermal and population-ordered states have no witness") {
  CHECK_FALSE(nonpassivity_witness({0.5, 0.5}, ModeSystem({1.0, 1.0})).has_value());
  CHECK_FALSE(nonpassivity_witness({2.0, 2.0, 2.0}, ModeSystem({1.0, 1.0, 1.0})).has_value());
  // Two unequal-temperature modes at one frequency: still population-ordered.
  CHECK_FALSE(nonpassivity_witness({0.25, 1.0}, ModeSystem({1.0, 1.0})).has_value());
  CHECK_FALSE(nonpassivity_witness(kQubitBetas, ModeSystem({1.0, 1.0})).has_value());
}

TEST_CASE("activation_work closed form") {
  const std::vector<double> betas{0.25, 1.0, 0.25};
  const ModeSystem m({1.0, 1.0, 1.0});
  // Pair |010> (energy 1) with |101> (energy 2): work = (p_101 - p_010) * 1.
  double part = 0.0;
  for (std::uint32_t idx = 0; idx < 8; ++idx) {
    double w = 0.0;
    for (int k = 0; k < 3; ++k)
      if (occupation(idx, k, 3)) w += betas[k];
    part += std::exp(-w);
  }
  const double expected = (std::exp(-0.5) - std::exp(-1.0)) / part;
  CHECK(activation_work(betas, m, 2, 5) == doctest::Approx(expected).epsilon(1e-14));
  // The swap work is symmetric in its endpoints: both factors change sign.
  CHECK(activation_work(betas, m, 5, 2) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(activation_work(betas, m, 3, 3) == 0.0);
  CHECK_THROWS_AS(activation_work(betas, m, 1, 8), ArgumentError);
}

TEST_CASE("protocol_check labels the swap conditions") {
  const std::vector<double> betas{0.25, 1.0, 0.25};
  const ModeSystem m({1.0, 1.0, 1.0});
  const ProtocolReport good = protocol_check(2, 5, betas, m);
  REQUIRE(good.conditions.size() == 4);
  for (const auto& c : good.conditions) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.satisfied);
  }
  CHECK(good.all_satisfied());

  // Reversed direction moves beta-omega weight the wrong way.
  const ProtocolReport reversed = protocol_check(5, 2, betas, m);
  CHECK_FALSE(reversed.all_satisfied());
  for (const auto& c : reversed.conditions)
    if (c.name == "weight_transfer") CHECK_FALSE(c.satisfied);

  // Vacuum against the full register: uniform endpoints, one flip direction.
  const ProtocolReport ends = protocol_check(0, 7, betas, m);
  int failed = 0;
  for (const auto& c : ends.conditions)
    if (!c.satisfied) ++failed;
  CHECK(failed >= 2);

  CHECK_THROWS_AS(protocol_check(2, 2, betas, m), ArgumentError);
  CHECK_THROWS_AS(protocol_check(2, 9, betas, m), ArgumentError);
}

TEST_CASE("activation_number on a product of unequal qubits") {
  const ModeSystem m({1.0, 1.0});
  const DiagonalState s = thermal_diagonal(kQubitBetas, m);
  // One copy is passive: populations .385 .315 .165 .135 against energies 0 1 1 2.
  CHECK(s.population(0) == doctest::Approx(0.385).epsilon(1e-12));
  CHECK(s.population(1) == doctest::Approx(0.315).epsilon(1e-12));
  CHECK_FALSE(brute_force_active(s, 1));
  CHECK(brute_force_active(s, 2));
  const auto k = activation_number(s, 5);
  REQUIRE(k.has_value());
  CHECK(*k == 2);
}

TEST_CASE("activation_number is empty for globally Gibbs ensembles") {
  const DiagonalState t = thermal_diagonal({0.8, 0.8}, ModeSystem({1.0, 2.0}));
  CHECK_FALSE(activation_number(t, 5).has_value());
  for (int k = 1; k <= 5; ++k) CHECK_FALSE(brute_force_active(t, k));
}

TEST_CASE("unequal temperatures at one frequency activate at three copies") {
  const ModeSystem m({1.0, 1.0});
  const std::vector<double> betas{1.0, 2.0};
  const DiagonalState s = thermal_diagonal(betas, m);
  CHECK_FALSE(brute_force_active(s, 1));
  CHECK_FALSE(brute_force_active(s, 2));
  CHECK(brute_force_active(s, 3));
  const auto k = activation_number(s, 5);
  REQUIRE(k.has_value());
  CHECK(*k == 3);

  const ActivationReport report = make_activation_report(betas, m, 5);
  CHECK(report.passive);  // single copy shows no witness
  CHECK_FALSE(report.witness.has_value());
  CHECK(report.work_gain == 0.0);
  REQUIRE(report.k_used.has_value());
  CHECK(*report.k_used == 3);
}

TEST_CASE("make_activation_report caps the copy count by register width") {
  const ModeSystem m({1.0, 1.0, 1.0});
  // k_max = 10 would need 30 modes; the report caps at 5 copies and must not throw.
  ActivationReport report;
  CHECK_NOTHROW(report = make_activation_report({0.5, 1.0, 1.5}, m, 10));
}

TEST_CASE("an active single copy reports its witness immediately") {
  const ModeSystem m({1.0, 1.0, 1.0});
  const ActivationReport report = make_activation_report({0.25, 0.25, 1.0}, m, 5);
  CHECK_FALSE(report.passive);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->s == 1);
  CHECK(report.witness->s_prime == 6);
  CHECK(report.work_gain > 0.0);
  REQUIRE(report.k_used.has_value());
  CHECK(*report.k_used == 1);
}
