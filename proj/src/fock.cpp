#include "fermiwork/fock.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include "fermiwork/errors.hpp"

namespace fermiwork {

namespace {

using complex = std::complex<double>;
constexpr complex kI{0.0, 1.0};

void check_mode_count(int n_modes) {
  if (n_modes < 1) throw ArgumentError("fock: need at least one mode");
  if (n_modes > kMaxFockModes)
    throw CapacityError("fock: " + std::to_string(n_modes) + " modes exceed the dense cap of " +
                        std::to_string(kMaxFockModes));
}

int fock_dim(int n_modes) { return 1 << n_modes; }

/// Annihilation operator of mode k under Jordan-Wigner: clears bit k and
/// picks up (-1)^(occupations of modes before k).
Eigen::MatrixXcd annihilator(int k, int n_modes) {
  const int dim = fock_dim(n_modes);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    if (!occupation(idx, k, n_modes)) continue;
    const int cleared = idx & ~(1 << (n_modes - 1 - k));
    const int string_bits = idx >> (n_modes - k);  // modes 0 .. k-1
    const double sign = (std::popcount(static_cast<unsigned>(string_bits)) % 2) ? -1.0 : 1.0;
    a(cleared, idx) = sign;
  }
  return a;
}

}  // namespace

FockOperator::FockOperator(int n_modes, Eigen::MatrixXcd matrix)
    : n_modes_(n_modes), matrix_(std::move(matrix)) {
  check_mode_count(n_modes_);
  const int dim = fock_dim(n_modes_);
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw ArgumentError("FockOperator: matrix must be " + std::to_string(dim) + "x" +
                        std::to_string(dim) + " for " + std::to_string(n_modes_) + " modes");
}

FockState::FockState(int n_modes, Eigen::MatrixXcd rho) : n_modes_(n_modes), rho_(std::move(rho)) {
  check_mode_count(n_modes_);
  const int dim = fock_dim(n_modes_);
  if (rho_.rows() != dim || rho_.cols() != dim)
    throw ArgumentError("FockState: matrix must be " + std::to_string(dim) + "x" +
                        std::to_string(dim) + " for " + std::to_string(n_modes_) + " modes");
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw ValidationError("FockState: not Hermitian, residual " + std::to_string(herm));
  const double tr = std::abs(rho_.trace() - complex{1.0, 0.0});
  if (tr > 1e-12)
    throw ValidationError("FockState: trace differs from 1 by " + std::to_string(tr));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("FockState: eigensolver failed");
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-12)
    throw ValidationError("FockState: negative eigenvalue " + std::to_string(min_eig));
  // Parity superselection: no coherence between even and odd total occupation.
  double parity_violation = 0.0;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if ((std::popcount(static_cast<unsigned>(r)) + std::popcount(static_cast<unsigned>(c))) % 2)
        parity_violation = std::max(parity_violation, std::abs(rho_(r, c)));
  if (parity_violation > 1e-12)
    throw ValidationError("FockState: even-odd coherence " + std::to_string(parity_violation));
}

std::vector<FockOperator> majorana_ops(int n_modes) {
  check_mode_count(n_modes);
  std::vector<FockOperator> out;
  out.reserve(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const Eigen::MatrixXcd a = annihilator(k, n_modes);
    out.emplace_back(n_modes, a + a.adjoint());
    out.emplace_back(n_modes, kI * (a - a.adjoint()));
  }
  return out;
}

FockOperator hamiltonian(const ModeSystem& modes) {
  check_mode_count(modes.n_modes());
  const int dim = fock_dim(modes.n_modes());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) h(idx, idx) = bitstring_energy(idx, modes);
  return FockOperator(modes.n_modes(), std::move(h));
}

FockState basis_state(std::uint32_t index, int n_modes) {
  check_mode_count(n_modes);
  const int dim = fock_dim(n_modes);
  if (index >= static_cast<std::uint32_t>(dim))
    throw ArgumentError("basis_state: index " + std::to_string(index) + " out of range for " +
                        std::to_string(n_modes) + " modes");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(index, index) = 1.0;
  return FockState(n_modes, std::move(rho));
}

FockState thermal_state(const std::vector<double>& betas, const ModeSystem& modes) {
  const int n = modes.n_modes();
  check_mode_count(n);
  if (static_cast<int>(betas.size()) != n)
    throw ArgumentError("thermal_state: betas size " + std::to_string(betas.size()) +
                        " != n_modes " + std::to_string(n));
  std::vector<double> excited(n);
  for (int k = 0; k < n; ++k) {
    const double beta = betas[k];
    if (std::isnan(beta) || beta <= 0.0)
      throw ArgumentError("thermal_state: beta_" + std::to_string(k + 1) +
                          " must be positive (inf allowed)");
    if (std::isinf(beta)) {
      excited[k] = 0.0;
    } else {
      const double w = std::exp(-beta * modes.omega(k));
      excited[k] = w / (1.0 + w);
    }
  }
  const int dim = fock_dim(n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    double p = 1.0;
    for (int k = 0; k < n; ++k)
      p *= occupation(idx, k, n) ? excited[k] : 1.0 - excited[k];
    rho(idx, idx) = p;
  }
  return FockState(n, std::move(rho));
}

double energy(const FockState& state, const ModeSystem& modes) {
  if (state.n_modes() != modes.n_modes())
    throw ArgumentError("energy: mode count mismatch");
  double e = 0.0;
  for (int idx = 0; idx < state.dim(); ++idx)
    e += bitstring_energy(idx, modes) * state.matrix()(idx, idx).real();
  return e;
}

double ergotropy(const FockState& state, const ModeSystem& modes) {
  if (state.n_modes() != modes.n_modes())
    throw ArgumentError("ergotropy: mode count mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(state.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("ergotropy: eigensolver failed");
  std::vector<double> pops(es.eigenvalues().data(), es.eigenvalues().data() + state.dim());
  std::sort(pops.begin(), pops.end(), std::greater<>());
  std::vector<double> levels(state.dim());
  for (int idx = 0; idx < state.dim(); ++idx) levels[idx] = bitstring_energy(idx, modes);
  std::sort(levels.begin(), levels.end());
  double passive_energy = 0.0;
  for (int i = 0; i < state.dim(); ++i) passive_energy += pops[i] * levels[i];
  return energy(state, modes) - passive_energy;
}

bool is_passive(const FockState& state, const ModeSystem& modes, double tol) {
  if (ergotropy(state, modes) > tol) return false;
  const Eigen::MatrixXcd h = hamiltonian(modes).matrix();
  const double comm = (state.matrix() * h - h * state.matrix()).cwiseAbs().maxCoeff();
  return comm <= tol;
}

double free_energy(const FockState& state, const ModeSystem& modes, double temperature) {
  if (std::isnan(temperature) || temperature < 0.0)
    throw ArgumentError("free_energy: temperature must be nonnegative");
  if (temperature == 0.0) return energy(state, modes);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(state.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("free_energy: eigensolver failed");
  double entropy = 0.0;
  for (int i = 0; i < state.dim(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-15) entropy -= p * std::log(p);
  }
  return energy(state, modes) - temperature * entropy;
}

CovarianceMatrix density_to_cm(const FockState& state) {
  const int n = state.n_modes();
  const auto maj = majorana_ops(n);
  const int dim = 2 * n;
  // Gamma_kl = (i/2) <[c_k, c_l]> = -Im Tr(rho c_k c_l) for k != l.
  std::vector<Eigen::MatrixXcd> rho_c(dim);
  for (int k = 0; k < dim; ++k) rho_c[k] = state.matrix() * maj[k].matrix();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int l = k + 1; l < dim; ++l) {
      const complex m = rho_c[k].cwiseProduct(maj[l].matrix().transpose()).sum();
      g(k, l) = -m.imag();
      g(l, k) = m.imag();
    }
  return CovarianceMatrix(std::move(g));
}

FockState cm_to_density(const CovarianceMatrix& cm) {
  const int n = cm.n_modes();
  check_mode_count(n);
  const CanonicalForm cf = canonical_form(cm);
  const auto maj = majorana_ops(n);
  const int dim = fock_dim(n);
  // Rotated Majoranas ctilde_k = sum_l O_kl c_l, then
  // rho = 2^{-n} prod_j (1 + i m_j ctilde_{2j} ctilde_{2j+1}).
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd c_even = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd c_odd = Eigen::MatrixXcd::Zero(dim, dim);
    for (int l = 0; l < 2 * n; ++l) {
      c_even += cf.transform.matrix()(2 * j, l) * maj[l].matrix();
      c_odd += cf.transform.matrix()(2 * j + 1, l) * maj[l].matrix();
    }
    rho = rho * (Eigen::MatrixXcd::Identity(dim, dim) + kI * cf.values[j] * c_even * c_odd);
  }
  rho = 0.5 * (rho + rho.adjoint().eval());
  return FockState(n, std::move(rho));
}

FockOperator fock_gaussian_unitary(GaussianUnitaryKind kind, double angle, int n_modes,
                                   int mode_a, int mode_b) {
  check_mode_count(n_modes);
  if (!std::isfinite(angle)) throw ArgumentError("fock_gaussian_unitary: angle must be finite");
  if (mode_a < 0 || mode_a >= n_modes)
    throw ArgumentError("fock_gaussian_unitary: mode_a out of range");
  const bool two_mode = kind != GaussianUnitaryKind::rotation;
  if (two_mode) {
    if (mode_b < 0 || mode_b >= n_modes)
      throw ArgumentError("fock_gaussian_unitary: mode_b out of range");
    if (mode_b == mode_a)
      throw ArgumentError("fock_gaussian_unitary: modes must be distinct");
  }
  const Eigen::MatrixXcd a = annihilator(mode_a, n_modes);
  Eigen::MatrixXcd gen;
  switch (kind) {
    case GaussianUnitaryKind::rotation:
      gen = -kI * angle * (a.adjoint() * a);
      break;
    case GaussianUnitaryKind::squeeze: {
      const Eigen::MatrixXcd b = annihilator(mode_b, n_modes);
      gen = angle * (a * b - b.adjoint() * a.adjoint());
      break;
    }
    case GaussianUnitaryKind::beamsplit: {
      const Eigen::MatrixXcd b = annihilator(mode_b, n_modes);
      gen = angle * (a * b.adjoint() + a.adjoint() * b);
      break;
    }
  }
  return FockOperator(n_modes, gen.exp());
}

OrthogonalTransform extract_orthogonal_action(const FockOperator& u) {
  const int n = u.n_modes();
  const int dim = u.dim();
  const double unitary_residual =
      (u.matrix().adjoint() * u.matrix() - Eigen::MatrixXcd::Identity(dim, dim))
          .cwiseAbs()
          .maxCoeff();
  if (unitary_residual > 1e-10)
    throw ValidationError("extract_orthogonal_action: operator is not unitary, residual " +
                          std::to_string(unitary_residual));
  const auto maj = majorana_ops(n);
  Eigen::MatrixXd o(2 * n, 2 * n);
  double worst = 0.0;
  for (int k = 0; k < 2 * n; ++k) {
    const Eigen::MatrixXcd conj = u.matrix().adjoint() * maj[k].matrix() * u.matrix();
    Eigen::MatrixXcd residual = conj;
    for (int l = 0; l < 2 * n; ++l) {
      const complex coeff = conj.cwiseProduct(maj[l].matrix().transpose()).sum() /
                            static_cast<double>(dim);
      o(k, l) = coeff.real();
      residual -= o(k, l) * maj[l].matrix();
    }
    worst = std::max(worst, residual.cwiseAbs().maxCoeff());
  }
  if (worst > 1e-10)
    throw RepresentationError(
        "extract_orthogonal_action: conjugation leaves the Majorana span, residual " +
        std::to_string(worst));
  return OrthogonalTransform(std::move(o));
}

FockOperator activation_unitary_3mode() {
  const int dim = 8;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  // |010> has index 2, |101> index 5.
  u(2, 2) = u(5, 5) = 0.0;
  u(2, 5) = u(5, 2) = 1.0;
  return FockOperator(3, std::move(u));
}

double work_extracted(const FockState& state, const FockOperator& u, const ModeSystem& modes) {
  if (state.n_modes() != u.n_modes() || state.n_modes() != modes.n_modes())
    throw ArgumentError("work_extracted: mode count mismatch");
  const Eigen::MatrixXcd h = hamiltonian(modes).matrix();
  const Eigen::MatrixXcd rotated = u.matrix() * state.matrix() * u.matrix().adjoint();
  const complex before = (h * state.matrix()).trace();
  const complex after = (h * rotated).trace();
  return before.real() - after.real();
}

}  // namespace fermiwork
