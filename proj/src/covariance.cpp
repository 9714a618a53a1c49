#include "fermiwork/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fermiwork {

namespace {

constexpr double kAntisymTol = 1e-12;
constexpr double kPhysicalSlack = 1e-10;
constexpr double kSweepTarget = 1e-12;
constexpr double kOffBlockTol = 1e-10;
constexpr int kMaxSweeps = 200;

Eigen::MatrixXd antisymmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m - m.transpose());
}

/// Orthogonal Q with Q S Q^T = blocks [[0, nu_j], [-nu_j, 0]], nu_j >= 0,
/// built from the eigenvectors of S S^T: each unit u with S S^T u = nu^2 u
/// pairs with w = -S u / nu, and u^T S w = nu. Kernel vectors pair among
/// themselves with value 0.
Eigen::MatrixXd antisym_canonical_rows(const Eigen::MatrixXd& s) {
  const int dim = static_cast<int>(s.rows());
  const Eigen::MatrixXd gram = s * s.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericError("canonical rows: eigensolver failed");

  Eigen::MatrixXd rows(dim, dim);
  int n_rows = 0;
  std::vector<Eigen::VectorXd> kernel;
  auto project_off = [&](Eigen::VectorXd v) {
    for (int r = 0; r < n_rows; ++r) v -= rows.row(r).dot(v) * rows.row(r).transpose();
    return v;
  };

  // Eigen orders eigenvalues ascending; walk them descending so large blocks
  // come out first.
  for (int i = dim - 1; i >= 0; --i) {
    Eigen::VectorXd v = project_off(es.eigenvectors().col(i));
    const double vn = v.norm();
    if (vn < 1e-8) continue;  // already covered by a partner vector
    v /= vn;
    const Eigen::VectorXd sv = s * v;
    const double nu = sv.norm();
    if (nu < 1e-13) {
      kernel.push_back(v);
      continue;
    }
    Eigen::VectorXd w = project_off(-sv / nu);
    const double wn = w.norm();
    if (wn < 0.5)
      throw NumericError("canonical rows: degenerate pairing");
    w /= wn;
    rows.row(n_rows++) = v.transpose();
    rows.row(n_rows++) = w.transpose();
  }
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    Eigen::VectorXd v = project_off(kernel[i]);
    const double vn = v.norm();
    if (vn < 1e-8) continue;
    rows.row(n_rows++) = v.transpose() / vn;
  }
  if (n_rows != dim)
    throw NumericError("canonical rows: basis incomplete");
  return rows;
}

double off_block_mass(const Eigen::MatrixXd& g) {
  double worst = 0.0;
  const int dim = static_cast<int>(g.rows());
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if (r / 2 != c / 2) worst = std::max(worst, std::abs(g(r, c)));
  return worst;
}

/// Folds an angle into (-pi/2, pi/2] so that exact zeros stay at 0.
double fold_half(double t) {
  const double pi = std::acos(-1.0);
  while (t > pi / 2) t -= pi;
  while (t <= -pi / 2) t += pi;
  return t;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd gamma) : m_(std::move(gamma)) {
  const CmDiagnostics d = diagnose_cm(m_);
  if (!d.square_even)
    throw ArgumentError("CovarianceMatrix: need a square real matrix of even dimension >= 2");
  if (!d.antisymmetric)
    throw ValidationError(
        "CovarianceMatrix: not antisymmetric, |(G + G^T)(" + std::to_string(d.violation_row) +
        "," + std::to_string(d.violation_col) + ")| = " +
        std::to_string(d.max_antisymmetry_violation));
  if (!d.physical)
    throw ValidationError("CovarianceMatrix: unphysical, max singular value = " +
                          std::to_string(d.max_singular_value));
}

CmDiagnostics diagnose_cm(const Eigen::MatrixXd& gamma) {
  CmDiagnostics d;
  const auto rows = gamma.rows();
  d.square_even = rows == gamma.cols() && rows >= 2 && rows % 2 == 0;
  if (!d.square_even) return d;
  const Eigen::MatrixXd sym = gamma + gamma.transpose();
  d.max_antisymmetry_violation = 0.0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < rows; ++c)
      if (std::abs(sym(r, c)) > d.max_antisymmetry_violation) {
        d.max_antisymmetry_violation = std::abs(sym(r, c));
        d.violation_row = r;
        d.violation_col = c;
      }
  d.antisymmetric = d.max_antisymmetry_violation < kAntisymTol;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gamma);
  d.max_singular_value = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  d.physical = d.antisymmetric && d.max_singular_value <= 1.0 + kPhysicalSlack;
  return d;
}

CovarianceMatrix validate(const Eigen::MatrixXd& gamma) { return CovarianceMatrix(gamma); }

CovarianceMatrix thermal_cm(const std::vector<double>& betas, const ModeSystem& modes) {
  const int n = modes.n_modes();
  if (static_cast<int>(betas.size()) != n)
    throw ArgumentError("thermal_cm: betas size " + std::to_string(betas.size()) +
                        " != n_modes " + std::to_string(n));
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double beta = betas[j];
    if (std::isnan(beta) || beta <= 0.0)
      throw ArgumentError("thermal_cm: beta_" + std::to_string(j + 1) +
                          " must be positive (inf allowed)");
    const double lambda =
        std::isinf(beta) ? 1.0 : std::tanh(beta * modes.omega(j) / 2.0);
    g(2 * j, 2 * j + 1) = lambda;
    g(2 * j + 1, 2 * j) = -lambda;
  }
  return CovarianceMatrix(std::move(g));
}

double energy_cm(const CovarianceMatrix& cm, const ModeSystem& modes) {
  if (modes.n_modes() != cm.n_modes())
    throw ArgumentError("energy_cm: mode count mismatch");
  double e = 0.0;
  for (int j = 0; j < cm.n_modes(); ++j)
    e += 0.5 * modes.omega(j) * (1.0 - cm.block_value(j));
  return e;
}

CanonicalForm canonical_form(const CovarianceMatrix& cm) {
  const int n = cm.n_modes();
  const int dim = 2 * n;
  Eigen::MatrixXd g = cm.matrix();
  Eigen::MatrixXd o = Eigen::MatrixXd::Identity(dim, dim);

  if (n >= 2) {
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      if (off_block_mass(g) < kSweepTarget) break;
      for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
          const double pair_mass =
              g.block<2, 2>(2 * p, 2 * q).cwiseAbs().maxCoeff();
          if (pair_mass <= 1e-14) continue;
          const int idx[4] = {2 * p, 2 * p + 1, 2 * q, 2 * q + 1};
          Eigen::MatrixXd s4(4, 4);
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) s4(r, c) = g(idx[r], idx[c]);
          const Eigen::MatrixXd q4 = antisym_canonical_rows(antisymmetrize(s4));
          Eigen::MatrixXd qfull = Eigen::MatrixXd::Identity(dim, dim);
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) qfull(idx[r], idx[c]) = q4(r, c);
          g = antisymmetrize(qfull * g * qfull.transpose());
          o = qfull * o;
        }
    }
    if (off_block_mass(g) > kOffBlockTol)
      throw NumericError("canonical_form: Jacobi sweeps did not converge");
  }

  std::vector<double> values(n);
  for (int j = 0; j < n; ++j) values[j] = g(2 * j, 2 * j + 1);
  // Normalize every block value to be nonnegative; an in-block row swap flips
  // the value and the determinant, which stays recorded in det_sign.
  for (int j = 0; j < n; ++j)
    if (values[j] < 0.0) {
      o.row(2 * j).swap(o.row(2 * j + 1));
      values[j] = -values[j];
    }
  // Sort blocks by value descending, ties by original block index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  Eigen::MatrixXd sorted_o(dim, dim);
  std::vector<double> sorted_values(n);
  for (int j = 0; j < n; ++j) {
    sorted_o.row(2 * j) = o.row(2 * order[j]);
    sorted_o.row(2 * j + 1) = o.row(2 * order[j] + 1);
    sorted_values[j] = values[order[j]];
  }

  OrthogonalTransform transform(std::move(sorted_o));
  // Reconstruction check: the returned pieces must reproduce the input.
  Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    recon(2 * j, 2 * j + 1) = sorted_values[j];
    recon(2 * j + 1, 2 * j) = -sorted_values[j];
  }
  const double residual =
      (transform.matrix() * cm.matrix() * transform.matrix().transpose() - recon)
          .cwiseAbs()
          .maxCoeff();
  if (residual > 1e-9)
    throw NumericError("canonical_form: reconstruction residual " + std::to_string(residual));
  for (double v : sorted_values)
    if (v > 1.0 + kPhysicalSlack)
      throw NumericError("canonical_form: block value exceeds 1: " + std::to_string(v));

  const int det = transform.det_sign();
  return CanonicalForm{std::move(transform), std::move(sorted_values), det};
}

int pfaffian_sign(const CovarianceMatrix& cm) {
  const CanonicalForm cf = canonical_form(cm);
  int sign = cf.det_sign;
  for (double v : cf.values) {
    if (std::abs(v) < 1e-10) return 0;
    if (v < 0.0) sign = -sign;
  }
  return sign;
}

StandardForm standard_form_two_mode(const CovarianceMatrix& cm) {
  if (cm.n_modes() != 2)
    throw ArgumentError("standard_form_two_mode: exactly two modes required");
  const Eigen::MatrixXd& g = cm.matrix();
  // Correlation block in the basis {I, J, sigma_z, sigma_x}: local rotations
  // turn the (I, J) part by phi_a - phi_b and the (sigma_z, sigma_x) part by
  // phi_a + phi_b, so the two diagonal components can be nulled independently.
  const double alpha = 0.5 * (g(0, 2) + g(1, 3));
  const double beta = 0.5 * (g(0, 3) - g(1, 2));
  const double gamma = 0.5 * (g(0, 2) - g(1, 3));
  const double delta = 0.5 * (g(0, 3) + g(1, 2));
  const double diff = (std::abs(alpha) < 1e-15 && std::abs(beta) < 1e-15)
                          ? 0.0
                          : fold_half(std::atan2(-alpha, beta));
  const double sum = (std::abs(gamma) < 1e-15 && std::abs(delta) < 1e-15)
                         ? 0.0
                         : fold_half(std::atan2(gamma, delta));
  const double phi_a = 0.5 * (sum + diff);
  const double phi_b = 0.5 * (sum - diff);

  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(4, 4);
  const double ca = std::cos(phi_a), sa = std::sin(phi_a);
  const double cb = std::cos(phi_b), sb = std::sin(phi_b);
  o(0, 0) = ca; o(0, 1) = -sa; o(1, 0) = sa; o(1, 1) = ca;
  o(2, 2) = cb; o(2, 3) = -sb; o(3, 2) = sb; o(3, 3) = cb;

  Eigen::MatrixXd gsf = antisymmetrize(o * g * o.transpose());
  if (std::abs(gsf(0, 2)) > 1e-10 || std::abs(gsf(1, 3)) > 1e-10)
    throw NumericError("standard_form_two_mode: pattern residual too large");
  gsf(0, 2) = gsf(2, 0) = 0.0;
  gsf(1, 3) = gsf(3, 1) = 0.0;

  CovarianceMatrix out(std::move(gsf));
  const double a = out.matrix()(0, 1);
  const double b = out.matrix()(2, 3);
  const double e1 = out.matrix()(0, 3);
  const double e2 = out.matrix()(1, 2);
  return StandardForm{OrthogonalTransform(std::move(o)), std::move(out), a, b, e1, e2};
}

bool is_pure(const CovarianceMatrix& cm, double tol) {
  const int dim = 2 * cm.n_modes();
  return (cm.matrix() * cm.matrix().transpose() - Eigen::MatrixXd::Identity(dim, dim))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

}  // namespace fermiwork
