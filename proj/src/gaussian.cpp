#include "fermiwork/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "fermiwork/errors.hpp"

namespace fermiwork {

namespace {

constexpr double kPatternTol = 1e-10;
constexpr double kZeroValue = 1e-10;

double fold_pi(double t) {
  const double pi = std::acos(-1.0);
  while (t < 0.0) t += pi;
  while (t >= pi) t -= pi;
  return t;
}

void check_pair(int n_modes, int mode_a, int mode_b) {
  if (mode_a < 0 || mode_a >= n_modes || mode_b < 0 || mode_b >= n_modes)
    throw ArgumentError("gaussian: mode index out of range");
  if (mode_a == mode_b) throw ArgumentError("gaussian: modes must be distinct");
}

/// Pairs signed block values with mode frequencies for minimal energy:
/// largest omega takes the largest signed value (rearrangement). Optionally
/// reports which block each mode receives.
double paired_energy(const std::vector<double>& signed_values, const ModeSystem& modes,
                     std::vector<int>* block_for_mode = nullptr) {
  const int n = static_cast<int>(signed_values.size());
  std::vector<int> mode_order(n), block_order(n);
  std::iota(mode_order.begin(), mode_order.end(), 0);
  std::iota(block_order.begin(), block_order.end(), 0);
  std::stable_sort(mode_order.begin(), mode_order.end(),
                   [&](int x, int y) { return modes.omega(x) > modes.omega(y); });
  std::stable_sort(block_order.begin(), block_order.end(),
                   [&](int x, int y) { return signed_values[x] > signed_values[y]; });
  if (block_for_mode) block_for_mode->assign(n, 0);
  double e = 0.0;
  for (int r = 0; r < n; ++r) {
    const int m = mode_order[r];
    const int b = block_order[r];
    e += 0.5 * modes.omega(m) * (1.0 - signed_values[b]);
    if (block_for_mode) (*block_for_mode)[m] = b;
  }
  return e;
}

struct Assignment {
  double energy;
  std::vector<double> signed_values;  // per canonical block, after any flip
  std::vector<int> block_for_mode;
};

/// Minimal paired energy over sign patterns with product pf (pf = 0 lifts the
/// constraint). Values are nonnegative, so the all-plus pattern is optimal
/// among even flip counts and a single flip is optimal among odd ones.
Assignment best_feasible_assignment(const std::vector<double>& values, int pf,
                                    const ModeSystem& modes) {
  Assignment best;
  best.signed_values = values;
  best.energy = paired_energy(best.signed_values, modes, &best.block_for_mode);
  if (pf >= 0) return best;
  bool have = false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::vector<double> d = values;
    d[k] = -d[k];
    std::vector<int> map;
    const double e = paired_energy(d, modes, &map);
    if (!have || e < best.energy) {
      best.energy = e;
      best.signed_values = std::move(d);
      best.block_for_mode = std::move(map);
      have = true;
    }
  }
  return best;
}

int pfaffian_constraint(const CanonicalForm& cf) {
  for (double v : cf.values)
    if (std::abs(v) < kZeroValue) return 0;
  return cf.det_sign;
}

void require_two_mode_pattern(const CovarianceMatrix& cm, const char* who) {
  if (cm.n_modes() != 2)
    throw ArgumentError(std::string(who) + ": exactly two modes required");
  const Eigen::MatrixXd& g = cm.matrix();
  if (std::abs(g(0, 2)) > kPatternTol || std::abs(g(1, 3)) > kPatternTol)
    throw ArgumentError(std::string(who) + ": matrix is not in standard form");
}

/// In-place G <- R G R^T for the Givens rotation of plane (i, j) by theta:
/// row_i <- c row_i - s row_j, row_j <- s row_i + c row_j, then columns.
void apply_plane(Eigen::MatrixXd& g, int i, int j, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const int dim = static_cast<int>(g.rows());
  for (int k = 0; k < dim; ++k) {
    const double gi = g(i, k), gj = g(j, k);
    g(i, k) = c * gi - s * gj;
    g(j, k) = s * gi + c * gj;
  }
  for (int k = 0; k < dim; ++k) {
    const double gi = g(k, i), gj = g(k, j);
    g(k, i) = c * gi - s * gj;
    g(k, j) = s * gi + c * gj;
  }
}

double block_energy(const Eigen::MatrixXd& g, const ModeSystem& modes) {
  double e = 0.0;
  for (int m = 0; m < modes.n_modes(); ++m)
    e += 0.5 * modes.omega(m) * (1.0 - g(2 * m, 2 * m + 1));
  return e;
}

}  // namespace

OrthogonalTransform rotation_matrix(int n_modes, int mode, double theta) {
  if (mode < 0 || mode >= n_modes) throw ArgumentError("rotation_matrix: mode out of range");
  Eigen::MatrixXd o = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double c = std::cos(theta), s = std::sin(theta);
  o(2 * mode, 2 * mode) = c;
  o(2 * mode, 2 * mode + 1) = -s;
  o(2 * mode + 1, 2 * mode) = s;
  o(2 * mode + 1, 2 * mode + 1) = c;
  return OrthogonalTransform(std::move(o));
}

OrthogonalTransform squeeze_matrix(int n_modes, int mode_a, int mode_b, double r) {
  check_pair(n_modes, mode_a, mode_b);
  Eigen::MatrixXd o = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double c = std::cos(r), s = std::sin(r);
  const int a = 2 * mode_a, b = 2 * mode_b;
  o(a, a) = c; o(a + 1, a + 1) = c;
  o(b, b) = c; o(b + 1, b + 1) = c;
  o(a, b) = s; o(a + 1, b + 1) = -s;      // sin r * sigma_z
  o(b, a) = -s; o(b + 1, a + 1) = s;      // -sin r * sigma_z
  return OrthogonalTransform(std::move(o));
}

OrthogonalTransform beamsplit_matrix(int n_modes, int mode_a, int mode_b, double phi) {
  check_pair(n_modes, mode_a, mode_b);
  Eigen::MatrixXd o = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double c = std::cos(phi), s = std::sin(phi);
  const int a = 2 * mode_a, b = 2 * mode_b;
  o(a, a) = c; o(a + 1, a + 1) = c;
  o(b, b) = c; o(b + 1, b + 1) = c;
  o(a, b) = s; o(a + 1, b + 1) = s;
  o(b, a) = -s; o(b + 1, a + 1) = -s;
  return OrthogonalTransform(std::move(o));
}

CovarianceMatrix apply(const OrthogonalTransform& o, const CovarianceMatrix& cm) {
  if (o.matrix().rows() != cm.matrix().rows())
    throw ArgumentError("apply: dimension mismatch");
  Eigen::MatrixXd g = o.matrix() * cm.matrix() * o.matrix().transpose();
  g = 0.5 * (g - g.transpose().eval());
  return CovarianceMatrix(std::move(g));
}

StageResult optimal_squeeze(const CovarianceMatrix& standard_form, const ModeSystem& modes) {
  require_two_mode_pattern(standard_form, "optimal_squeeze");
  if (modes.n_modes() != 2) throw ArgumentError("optimal_squeeze: two mode frequencies required");
  const Eigen::MatrixXd& g = standard_form.matrix();
  const double a = g(0, 1), b = g(2, 3), e1 = g(0, 3), e2 = g(1, 2);
  const double pi = std::acos(-1.0);
  // Stationary angles of (a+b) sin 2r + (e1+e2) cos 2r = 0; the energy is a
  // single harmonic in 2r, so these are the only extrema over [0, pi).
  double r0 = 0.0;
  if (std::abs(a + b) > 1e-15 || std::abs(e1 + e2) > 1e-15)
    r0 = 0.5 * std::atan2(-(e1 + e2), a + b);
  const double candidates[2] = {fold_pi(r0), fold_pi(r0 + pi / 2)};
  bool have = false;
  StageResult best{0.0, standard_form, 0.0};
  for (double r : candidates) {
    CovarianceMatrix out = apply(squeeze_matrix(2, 0, 1, r), standard_form);
    const double e = energy_cm(out, modes);
    if (!have || e < best.energy) {
      best = StageResult{r, std::move(out), e};
      have = true;
    }
  }
  return best;
}

StageResult optimal_beamsplit(const CovarianceMatrix& single_e_form, const ModeSystem& modes) {
  require_two_mode_pattern(single_e_form, "optimal_beamsplit");
  if (modes.n_modes() != 2)
    throw ArgumentError("optimal_beamsplit: two mode frequencies required");
  const Eigen::MatrixXd& g = single_e_form.matrix();
  if (std::abs(g(0, 3) + g(1, 2)) > kPatternTol)
    throw ArgumentError("optimal_beamsplit: correlations are not in the single-e pattern");
  const double a = g(0, 1), b = g(2, 3), e = g(0, 3);
  const double pi = std::acos(-1.0);
  // Stationary angles of (b - a) sin 2theta + 2 e cos 2theta = 0.
  double t0 = 0.0;
  if (std::abs(b - a) > 1e-15 || std::abs(e) > 1e-15)
    t0 = 0.5 * std::atan2(-2.0 * e, b - a);
  const double candidates[2] = {fold_pi(t0), fold_pi(t0 + pi / 2)};
  bool have = false;
  StageResult best{0.0, single_e_form, 0.0};
  for (double t : candidates) {
    CovarianceMatrix out = apply(beamsplit_matrix(2, 0, 1, t), single_e_form);
    const double en = energy_cm(out, modes);
    if (!have || en < best.energy) {
      best = StageResult{t, std::move(out), en};
      have = true;
    }
  }
  return best;
}

MinimizationTrace gaussian_minimize(const CovarianceMatrix& cm, const ModeSystem& modes) {
  const int n = cm.n_modes();
  if (modes.n_modes() != n) throw ArgumentError("gaussian_minimize: mode count mismatch");
  MinimizationTrace trace;
  const double input_energy = energy_cm(cm, modes);
  trace.stages.push_back(
      {"input", 0.0, OrthogonalTransform::identity(n), cm, input_energy});

  if (n == 2) {
    StandardForm sf = standard_form_two_mode(cm);
    const double sf_energy = energy_cm(sf.cm, modes);
    trace.stages.push_back({"standard_form", 0.0, sf.transform, sf.cm, sf_energy});
    StageResult sq = optimal_squeeze(sf.cm, modes);
    trace.stages.push_back(
        {"squeeze", sq.angle, squeeze_matrix(2, 0, 1, sq.angle), sq.cm, sq.energy});
    StageResult bs = optimal_beamsplit(sq.cm, modes);
    trace.stages.push_back(
        {"beamsplit", bs.angle, beamsplit_matrix(2, 0, 1, bs.angle), bs.cm, bs.energy});
    return trace;
  }

  const CanonicalForm cf = canonical_form(cm);
  const Assignment best = best_feasible_assignment(cf.values, pfaffian_constraint(cf), modes);
  const int dim = 2 * n;
  // Rows of q route canonical block b to mode j, with an in-block swap when
  // the assigned value is negative.
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    const int b = best.block_for_mode[j];
    if (best.signed_values[b] >= 0.0) {
      q(2 * j, 2 * b) = 1.0;
      q(2 * j + 1, 2 * b + 1) = 1.0;
    } else {
      q(2 * j, 2 * b + 1) = 1.0;
      q(2 * j + 1, 2 * b) = 1.0;
    }
  }
  Eigen::MatrixXd total = q * cf.transform.matrix();
  OrthogonalTransform o(std::move(total));
  if (o.det_sign() < 0) {
    // Only reachable with a vanishing block value; flipping it is free and
    // restores the proper (det +1) component.
    int fix = -1;
    for (int j = 0; j < n && fix < 0; ++j)
      if (std::abs(best.signed_values[best.block_for_mode[j]]) < kZeroValue) fix = j;
    if (fix < 0) throw NumericError("gaussian_minimize: no proper-parity realization found");
    q.row(2 * fix).swap(q.row(2 * fix + 1));
    o = OrthogonalTransform(q * cf.transform.matrix());
  }
  CovarianceMatrix out = apply(o, cm);
  const double out_energy = energy_cm(out, modes);
  if (out_energy <= input_energy) {
    trace.stages.push_back({"canonical_opt", 0.0, std::move(o), std::move(out), out_energy});
  } else {
    // Input already optimal; rounding made the transformed copy a hair worse.
    trace.stages.push_back(
        {"canonical_opt", 0.0, OrthogonalTransform::identity(n), cm, input_energy});
  }
  return trace;
}

double gaussian_ergotropy(const CovarianceMatrix& cm, const ModeSystem& modes) {
  if (modes.n_modes() != cm.n_modes())
    throw ArgumentError("gaussian_ergotropy: mode count mismatch");
  const CanonicalForm cf = canonical_form(cm);
  const Assignment best = best_feasible_assignment(cf.values, pfaffian_constraint(cf), modes);
  const double w = energy_cm(cm, modes) - best.energy;
  if (w < -1e-12)
    throw NumericError("gaussian_ergotropy: orbit minimum above the input energy");
  return w < 0.0 ? 0.0 : w;
}

bool is_gaussian_passive(const CovarianceMatrix& cm, const ModeSystem& modes, double tol) {
  return gaussian_ergotropy(cm, modes) <= tol;
}

double random_orthogonal_search(const CovarianceMatrix& cm, const ModeSystem& modes,
                                std::uint64_t trials, std::uint64_t seed) {
  if (modes.n_modes() != cm.n_modes())
    throw ArgumentError("random_orthogonal_search: mode count mismatch");
  const int dim = 2 * cm.n_modes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::acos(-1.0));

  std::vector<std::pair<int, int>> planes;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) planes.emplace_back(i, j);

  // Keep the few best sampled states (the input counts as a sample).
  constexpr std::size_t kKeep = 5;
  std::vector<std::pair<double, Eigen::MatrixXd>> best;
  auto offer = [&](double e, const Eigen::MatrixXd& g) {
    best.emplace_back(e, g);
    std::sort(best.begin(), best.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    if (best.size() > kKeep) best.pop_back();
  };
  offer(block_energy(cm.matrix(), modes), cm.matrix());
  for (std::uint64_t t = 0; t < trials; ++t) {
    Eigen::MatrixXd g = cm.matrix();
    for (const auto& [i, j] : planes) apply_plane(g, i, j, angle(rng));
    offer(block_energy(g, modes), g);
  }

  // Polish each kept state by cyclic exact line searches. Along one
  // cross-pair plane the energy is kappa + A cos t + B sin t (each read entry
  // moves linearly), so three samples pin the minimizer; in-pair planes leave
  // the energy invariant and are skipped. Equal-magnitude moves over the two
  // disjoint planes joining a mode pair make every read entry bilinear, so the
  // energy is kappa + A cos 2t + B sin 2t; these paired moves step straight
  // down the shallow valley left when two frequencies nearly coincide, where
  // the single-plane sweep stalls zigzagging.
  const double pi = std::acos(-1.0);
  double overall = best.front().first;
  for (auto& kept : best) {
    Eigen::MatrixXd& g = kept.second;
    double current = block_energy(g, modes);
    auto fit_step = [&](auto&& rotate, double period) {
      const double quarter = period / 4.0;
      const double ea = current;
      rotate(quarter);
      const double eb = block_energy(g, modes);
      rotate(quarter);
      const double ec = block_energy(g, modes);
      const double kappa = 0.5 * (ea + ec);
      const double ca = ea - kappa, cb = eb - kappa;
      const double amp = std::hypot(ca, cb);
      if (amp < 1e-18) {
        rotate(-2.0 * quarter);
        return;
      }
      const double t_star = std::atan2(-cb, -ca) * (period / (2.0 * pi));
      rotate(t_star - 2.0 * quarter);
      current = kappa - amp;
    };
    for (int pass = 0; pass < 500; ++pass) {
      const double before = current;
      for (const auto& [i, j] : planes) {
        if (i / 2 == j / 2) continue;
        fit_step([&](double d) { apply_plane(g, i, j, d); }, 2.0 * pi);
      }
      for (int p = 0; p + 1 < dim / 2; ++p)
        for (int q = p + 1; q < dim / 2; ++q)
          for (int family = 0; family < 4; ++family) {
            const bool swap = (family & 1) != 0;
            const int j1 = swap ? 2 * q + 1 : 2 * q;
            const int j2 = swap ? 2 * q : 2 * q + 1;
            const double sign = (family & 2) ? -1.0 : 1.0;
            fit_step(
                [&](double d) {
                  apply_plane(g, 2 * p, j1, d);
                  apply_plane(g, 2 * p + 1, j2, sign * d);
                },
                pi);
          }
      g = 0.5 * (g - g.transpose().eval());
      current = block_energy(g, modes);
      if (before - current < 1e-13) break;
    }
    overall = std::min(overall, current);
  }
  return overall;
}

}  // namespace fermiwork
