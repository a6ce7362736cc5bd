#pragma once

// Symmetric positive systems for the Keldysh-type equation
//   (K(eta) u_eta)_eta + u_xixi + k u_xi = f
// on {0 <= eta <= R} with xi periodic. With w = (u_eta, u_xi) it becomes
//   A1 w_eta + A2 w_xi + B w = (f, 0),
//   A1 = diag(K, -1), A2 = [[0, 1], [1, 0]], B = [[K', k], [0, 0]],
// and multiplying by E = [[a, -cK], [c, a]] makes it symmetric positive for
// suitable (a, c), with boundary condition sigma w1 + tau w2 = 0 at eta = R.

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ehyp/error.hpp"
#include "ehyp/grid_field.hpp"

namespace ehyp {

using Mat2 = Eigen::Matrix2d;
using ScalarFn = std::function<double(double)>;

struct TypeChangeFn {
  ScalarFn K;
  ScalarFn dK;
  double R = 1.0;
  double eta_crit = 0.0;
  double nu0 = 0.0;  // min K' on the validation grid

  /// K = slope (eta - eta_crit).
  static TypeChangeFn linear(double eta_crit, double R = 1.0, double slope = 1.0) {
    return make([=](double e) { return slope * (e - eta_crit); }, [=](double) { return slope; }, R);
  }

  /// Validates K on [0, R] and locates its zero.
  static TypeChangeFn make(ScalarFn K, ScalarFn dK, double R = 1.0, std::size_t samples = 1001) {
    require(R > 0.0, ErrorKind::InvalidTypeChange, "interval length must be positive");
    require(samples >= 2, ErrorKind::InvalidArgument, "need at least two samples");
    TypeChangeFn t;
    t.K = std::move(K);
    t.dK = std::move(dK);
    t.R = R;
    t.nu0 = std::numeric_limits<double>::infinity();
    double prev = t.K(0.0);
    for (std::size_t s = 0; s < samples; ++s) {
      const double e = R * static_cast<double>(s) / static_cast<double>(samples - 1);
      const double d = t.dK(e);
      t.nu0 = std::min(t.nu0, d);
      const double v = t.K(e);
      require(v >= prev, ErrorKind::InvalidTypeChange, "K must increase on [0, R]");
      prev = v;
    }
    if (!(t.nu0 > 0.0)) fail(ErrorKind::InvalidTypeChange, "K' must stay above a positive constant on [0, R]");
    const double k0 = t.K(0.0), kr = t.K(R);
    if (!(k0 < 0.0 && kr > 0.0)) fail(ErrorKind::InvalidTypeChange, "K must change sign inside (0, R)");
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto [lo, hi] = boost::math::tools::toms748_solve(t.K, 0.0, R, k0, kr, tol, iters);
    t.eta_crit = 0.5 * (lo + hi);
    return t;
  }
};

struct FirstOrderSystem {
  TypeChangeFn K;
  double k = 1.0;

  Mat2 A1(double eta) const { return (Mat2() << K.K(eta), 0.0, 0.0, -1.0).finished(); }
  static Mat2 A2() { return (Mat2() << 0.0, 1.0, 1.0, 0.0).finished(); }
  Mat2 B(double eta) const { return (Mat2() << K.dK(eta), k, 0.0, 0.0).finished(); }
  Mat2 dA1(double eta) const { return (Mat2() << K.dK(eta), 0.0, 0.0, 0.0).finished(); }
};

inline FirstOrderSystem build_system(const TypeChangeFn& K, double k) {
  require(k != 0.0 && std::isfinite(k), ErrorKind::InvalidArgument, "k must be a nonzero constant");
  require(static_cast<bool>(K.K) && K.dK, ErrorKind::InvalidTypeChange, "K and K' must be given");
  // Re-validate: the caller may have built the struct by hand.
  TypeChangeFn checked = TypeChangeFn::make(K.K, K.dK, K.R);
  return {std::move(checked), k};
}

inline Mat2 multiplier_matrix(double a, double c, double K) { return (Mat2() << a, -c * K, c, a).finished(); }

/// Samples of [0, R]: the solver grid (n + 1 points) and a 4x audit grid.
inline std::vector<double> audit_samples(double R, std::size_t n) {
  std::vector<double> out;
  for (std::size_t m : {n, 4 * n})
    for (std::size_t s = 0; s <= m; ++s) out.push_back(R * static_cast<double>(s) / static_cast<double>(m));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct MultipliedSystem {
  const FirstOrderSystem* sys = nullptr;
  double a = 1.0;
  double c = 0.0;
  std::vector<double> eta;
  std::vector<double> det_E;
  double min_det_E = 0.0;
  double max_asymmetry = 0.0;  // max |X - X^T| over EA1, EA2

  Mat2 E(double e) const { return multiplier_matrix(a, c, sys->K.K(e)); }
  Mat2 EA1(double e) const { return E(e) * sys->A1(e); }
  Mat2 EA2(double e) const { return E(e) * FirstOrderSystem::A2(); }
  Mat2 EB(double e) const { return E(e) * sys->B(e); }
};

inline MultipliedSystem apply_multiplier(const FirstOrderSystem& sys, double a, double c, std::size_t samples = 100) {
  require(a > 0.0, ErrorKind::InvalidArgument, "a must be positive");
  MultipliedSystem ms;
  ms.sys = &sys;
  ms.a = a;
  ms.c = c;
  ms.eta = audit_samples(sys.K.R, samples);
  ms.min_det_E = std::numeric_limits<double>::infinity();
  for (double e : ms.eta) {
    const double d = ms.E(e).determinant();
    ms.det_E.push_back(d);
    ms.min_det_E = std::min(ms.min_det_E, d);
    for (const Mat2& x : {ms.EA1(e), ms.EA2(e)})
      ms.max_asymmetry = std::max(ms.max_asymmetry, (x - x.transpose()).cwiseAbs().maxCoeff());
  }
  if (!(ms.min_det_E > 0.0)) fail(ErrorKind::SingularMultiplier, "det E = a^2 + c^2 K is not positive on [0, R]");
  require(ms.max_asymmetry <= 1e-12, ErrorKind::SingularMultiplier, "E A1 or E A2 is not symmetric");
  return ms;
}

struct KappaReport {
  std::vector<double> eta;
  std::vector<double> min_eig;
  std::vector<double> max_eig;
  std::vector<double> delta;  // (ak/2)(cK' - ak/2)
  Mat2 kappa_star_at_first;   // at eta = 0
  double kappa_min_eig = 0.0;
  double kappa_max_eig = 0.0;
  double max_det_mismatch = 0.0;
  bool positive_definite = false;
};

/// kappa = EB - (1/2)[(EA1)_eta + (EA2)_xi]; E does not depend on xi, so the
/// last term vanishes.
inline Mat2 kappa_star_at(const MultipliedSystem& ms, double eta) {
  const Mat2 dE = (Mat2() << 0.0, -ms.c * ms.sys->K.dK(eta), 0.0, 0.0).finished();
  const Mat2 dEA1 = dE * ms.sys->A1(eta) + ms.E(eta) * ms.sys->dA1(eta);
  const Mat2 kappa = ms.EB(eta) - 0.5 * dEA1;
  return 0.5 * (kappa + kappa.transpose());
}

inline KappaReport kappa_star(const MultipliedSystem& ms) {
  KappaReport rep;
  rep.eta = ms.eta;
  rep.kappa_min_eig = std::numeric_limits<double>::infinity();
  rep.kappa_max_eig = -std::numeric_limits<double>::infinity();
  const double a = ms.a, c = ms.c, k = ms.sys->k;
  for (double e : ms.eta) {
    const Mat2 ks = kappa_star_at(ms, e);
    if (rep.min_eig.empty()) rep.kappa_star_at_first = ks;
    const Eigen::SelfAdjointEigenSolver<Mat2> es(ks);
    rep.min_eig.push_back(es.eigenvalues()[0]);
    rep.max_eig.push_back(es.eigenvalues()[1]);
    rep.kappa_min_eig = std::min(rep.kappa_min_eig, es.eigenvalues()[0]);
    rep.kappa_max_eig = std::max(rep.kappa_max_eig, es.eigenvalues()[1]);
    const double delta = 0.5 * a * k * (c * ms.sys->K.dK(e) - 0.5 * a * k);
    rep.delta.push_back(delta);
    rep.max_det_mismatch = std::max(rep.max_det_mismatch, std::abs(ks.determinant() - delta));
  }
  require(rep.max_det_mismatch <= 1e-12, ErrorKind::SolverBreakdown, "det kappa* disagrees with the closed form");
  rep.positive_definite = rep.kappa_min_eig > 0.0;
  return rep;
}

inline KappaReport kappa_star(const FirstOrderSystem& sys, double a, double c, std::size_t samples = 100) {
  return kappa_star(apply_multiplier(sys, a, c, samples));
}

// ---------------------------------------------------------------------------
// Boundary admissibility at eta = R.

struct BoundaryMatrices {
  Mat2 beta, beta_minus, beta_plus, mu, mu_star;
};

/// beta and its splitting at one boundary point, as written in the
/// admissibility argument; beta_plus = beta - beta_minus, mu = beta_plus -
/// beta_minus.
inline BoundaryMatrices boundary_matrices(double sigma, double tau, double a, double c, double K_at_R) {
  const double ki = 1.0 / K_at_R;
  const double n = sigma * sigma + tau * tau;
  BoundaryMatrices b;
  b.beta << a, c, c, -a * ki;
  b.beta_minus << sigma * tau * c + sigma * sigma * a, tau * tau * c + sigma * tau * a,
      -sigma * tau * a * ki + sigma * sigma * c, -tau * tau * a * ki + sigma * tau * c;
  b.beta_minus /= n;
  b.beta_plus = b.beta - b.beta_minus;
  b.mu = b.beta_plus - b.beta_minus;
  b.mu_star = 0.5 * (b.mu + b.mu.transpose());
  return b;
}

struct BoundaryReport {
  std::vector<double> xi;
  std::vector<double> mu_min_eig;
  Eigen::Vector2d mu_eigs_first = Eigen::Vector2d::Zero();  // at the first xi sample
  double mu_min = 0.0;
  double mu_max = 0.0;
  double beta_minus_defect = 0.0;   // max |beta_minus w| over w with sigma w1 + tau w2 = 0
  double mu_consistency = 0.0;      // max |mu - (2 beta_plus - beta)|
  bool mu_nonnegative = false;
  bool kills_boundary_data = false;
  bool ranges_trivial = false;
  bool null_spaces_span = false;
  bool admissible = false;
  std::string first_failure;
};

inline void check_boundary_signs(const ScalarFn& sigma, const ScalarFn& tau, double k, std::size_t samples) {
  require(static_cast<bool>(sigma) && tau, ErrorKind::InvalidArgument, "sigma and tau must be given");
  int sign = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
    const double p = sigma(xi) * tau(xi);
    const int sg = p > 0.0 ? 1 : (p < 0.0 ? -1 : 0);
    require(sg != 0 && (sign == 0 || sg == sign), ErrorKind::InvalidArgument,
            "sigma tau must keep one strict sign around the circle");
    sign = sg;
  }
  require((sign > 0) != (k > 0.0), ErrorKind::InvalidArgument, "sigma tau must have the sign opposite to k");
}

/// Non-throwing evaluation of every boundary check. xi is sampled uniformly.
inline BoundaryReport assess_boundary(const ScalarFn& sigma, const ScalarFn& tau, double a, double c, double K_at_R,
                                      std::size_t samples = 64) {
  require(K_at_R != 0.0, ErrorKind::InvalidArgument, "K(R) must be nonzero");
  BoundaryReport rep;
  rep.mu_min = std::numeric_limits<double>::infinity();
  rep.mu_max = -std::numeric_limits<double>::infinity();
  rep.ranges_trivial = true;
  rep.null_spaces_span = true;
  constexpr double kTol = 1e-12;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  auto rnd = [&]() {
    seed ^= seed << 13;
    seed ^= seed >> 7;
    seed ^= seed << 17;
    return static_cast<double>(seed >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
    const double sg = sigma(xi), tu = tau(xi);
    const BoundaryMatrices b = boundary_matrices(sg, tu, a, c, K_at_R);
    const Eigen::SelfAdjointEigenSolver<Mat2> es(b.mu_star);
    rep.xi.push_back(xi);
    rep.mu_min_eig.push_back(es.eigenvalues()[0]);
    if (s == 0) rep.mu_eigs_first = es.eigenvalues();
    rep.mu_min = std::min(rep.mu_min, es.eigenvalues()[0]);
    rep.mu_max = std::max(rep.mu_max, es.eigenvalues()[1]);
    rep.mu_consistency = std::max(rep.mu_consistency, (b.mu - (2.0 * b.beta_plus - b.beta)).cwiseAbs().maxCoeff());

    const double scale = std::max(1.0, b.beta.cwiseAbs().maxCoeff());
    for (int t = 0; t < 4; ++t) {
      const double w1 = rnd();
      const Eigen::Vector2d w(w1, -(sg / tu) * w1);
      rep.beta_minus_defect = std::max(rep.beta_minus_defect, (b.beta_minus * w).cwiseAbs().maxCoeff() / scale);
    }

    // Ranges: each of beta_-, beta_+ has rank one; a trivial intersection
    // means their column spaces are independent.
    const Eigen::JacobiSVD<Mat2> sm(b.beta_minus, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::JacobiSVD<Mat2> sp(b.beta_plus, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto rank = [&](const Eigen::JacobiSVD<Mat2>& sv) {
      return (sv.singularValues().array() > kTol * scale).count();
    };
    const auto rm = rank(sm), rp = rank(sp);
    if (rm + rp > 2) {
      rep.ranges_trivial = false;
    } else if (rm == 1 && rp == 1) {
      Mat2 cols;
      cols << sm.matrixU().col(0), sp.matrixU().col(0);
      if (std::abs(cols.determinant()) <= 1e-10) rep.ranges_trivial = false;
    }
    // Null spaces: the last right singular vectors of rank-one matrices.
    if (rm == 2 || rp == 2) {
      // A full-rank part has a zero null space; the other must then be zero.
      if (rm + rp < 4 && (rm == 0 || rp == 0)) {
        // trivially spans
      } else {
        rep.null_spaces_span = false;
      }
    } else if (rm == 1 && rp == 1) {
      Mat2 cols;
      cols << sm.matrixV().col(1), sp.matrixV().col(1);
      if (std::abs(cols.determinant()) <= 1e-10) rep.null_spaces_span = false;
    }
  }
  rep.mu_nonnegative = rep.mu_min >= -1e-12;
  rep.kills_boundary_data = rep.beta_minus_defect <= 1e-12;
  if (!rep.mu_nonnegative) {
    rep.first_failure = "mu* is not positive semidefinite";
  } else if (!rep.kills_boundary_data) {
    rep.first_failure = "beta_- does not annihilate the boundary data";
  } else if (!rep.ranges_trivial) {
    rep.first_failure = "ranges of beta_+ and beta_- intersect";
  } else if (!rep.null_spaces_span) {
    rep.first_failure = "null spaces of beta_+ and beta_- do not span";
  }
  rep.admissible = rep.first_failure.empty();
  return rep;
}

/// Checks the sign rule for (sigma, tau, k), then every boundary condition;
/// throws InadmissibleBoundary naming the first failure.
inline BoundaryReport boundary_admissibility(const ScalarFn& sigma, const ScalarFn& tau, double a, double c,
                                             double K_at_R, double k, std::size_t samples = 64) {
  check_boundary_signs(sigma, tau, k, samples);
  BoundaryReport rep = assess_boundary(sigma, tau, a, c, K_at_R, samples);
  if (!rep.admissible) fail(ErrorKind::InadmissibleBoundary, rep.first_failure);
  return rep;
}

struct AdmissibilityReport {
  double a = 1.0;
  double c = 0.0;
  double min_det_E = 0.0;
  std::optional<KappaReport> kappa;
  std::optional<BoundaryReport> boundary;
  bool admissible = false;
  std::optional<ErrorKind> failure_kind;
  std::string failure;
};

/// Runs the whole chain: multiplier, boundary, positivity of kappa*. Every
/// check that can run is reported; failure names the first one that failed.
inline AdmissibilityReport verify_symmetric_positive(const FirstOrderSystem& sys, double a, double c,
                                                     const ScalarFn& sigma, const ScalarFn& tau,
                                                     std::size_t samples = 100) {
  AdmissibilityReport rep;
  rep.a = a;
  rep.c = c;
  check_boundary_signs(sigma, tau, sys.k, samples);
  MultipliedSystem ms;
  try {
    ms = apply_multiplier(sys, a, c, samples);
    rep.min_det_E = ms.min_det_E;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMultiplier) throw;
    rep.min_det_E = std::numeric_limits<double>::quiet_NaN();
    for (double s : audit_samples(sys.K.R, samples))
      rep.min_det_E = std::isnan(rep.min_det_E) ? a * a + c * c * sys.K.K(s)
                                                 : std::min(rep.min_det_E, a * a + c * c * sys.K.K(s));
    rep.failure_kind = ErrorKind::SingularMultiplier;
    rep.failure = e.what();
    return rep;
  }
  rep.boundary = assess_boundary(sigma, tau, a, c, sys.K.K(sys.K.R), samples);
  rep.kappa = kappa_star(ms);
  if (!rep.boundary->admissible) {
    rep.failure_kind = ErrorKind::InadmissibleBoundary;
    rep.failure = rep.boundary->first_failure;
  } else if (!rep.kappa->positive_definite) {
    rep.failure = "kappa* is not positive definite";
  }
  rep.admissible = rep.failure.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Parameter search.

struct MultiplierChoice {
  double a = 1.0;
  double c = 0.0;
  // Feasible |c| interval: lower end from kappa* and mu*, upper from det E.
  double c_lower = 0.0;
  double c_upper = 0.0;
  double min_det_E = 0.0;
};

/// a = 1; |c| is bracketed by bisection. det E decreases in |c| while
/// Delta and the diagonal of mu* grow with it, so each predicate is monotone.
inline MultiplierChoice choose_parameters(const TypeChangeFn& K, double k, const ScalarFn& sigma, const ScalarFn& tau,
                                          std::size_t samples = 100) {
  const FirstOrderSystem sys = build_system(K, k);
  check_boundary_signs(sigma, tau, k, samples);
  const double a = 1.0;
  const double sgn = k > 0.0 ? 1.0 : -1.0;
  const std::vector<double> eta = audit_samples(K.R, samples);
  const double kr = K.K(K.R);

  auto lower_ok = [&](double m) {
    const double c = sgn * m;
    for (double e : eta)
      if (!(0.5 * a * k * (c * K.dK(e) - 0.5 * a * k) > 0.0 && a * K.dK(e) > 0.0)) return false;
    return assess_boundary(sigma, tau, a, c, kr, samples).admissible;
  };
  auto upper_ok = [&](double m) {
    for (double e : eta)
      if (!(a * a + m * m * K.K(e) > 0.0)) return false;
    return true;
  };
  constexpr double kBig = 1e6;
  std::string binding;
  if (!lower_ok(kBig)) binding = "kappa* or mu* positivity cannot be reached for any |c|";
  if (!upper_ok(0.0)) binding += binding.empty() ? "det E > 0 fails even at c = 0" : "; det E > 0 fails at c = 0";
  if (!binding.empty()) fail(ErrorKind::Infeasible, binding);

  double lo = 0.0, hi = kBig;  // lower_ok(hi) holds
  if (lower_ok(lo)) hi = lo;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (lower_ok(mid) ? hi : lo) = mid;
  }
  const double c_lower = hi;

  double ulo = 0.0, uhi = kBig;  // upper_ok(ulo) holds
  if (upper_ok(uhi)) ulo = uhi;
  for (int it = 0; it < 200 && uhi - ulo > 1e-13 * std::max(1.0, uhi); ++it) {
    const double mid = 0.5 * (ulo + uhi);
    (upper_ok(mid) ? ulo : uhi) = mid;
  }
  const double c_upper = ulo;

  if (!(c_lower < c_upper)) {
    fail(ErrorKind::Infeasible, "binding constraints: kappa*/mu* need |c| >= " + std::to_string(c_lower) +
                                    ", det E > 0 needs |c| <= " + std::to_string(c_upper));
  }
  MultiplierChoice ch;
  ch.a = a;
  ch.c = sgn * 0.5 * (c_lower + c_upper);
  ch.c_lower = c_lower;
  ch.c_upper = c_upper;
  ch.min_det_E = apply_multiplier(sys, a, ch.c, samples).min_det_E;
  return ch;
}

// ---------------------------------------------------------------------------
// Strong solver: first-order-system least squares on a staggered grid.
//
// w1 lives at (eta_{i+1/2}, xi_j), w2 at (eta_i, xi_{j+1/2}); the first row
// of the system sits at nodes (eta_i, xi_j) and the curl row at cell corners
// (eta_{i+1/2}, xi_{j+1/2}). One-sided closures at eta = 0 and eta = R; the
// boundary condition enters as a penalty row at each xi_j on eta = R.

struct StrongGrid {
  std::size_t n_eta = 32;
  std::size_t n_xi = 32;
};

enum class StrongMethod { Direct, Iterative };

struct StrongOptions {
  StrongMethod method = StrongMethod::Direct;
  double tolerance = 1e-12;  // iterative only
  std::size_t max_iterations = 0;  // 0: library default
  std::optional<Eigen::VectorXd> initial_guess;
  // Right-hand side of sigma w1 + tau w2 = g at eta = R; zero when empty.
  std::function<double(double xi)> boundary_rhs;
  double pivot_tol = 1e-14;
};

struct DiscreteSolution {
  // (w1, w2) at nodes (eta_i, xi_j), i = 0..n_eta, j = 0..n_xi - 1; chart x is
  // eta, y is xi, periodic.
  GridField w;
  Eigen::VectorXd staggered;  // raw unknowns: w1 block, then w2 block
  std::size_t n_eta = 0;
  std::size_t n_xi = 0;
  double h_eta = 0.0;
  double h_xi = 0.0;
  double h = 0.0;
  double interior_residual = 0.0;  // discrete L2 norm of the interior rows
  double boundary_defect = 0.0;    // max |sigma w1 + tau w2 - g| at eta = R
  std::size_t iterations = 0;

  double w1_half(std::size_t i, std::size_t j) const { return staggered[static_cast<Eigen::Index>(i * n_xi + j)]; }
  double w2_half(std::size_t i, std::size_t j) const {
    return staggered[static_cast<Eigen::Index>(n_eta * n_xi + i * n_xi + j)];
  }
};

struct StrongSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::Index interior_rows = 0;
  std::vector<double> sigma, tau, g;
};

/// Assembles the least-squares rows of the staggered scheme.
inline StrongSystem assemble_strong(const FirstOrderSystem& sys,
                                    const std::function<double(double eta, double xi)>& f, const ScalarFn& sigma,
                                    const ScalarFn& tau, const StrongGrid& grid, const StrongOptions& opt) {
  require(grid.n_eta >= 3 && grid.n_xi >= 3, ErrorKind::InvalidArgument, "strong grid needs at least 3x3 cells");
  require(static_cast<bool>(f) && sigma && tau, ErrorKind::InvalidArgument, "f, sigma and tau must be given");
  const std::size_t N = grid.n_eta, M = grid.n_xi;
  const double R = sys.K.R;
  const double he = R / static_cast<double>(N);
  const double hx = 2.0 * std::numbers::pi / static_cast<double>(M);
  const double k = sys.k;

  const auto nw1 = static_cast<Eigen::Index>(N * M);
  const auto nunk = static_cast<Eigen::Index>(N * M + (N + 1) * M);
  auto W1 = [&](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * M + (j % M)); };
  auto W2 = [&](std::size_t i, std::size_t j) { return nw1 + static_cast<Eigen::Index>(i * M + (j % M)); };
  auto eta_half = [&](std::size_t i) { return (static_cast<double>(i) + 0.5) * he; };

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> rhs;
  Eigen::Index row = 0;
  const Eigen::Index interior_rows = static_cast<Eigen::Index>((N + 1) * M + N * M);

  // First row at nodes: (K w1)_eta + (w2)_xi + k w2 = f.
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = 0; j < M; ++j, ++row) {
      auto flux = [&](std::size_t ih, double wgt) {
        trip.emplace_back(row, W1(ih, j), wgt * sys.K.K(eta_half(ih)) / he);
      };
      if (i == 0) {
        flux(0, -2.0);
        flux(1, 3.0);
        flux(2, -1.0);
      } else if (i == N) {
        flux(N - 1, 2.0);
        flux(N - 2, -3.0);
        flux(N - 3, 1.0);
      } else {
        flux(i, 1.0);
        flux(i - 1, -1.0);
      }
      const std::size_t jm = (j + M - 1) % M;
      trip.emplace_back(row, W2(i, j), 1.0 / hx + 0.5 * k);
      trip.emplace_back(row, W2(i, jm), -1.0 / hx + 0.5 * k);
      rhs.push_back(f(static_cast<double>(i) * he, static_cast<double>(j) * hx));
    }
  }
  // Curl row at corners: (w1)_xi - (w2)_eta = 0.
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < M; ++j, ++row) {
      trip.emplace_back(row, W1(i, j + 1), 1.0 / hx);
      trip.emplace_back(row, W1(i, j), -1.0 / hx);
      trip.emplace_back(row, W2(i + 1, j), -1.0 / he);
      trip.emplace_back(row, W2(i, j), 1.0 / he);
      rhs.push_back(0.0);
    }
  }
  // Regularity on the parabolic line: for bounded w1 the flux K w1 vanishes
  // at eta_crit. Without these rows the discrete system admits the
  // xi-independent mode K w1 = const, which is the unbounded 1/(eta - eta_crit)
  // solution of the continuum problem.
  {
    const double s = std::clamp(sys.K.eta_crit / he - 0.5, 0.0, static_cast<double>(N - 1));
    const std::size_t il = std::min(static_cast<std::size_t>(s), N - 2);
    const double u = s - static_cast<double>(il);
    for (std::size_t j = 0; j < M; ++j, ++row) {
      trip.emplace_back(row, W1(il, j), (1.0 - u) * sys.K.K(eta_half(il)) / he);
      trip.emplace_back(row, W1(il + 1, j), u * sys.K.K(eta_half(il + 1)) / he);
      rhs.push_back(0.0);
    }
  }
  // Boundary penalty at eta = R, weighted like the interior rows.
  const double pw = 1.0 / he;
  std::vector<double> sig(M), ta(M), gval(M);
  for (std::size_t j = 0; j < M; ++j, ++row) {
    const double xi = static_cast<double>(j) * hx;
    sig[j] = sigma(xi);
    ta[j] = tau(xi);
    gval[j] = opt.boundary_rhs ? opt.boundary_rhs(xi) : 0.0;
    trip.emplace_back(row, W1(N - 1, j), pw * sig[j] * 15.0 / 8.0);
    trip.emplace_back(row, W1(N - 2, j), pw * sig[j] * -10.0 / 8.0);
    trip.emplace_back(row, W1(N - 3, j), pw * sig[j] * 3.0 / 8.0);
    trip.emplace_back(row, W2(N, j), pw * ta[j] * 0.5);
    trip.emplace_back(row, W2(N, (j + M - 1) % M), pw * ta[j] * 0.5);
    rhs.push_back(pw * gval[j]);
  }

  StrongSystem out;
  out.A.resize(row, nunk);
  out.A.setFromTriplets(trip.begin(), trip.end());
  out.b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  out.interior_rows = interior_rows;
  out.sigma = std::move(sig);
  out.tau = std::move(ta);
  out.g = std::move(gval);
  return out;
}


inline DiscreteSolution solve_strong(const FirstOrderSystem& sys, const MultiplierChoice& choice,
                                     const std::function<double(double eta, double xi)>& f, const ScalarFn& sigma,
                                     const ScalarFn& tau, const StrongGrid& grid = {},
                                     const StrongOptions& opt = {}) {
  (void)choice;  // the least-squares functional is unweighted; see README
  StrongSystem ss = assemble_strong(sys, f, sigma, tau, grid, opt);
  const Eigen::SparseMatrix<double>& A = ss.A;
  const Eigen::VectorXd& b = ss.b;
  const std::size_t N = grid.n_eta, M = grid.n_xi;
  const double he = sys.K.R / static_cast<double>(N);
  const double hx = 2.0 * std::numbers::pi / static_cast<double>(M);
  const auto nunk = A.cols();
  const auto& sig = ss.sigma;
  const auto& ta = ss.tau;
  const auto& gval = ss.g;
  const Eigen::Index interior_rows = ss.interior_rows;
  DiscreteSolution sol;
  sol.n_eta = N;
  sol.n_xi = M;
  sol.h_eta = he;
  sol.h_xi = hx;
  sol.h = std::max(he, hx);
  if (opt.method == StrongMethod::Direct) {
    const Eigen::SparseMatrix<double> AtA = A.transpose() * A;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(AtA);
    if (ldlt.info() != Eigen::Success) fail(ErrorKind::SolverBreakdown, "normal equations could not be factored");
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    if (!(d.minCoeff() > opt.pivot_tol * d.maxCoeff()))
      fail(ErrorKind::SolverBreakdown, "normal equations are rank deficient");
    sol.staggered = ldlt.solve(A.transpose() * b);
    if (ldlt.info() != Eigen::Success || !sol.staggered.allFinite())
      fail(ErrorKind::SolverBreakdown, "normal-equation solve failed");
  } else {
    Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> lscg;
    lscg.setTolerance(opt.tolerance);
    if (opt.max_iterations > 0) lscg.setMaxIterations(static_cast<Eigen::Index>(opt.max_iterations));
    lscg.compute(A);
    if (opt.initial_guess) {
      require(opt.initial_guess->size() == nunk, ErrorKind::InvalidArgument, "initial guess has the wrong size");
      sol.staggered = lscg.solveWithGuess(b, *opt.initial_guess);
    } else {
      sol.staggered = lscg.solve(b);
    }
    sol.iterations = static_cast<std::size_t>(lscg.iterations());
    if (lscg.info() != Eigen::Success) fail(ErrorKind::SolverBreakdown, "least-squares iteration did not converge");
  }

  const Eigen::VectorXd res = A * sol.staggered - b;
  sol.interior_residual = res.head(interior_rows).norm() * std::sqrt(he * hx);

  sol.w = GridField(Chart::Cartesian, 0.0, 0.0, he, hx, N + 1, M, 2);
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      double w1;
      if (i == 0) {
        w1 = (15.0 * sol.w1_half(0, j) - 10.0 * sol.w1_half(1, j) + 3.0 * sol.w1_half(2, j)) / 8.0;
      } else if (i == N) {
        w1 = (15.0 * sol.w1_half(N - 1, j) - 10.0 * sol.w1_half(N - 2, j) + 3.0 * sol.w1_half(N - 3, j)) / 8.0;
      } else {
        w1 = 0.5 * (sol.w1_half(i - 1, j) + sol.w1_half(i, j));
      }
      sol.w.at(i, j, 0) = w1;
      sol.w.at(i, j, 1) = 0.5 * (sol.w2_half(i, j) + sol.w2_half(i, (j + M - 1) % M));
    }
  }
  for (std::size_t j = 0; j < M; ++j)
    sol.boundary_defect =
        std::max(sol.boundary_defect, std::abs(sig[j] * sol.w.at(N, j, 0) + ta[j] * sol.w.at(N, j, 1) - gval[j]));
  return sol;
}

/// Discrete L2 distance of the staggered unknowns from exact (w1, w2).
inline double strong_error_l2(const DiscreteSolution& sol, const std::function<double(double, double)>& w1,
                              const std::function<double(double, double)>& w2) {
  double s = 0.0;
  for (std::size_t i = 0; i < sol.n_eta; ++i)
    for (std::size_t j = 0; j < sol.n_xi; ++j) {
      const double e = sol.w1_half(i, j) - w1((static_cast<double>(i) + 0.5) * sol.h_eta, static_cast<double>(j) * sol.h_xi);
      s += e * e;
    }
  for (std::size_t i = 0; i <= sol.n_eta; ++i)
    for (std::size_t j = 0; j < sol.n_xi; ++j) {
      const double e = sol.w2_half(i, j) - w2(static_cast<double>(i) * sol.h_eta, (static_cast<double>(j) + 0.5) * sol.h_xi);
      s += e * e;
    }
  return std::sqrt(s * sol.h_eta * sol.h_xi);
}

/// f = K' u_eta + K u_etaeta + u_xixi + k u_xi, pointwise over samples.
inline std::vector<double> manufactured_rhs(const std::vector<double>& eta, const std::vector<double>& u_eta,
                                            const std::vector<double>& u_etaeta, const std::vector<double>& u_xixi,
                                            const std::vector<double>& u_xi, const TypeChangeFn& K, double k) {
  const std::size_t n = eta.size();
  require(u_eta.size() == n && u_etaeta.size() == n && u_xixi.size() == n && u_xi.size() == n,
          ErrorKind::InvalidArgument, "sample arrays must have equal length");
  std::vector<double> f(n);
  for (std::size_t s = 0; s < n; ++s)
    f[s] = K.dK(eta[s]) * u_eta[s] + K.K(eta[s]) * u_etaeta[s] + u_xixi[s] + k * u_xi[s];
  return f;
}

}  // namespace ehyp
