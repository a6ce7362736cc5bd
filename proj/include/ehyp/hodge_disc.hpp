#pragma once

// The projective-disc Hodge equation in polar form
//   L phi = r^2 (1 - r^2) phi_rr + phi_thth + r (1 - 2 r^2) phi_r
// on the Cartesian (r, theta)-plane, the multiplier identity behind its
// uniqueness argument, and an open boundary-value solver on lens domains.
//
// Two exact rewritings drive the solver:
//   r < 1:  L phi = s (s phi_r)_r + phi_thth,  s = r sqrt(1 - r^2)
//   r > 1:  L phi = phi_thth - phi_dd,          r = sec d
// so the hyperbolic part is a wave equation in the characteristic
// coordinates alpha = theta + d, beta = theta - d, which are the polar
// angles of the two tangent points seen from (r, theta).

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ehyp/error.hpp"
#include "ehyp/geometry.hpp"
#include "ehyp/grid_field.hpp"

namespace ehyp {

/// A GridField on a polar chart: x is r, y is theta.
using PolarField = GridField;

inline void require_polar(const GridField& f) {
  require(f.chart == Chart::Polar, ErrorKind::InvalidArgument, "field must use a polar chart");
  require(f.components == 1, ErrorKind::InvalidArgument, "field must be scalar");
  require(f.x0 > 0.0, ErrorKind::InvalidArgument, "polar chart must stay away from r = 0");
}

/// L phi sampled pointwise with the library's finite differences.
inline PolarField polar_residual(const PolarField& phi) {
  require_polar(phi);
  const GridField pr = diff(phi, Axis::X);
  const GridField prr = diff2(phi, Axis::X);
  const GridField ptt = diff2(phi, Axis::Y);
  PolarField out = phi.like(1);
  out.mask = phi.mask;
  for (std::size_t j = 0; j < phi.ny; ++j)
    for (std::size_t i = 0; i < phi.nx; ++i) {
      const double r = phi.x(i);
      out.at(i, j) = r * r * (1.0 - r * r) * prr.at(i, j) + ptt.at(i, j) + r * (1.0 - 2.0 * r * r) * pr.at(i, j);
    }
  return out;
}

struct AuxiliaryPair {
  PolarField psi1;  // r^2 (1 - r^2) phi_r^2 - phi_th^2
  PolarField psi2;  // -2 phi_r phi_th
};

inline AuxiliaryPair psi_pair(const PolarField& phi) {
  require_polar(phi);
  const GridField pr = diff(phi, Axis::X);
  const GridField pt = diff(phi, Axis::Y);
  AuxiliaryPair out{phi.like(1), phi.like(1)};
  for (std::size_t j = 0; j < phi.ny; ++j)
    for (std::size_t i = 0; i < phi.nx; ++i) {
      const double r = phi.x(i);
      const double a = pr.at(i, j), b = pt.at(i, j);
      out.psi1.at(i, j) = r * r * (1.0 - r * r) * a * a - b * b;
      out.psi2.at(i, j) = -2.0 * a * b;
    }
  return out;
}

/// max over interior samples of |psi2_th - psi1_r + 2 phi_r L phi|. The
/// continuum quantity vanishes for every C^2 field, solution or not.
/// Differencing psi reaches two samples out, so the first ring inside the
/// boundary (whose psi neighbours come from one-sided stencils) is skipped.
inline double multiplier_identity_residual(const PolarField& phi) {
  const AuxiliaryPair pair = psi_pair(phi);
  const GridField p2t = diff(pair.psi2, Axis::Y);
  const GridField p1r = diff(pair.psi1, Axis::X);
  const GridField pr = diff(phi, Axis::X);
  const PolarField lphi = polar_residual(phi);
  double m = 0.0;
  for (std::size_t j = 2; j + 2 < phi.ny; ++j)
    for (std::size_t i = 2; i + 2 < phi.nx; ++i) {
      if (phi.masked(i, j)) continue;
      m = std::max(m, std::abs(p2t.at(i, j) - p1r.at(i, j) + 2.0 * pr.at(i, j) * lphi.at(i, j)));
    }
  return m;
}

struct ChiField {
  PolarField chi;
  std::size_t base_i = 0;
  std::size_t base_j = 0;
  // max |chi along r-then-theta path - chi along theta-then-r path|
  double defect = 0.0;
};

/// chi with chi_theta = psi1 and chi_r = psi2, chi(base) = 0, by trapezoidal
/// integration along axis-aligned paths.
inline ChiField chi_reconstruct(const AuxiliaryPair& pair, std::size_t base_i, std::size_t base_j) {
  const PolarField& p1 = pair.psi1;
  const PolarField& p2 = pair.psi2;
  require(base_i < p1.nx && base_j < p1.ny, ErrorKind::InvalidArgument, "base point outside the grid");
  const std::size_t nx = p1.nx, ny = p1.ny;
  const double hr = p1.hx, ht = p1.hy;

  // Integrate g along a line of samples from index b, trapezoidal.
  auto line = [](std::vector<double>& out, const std::function<double(std::size_t)>& g, std::size_t n,
                 std::size_t b, double h) {
    out.assign(n, 0.0);
    for (std::size_t k = b + 1; k < n; ++k) out[k] = out[k - 1] + 0.5 * h * (g(k - 1) + g(k));
    for (std::size_t k = b; k-- > 0;) out[k] = out[k + 1] - 0.5 * h * (g(k) + g(k + 1));
  };

  PolarField a = p1.like(1), b = p1.like(1);
  std::vector<double> buf;
  // Path A: along r at theta_base, then along theta.
  line(buf, [&](std::size_t i) { return p2.at(i, base_j); }, nx, base_i, hr);
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<double> col;
    line(col, [&](std::size_t j) { return p1.at(i, j); }, ny, base_j, ht);
    for (std::size_t j = 0; j < ny; ++j) a.at(i, j) = buf[i] + col[j];
  }
  // Path B: along theta at r_base, then along r.
  line(buf, [&](std::size_t j) { return p1.at(base_i, j); }, ny, base_j, ht);
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<double> row;
    line(row, [&](std::size_t i) { return p2.at(i, j); }, nx, base_i, hr);
    for (std::size_t i = 0; i < nx; ++i) b.at(i, j) = buf[j] + row[i];
  }
  ChiField out{std::move(a), base_i, base_j, 0.0};
  for (std::size_t k = 0; k < out.chi.values.size(); ++k)
    out.defect = std::max(out.defect, std::abs(out.chi.values[k] - b.values[k]));
  return out;
}

struct ChiDerivativeSample {
  double r = 0.0;
  double theta = 0.0;
  // sign of dr/dtheta along the path (the +/- of the characteristic relation)
  int branch = 1;
  // -(r sqrt(r^2 - 1) phi_r + branch phi_theta)^2
  double formula = 0.0;
  // centred difference of chi along the path; NaN at path ends or without chi
  double differenced = std::numeric_limits<double>::quiet_NaN();
};

/// d chi / d theta along a characteristic in the hyperbolic region, where
/// dr = +/- r sqrt(r^2 - 1) d theta.
inline std::vector<ChiDerivativeSample> chi_characteristic_derivative(const PolarField& phi,
                                                                      const CharacteristicPath& path,
                                                                      const ChiField* chi = nullptr) {
  require_polar(phi);
  require(path.points.size() >= 2, ErrorKind::InvalidArgument, "path needs at least two points");
  const GridField pr = diff(phi, Axis::X);
  const GridField pt = diff(phi, Axis::Y);
  const double rmax = phi.x(phi.nx - 1), tmin = phi.y0, tmax = phi.y(phi.ny - 1);
  const std::size_t n = path.points.size();
  std::vector<double> rs(n), ts(n);
  for (std::size_t k = 0; k < n; ++k) {
    rs[k] = path.points[k].norm();
    ts[k] = std::atan2(path.points[k].y, path.points[k].x);
    if (rs[k] <= 1.0) fail(ErrorKind::OutsideHyperbolicRegion, "path point with r <= 1");
    require(rs[k] <= rmax + 1e-12 && ts[k] >= tmin - 1e-12 && ts[k] <= tmax + 1e-12, ErrorKind::InvalidArgument,
            "path leaves the field's chart");
  }
  std::vector<ChiDerivativeSample> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
    const double dr = rs[hi] - rs[lo];
    const double dt = ts[hi] - ts[lo];
    ChiDerivativeSample& s = out[k];
    s.r = rs[k];
    s.theta = ts[k];
    s.branch = dr * dt >= 0.0 ? 1 : -1;
    const double a = interpolate(pr, rs[k], ts[k]);
    const double b = interpolate(pt, rs[k], ts[k]);
    const double v = rs[k] * std::sqrt(rs[k] * rs[k] - 1.0) * a + s.branch * b;
    s.formula = -v * v;
    if (chi && k > 0 && k + 1 < n && dt != 0.0) {
      s.differenced = (interpolate(chi->chi, rs[hi], ts[hi]) - interpolate(chi->chi, rs[lo], ts[lo])) / dt;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Open boundary-value problem on a lens domain.

/// Data on the non-characteristic boundary: the inner arc r = eps and the two
/// radial segments theta = -+theta0, eps <= r <= 1. source is the right-hand
/// side of L phi = source (zero when empty).
struct OpenProblemData {
  std::function<double(double theta)> inner_arc;
  std::function<double(double r)> lower_radial;
  std::function<double(double r)> upper_radial;
  std::function<double(double r, double theta)> source;

  static OpenProblemData from_function(std::function<double(double, double)> g,
                                       std::function<double(double, double)> source = {},
                                       double theta0 = 0.0, double eps = 0.0) {
    OpenProblemData d;
    d.inner_arc = [g, eps](double t) { return g(eps, t); };
    d.lower_radial = [g, theta0](double r) { return g(r, -theta0); };
    d.upper_radial = [g, theta0](double r) { return g(r, theta0); };
    d.source = std::move(source);
    return d;
  }

  static OpenProblemData from_function(const LensDomain& dom, std::function<double(double, double)> g,
                                       std::function<double(double, double)> source = {}) {
    return from_function(std::move(g), std::move(source), dom.theta0, dom.eps);
  }

  static OpenProblemData homogeneous() {
    OpenProblemData d;
    d.inner_arc = [](double) { return 0.0; };
    d.lower_radial = [](double) { return 0.0; };
    d.upper_radial = [](double) { return 0.0; };
    return d;
  }
};

struct OpenProblemOptions {
  // Radial cells across the elliptic part [eps, 1].
  std::size_t resolution = 32;
  // Characteristic (alpha, beta) grid is this many times finer than theta.
  std::size_t leaf_refinement = 2;
  double corner_tol = 1e-8;
  // Fraction of hyperbolic nodes allowed to fall outside the marched leaves.
  double max_uncovered_fraction = 0.0;
  double iterative_tol = 1e-12;
};

struct RegionResidual {
  std::string region;
  double norm = 0.0;
  double h = 0.0;
};

namespace detail {

// Cubic Lagrange interpolation through four equally spaced samples
// v[0..3] at offsets 0..3, evaluated at offset t.
inline double lagrange4(const double* v, double t) {
  const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  return -v[0] * t1 * t2 * t3 / 6.0 + v[1] * t0 * t2 * t3 / 2.0 - v[2] * t0 * t1 * t3 / 2.0 +
         v[3] * t0 * t1 * t2 / 6.0;
}

// Picks the four-sample window [k, k+3] of n samples around position s.
inline std::size_t window4(double s, std::size_t n) {
  const auto k = static_cast<long>(std::floor(s)) - 1;
  return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(n) - 4));
}

// Elliptic coordinate: d/drho = s d/dr with s = r sqrt(1 - r^2), so the
// elliptic part of L is the Laplacian in (rho, theta); rho(1) = 0.
inline double rho_of_r(double r) { return -std::atanh(std::sqrt(std::max(0.0, 1.0 - r * r))); }

}  // namespace detail

struct OpenProblemSolution {
  LensDomain domain;
  // Polar chart from r = eps with r = 1 halfway between two radial samples;
  // mask flags samples outside the lens domain.
  PolarField phi;
  std::size_t elliptic_rows = 0;  // radial samples with r < 1
  double h = 0.0;                 // max(radial, angular) spacing
  std::vector<double> nu_trace;   // phi on r = 1 at the theta samples

  // Elliptic solution on rho_i = rho_eps + i hrho (i < rows), theta_j, with
  // r = 1 halfway between the last row and its mirror image.
  double rho0 = 0.0;
  double hrho = 0.0;
  double htheta = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> elliptic;

  // Characteristic grid alpha_a = beta_a = -theta0 + a dalpha, a = 0..m,
  // symmetric in (a, b) since phi is even in alpha - theta.
  std::size_t m = 0;
  double dalpha = 0.0;
  std::vector<double> characteristic;
  std::size_t uncovered = 0;

  std::function<double(double, double)> source;
  std::vector<RegionResidual> residuals;

  double char_at(std::size_t a, std::size_t b) const { return characteristic[a * (m + 1) + b]; }

  /// Sonic trace g(theta), cubic through the trace samples.
  double trace(double theta) const {
    const std::size_t n = nu_trace.size();
    const double s = std::clamp((theta + domain.theta0) / htheta, 0.0, static_cast<double>(n - 1));
    const std::size_t k = detail::window4(s, n);
    return detail::lagrange4(nu_trace.data() + k, s - static_cast<double>(k));
  }

  /// int over {beta <= beta' <= alpha' <= alpha} of the source, in (alpha, beta).
  double source_integral(double alpha, double beta) const {
    if (!source || alpha <= beta) return 0.0;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    auto f = [this](double a, double b) { return source(1.0 / std::cos(0.5 * (a - b)), 0.5 * (a + b)); };
    return Gauss::integrate([&](double ap) { return Gauss::integrate([&](double bp) { return f(ap, bp); }, beta, ap); },
                            beta, alpha);
  }

  /// phi at tangent-point angles (alpha, beta) of a hyperbolic point.
  double evaluate_characteristic(double alpha, double beta) const {
    if (alpha < beta) std::swap(alpha, beta);
    return 0.5 * (trace(alpha) + trace(beta)) - 0.25 * source_integral(alpha, beta);
  }

  /// Elliptic solution at (rho, theta), rho <= 0, using the even reflection
  /// across rho = 0 that the natural condition phi_rho = 0 provides.
  double evaluate_elliptic(double rho, double theta) const {
    const auto ext = [&](long i, std::size_t j) {
      const long n = static_cast<long>(rows);
      const long k = i < n ? i : 2 * n - 1 - i;
      return elliptic[static_cast<std::size_t>(k) * cols + j];
    };
    const double s = std::clamp((rho - rho0) / hrho, 0.0, static_cast<double>(rows) - 0.5);
    const std::size_t ki = detail::window4(s, rows + 2);
    const double t = std::clamp((theta + domain.theta0) / htheta, 0.0, static_cast<double>(cols - 1));
    const std::size_t kj = detail::window4(t, cols);
    std::array<double, 4> col{};
    for (std::size_t q = 0; q < 4; ++q) {
      std::array<double, 4> v{};
      for (std::size_t p = 0; p < 4; ++p) v[p] = ext(static_cast<long>(ki + p), kj + q);
      col[q] = detail::lagrange4(v.data(), s - static_cast<double>(ki));
    }
    return detail::lagrange4(col.data(), t - static_cast<double>(kj));
  }

  double evaluate(double r, double theta) const {
    if (r < 1.0) return evaluate_elliptic(detail::rho_of_r(r), theta);
    const double d = std::acos(std::min(1.0, 1.0 / r));
    return evaluate_characteristic(theta + d, theta - d);
  }
};

/// Solves L phi = source on the lens domain with data on the
/// non-characteristic boundary only.
///
/// Elliptic part: with rho = -artanh sqrt(1 - r^2) the operator is the
/// Laplacian in (rho, theta) and the sonic arc is rho = 0. Bounded phi_r
/// there means phi_rho = 0, the natural condition, so no data is needed on
/// the arc. Five-point scheme on a rho-grid with the arc halfway between the
/// last row and its mirror image; phi on the arc follows from the even
/// reflection.
///
/// Hyperbolic part: each tangent line alpha = const is a leaf, marched from
/// its foot on the sonic arc by
///   phi(alpha, beta) = [g(alpha) + g(beta)]/2 - (1/4) int_T source,
/// T = {beta <= beta' <= alpha' <= alpha}, g the sonic trace; equality of the
/// two one-sided derivatives on the arc is again the natural condition.
inline OpenProblemSolution solve_open_problem(const LensDomain& dom, const OpenProblemData& data,
                                              const OpenProblemOptions& opt = {}) {
  require(opt.resolution >= 8, ErrorKind::InvalidArgument, "resolution must be at least 8");
  require(opt.leaf_refinement >= 1, ErrorKind::InvalidArgument, "leaf refinement must be at least 1");
  require(static_cast<bool>(data.inner_arc) && data.lower_radial && data.upper_radial, ErrorKind::InvalidArgument,
          "boundary data must cover the inner arc and both radial segments");
  const double t0 = dom.theta0;
  const double eps = dom.eps;
  for (double sgn : {-1.0, 1.0}) {
    const double arc = data.inner_arc(sgn * t0);
    const double rad = sgn < 0 ? data.lower_radial(eps) : data.upper_radial(eps);
    require(std::abs(arc - rad) <= opt.corner_tol, ErrorKind::InvalidArgument,
            "boundary data is discontinuous at a corner of the inner arc");
  }
  auto f_at = [&](double r, double t) { return data.source ? data.source(r, t) : 0.0; };

  const std::size_t n = opt.resolution;
  const double hr = (1.0 - eps) / (static_cast<double>(n) - 0.5);
  const std::size_t mt = std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(2.0 * t0 / hr)));
  const double ht = 2.0 * t0 / static_cast<double>(mt);
  const double rpole = 1.0 / dom.x0;
  const auto kmax = static_cast<std::size_t>(std::ceil(std::max(0.0, (rpole - 1.0) / hr - 0.5)));
  const std::size_t nr = n + kmax + 1;

  OpenProblemSolution sol;
  sol.domain = dom;
  sol.source = data.source;
  sol.elliptic_rows = n;
  sol.h = std::max(hr, ht);
  sol.phi = GridField(Chart::Polar, eps, -t0, hr, ht, nr, mt + 1, 1);
  PolarField& phi = sol.phi;

  // ---- elliptic part on the rho-grid ----------------------------------------
  const double rho_eps = detail::rho_of_r(eps);
  const double hp = -rho_eps / (static_cast<double>(n) - 0.5);
  sol.rho0 = rho_eps;
  sol.hrho = hp;
  sol.htheta = ht;
  sol.rows = n;
  sol.cols = mt + 1;
  sol.elliptic.assign(n * (mt + 1), 0.0);
  auto U = [&](std::size_t i, std::size_t j) -> double& { return sol.elliptic[i * (mt + 1) + j]; };
  auto r_of_rho = [](double rho) { return 1.0 / std::cosh(rho); };
  for (std::size_t i = 0; i < n; ++i) {
    const double r = r_of_rho(rho_eps + static_cast<double>(i) * hp);
    U(i, 0) = data.lower_radial(i == 0 ? eps : r);
    U(i, mt) = data.upper_radial(i == 0 ? eps : r);
  }
  for (std::size_t j = 1; j < mt; ++j) U(0, j) = data.inner_arc(-t0 + static_cast<double>(j) * ht);

  const std::size_t ni = n - 1, nj = mt - 1;
  auto unknown = [&](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>((i - 1) * nj + (j - 1)); };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(ni * nj * 5);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(ni * nj));
  const double ip2 = 1.0 / (hp * hp), it2 = 1.0 / (ht * ht);
  for (std::size_t i = 1; i < n; ++i) {
    const double r = r_of_rho(rho_eps + static_cast<double>(i) * hp);
    const bool last = i + 1 == n;  // mirror neighbour equals the sample itself
    for (std::size_t j = 1; j < mt; ++j) {
      const Eigen::Index row = unknown(i, j);
      double b = f_at(r, -t0 + static_cast<double>(j) * ht);
      trip.emplace_back(row, row, -(last ? 1.0 : 2.0) * ip2 - 2.0 * it2);
      if (!last) trip.emplace_back(row, unknown(i + 1, j), ip2);
      if (i - 1 >= 1) {
        trip.emplace_back(row, unknown(i - 1, j), ip2);
      } else {
        b -= ip2 * U(0, j);
      }
      if (j + 1 < mt) {
        trip.emplace_back(row, unknown(i, j + 1), it2);
      } else {
        b -= it2 * U(i, mt);
      }
      if (j - 1 >= 1) {
        trip.emplace_back(row, unknown(i, j - 1), it2);
      } else {
        b -= it2 * U(i, 0);
      }
      rhs[row] = b;
    }
  }
  Eigen::SparseMatrix<double> mat(static_cast<Eigen::Index>(ni * nj), static_cast<Eigen::Index>(ni * nj));
  mat.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd x;
  {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(mat);
    if (lu.info() == Eigen::Success) x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
      Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
      it.setTolerance(opt.iterative_tol);
      it.setMaxIterations(20 * static_cast<Eigen::Index>(ni * nj));
      it.compute(mat);
      x = it.solve(rhs);
      if (it.info() != Eigen::Success) fail(ErrorKind::NonConvergence, "elliptic solve did not converge");
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < mt; ++j) U(i, j) = x[unknown(i, j)];

  // ---- sonic trace: quadratic in rho with zero slope at rho = 0 -------------
  sol.nu_trace.resize(mt + 1);
  sol.nu_trace[0] = data.lower_radial(1.0);
  sol.nu_trace[mt] = data.upper_radial(1.0);
  for (std::size_t j = 1; j < mt; ++j) sol.nu_trace[j] = (9.0 * U(n - 1, j) - U(n - 2, j)) / 8.0;

  // ---- elliptic samples on the polar chart -----------------------------------
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= mt; ++j) {
      if (i == 0) {
        phi.at(i, j) = U(0, j);
      } else if (j == 0 || j == mt) {
        phi.at(i, j) = j == 0 ? data.lower_radial(phi.x(i)) : data.upper_radial(phi.x(i));
      } else {
        phi.at(i, j) = sol.evaluate_elliptic(detail::rho_of_r(phi.x(i)), phi.y(j));
      }
    }

  // ---- characteristic leaves -------------------------------------------------
  const std::size_t m = mt * opt.leaf_refinement;
  const double da = 2.0 * t0 / static_cast<double>(m);
  sol.m = m;
  sol.dalpha = da;
  sol.characteristic.assign((m + 1) * (m + 1), 0.0);
  auto ang = [&](std::size_t a) { return -t0 + static_cast<double>(a) * da; };
  for (std::size_t a = 0; a <= m; ++a) {
    // Leaf alpha_a, from its foot b = a towards b = 0.
    for (std::size_t b = a + 1; b-- > 0;) {
      const double v = sol.evaluate_characteristic(ang(a), ang(b));
      sol.characteristic[a * (m + 1) + b] = v;
      sol.characteristic[b * (m + 1) + a] = v;
    }
  }

  // ---- hyperbolic samples and mask -------------------------------------------
  std::size_t hyperbolic_nodes = 0;
  for (std::size_t i = n; i < nr; ++i) {
    const double r = phi.x(i);
    const double d = std::acos(1.0 / r);
    for (std::size_t j = 0; j <= mt; ++j) {
      const double t = phi.y(j);
      if (dom.region_polar(r, t, 1e-12) != LensRegion::Hyperbolic) {
        phi.set_masked(i, j, true);
        continue;
      }
      ++hyperbolic_nodes;
      const double alpha = t + d, beta = t - d;
      // Every leaf alpha in [-theta0, theta0] is marched; a sample whose
      // tangent angles leave that range is not reached by any leaf.
      if (alpha > t0 + 1e-9 || beta < -t0 - 1e-9) ++sol.uncovered;
      phi.at(i, j) = sol.evaluate_characteristic(alpha, beta);
    }
  }
  if (phi.mask.empty()) phi.mask.assign(phi.nx * phi.ny, 0);
  if (hyperbolic_nodes > 0 &&
      static_cast<double>(sol.uncovered) > opt.max_uncovered_fraction * static_cast<double>(hyperbolic_nodes)) {
    fail(ErrorKind::FoliationGap, "characteristic leaves leave hyperbolic samples uncovered");
  }

  // ---- residual report ---------------------------------------------------------
  // Elliptic: five-point residual of the rho-grid solution. Hyperbolic: L phi
  // with centred differences at samples whose stencil stays in the domain.
  double ell = 0.0, hyp = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    for (std::size_t j = 1; j < mt; ++j) {
      const double r = r_of_rho(rho_eps + static_cast<double>(i) * hp);
      const double lap = (U(i + 1, j) - 2.0 * U(i, j) + U(i - 1, j)) * ip2 +
                         (U(i, j + 1) - 2.0 * U(i, j) + U(i, j - 1)) * it2;
      ell = std::max(ell, std::abs(lap - f_at(r, -t0 + static_cast<double>(j) * ht)));
    }
  for (std::size_t i = n + 1; i + 1 < nr; ++i)
    for (std::size_t j = 1; j < mt; ++j) {
      if (phi.masked(i, j) || phi.masked(i - 1, j) || phi.masked(i + 1, j) || phi.masked(i, j - 1) ||
          phi.masked(i, j + 1))
        continue;
      const double r = phi.x(i);
      const double prr = (phi.at(i + 1, j) - 2.0 * phi.at(i, j) + phi.at(i - 1, j)) / (hr * hr);
      const double pr = (phi.at(i + 1, j) - phi.at(i - 1, j)) / (2.0 * hr);
      const double ptt = (phi.at(i, j + 1) - 2.0 * phi.at(i, j) + phi.at(i, j - 1)) / (ht * ht);
      const double lp = r * r * (1.0 - r * r) * prr + ptt + r * (1.0 - 2.0 * r * r) * pr;
      hyp = std::max(hyp, std::abs(lp - f_at(r, phi.y(j))));
    }
  sol.residuals = {{"elliptic", ell, sol.h}, {"hyperbolic", hyp, sol.h}};
  return sol;
}

struct GapReport {
  double gap = 0.0;
  double h = 0.0;
  std::size_t samples = 0;
  // max |phi| on the sonic arc of the open-problem solution
  double sonic_max = 0.0;
};

/// Solves the open problem with the non-characteristic data only and measures
/// how far the induced trace on the two characteristic boundary segments is
/// from the prescribed hyperbolic data.
inline GapReport overdetermination_gap(const LensDomain& dom, const OpenProblemData& open_data,
                                       const std::function<double(double r, double theta)>& hyperbolic_data,
                                       const OpenProblemOptions& opt = {}) {
  require(static_cast<bool>(hyperbolic_data), ErrorKind::InvalidArgument, "hyperbolic boundary data missing");
  const OpenProblemSolution sol = solve_open_problem(dom, open_data, opt);
  GapReport rep;
  rep.h = sol.h;
  const double t0 = dom.theta0;
  for (std::size_t b = 0; b <= sol.m; ++b) {
    // Upper segment: alpha = theta0; lower segment: beta = -theta0.
    const double other = -t0 + static_cast<double>(b) * sol.dalpha;
    for (const auto& [alpha, beta, value] :
         {std::array<double, 3>{t0, other, sol.char_at(sol.m, b)},
          std::array<double, 3>{other, -t0, sol.char_at(b, 0)}}) {
      const double d = 0.5 * (alpha - beta);
      const double r = 1.0 / std::cos(d);
      const double theta = 0.5 * (alpha + beta);
      rep.gap = std::max(rep.gap, std::abs(value - hyperbolic_data(r, theta)));
      ++rep.samples;
    }
  }
  for (double v : sol.nu_trace) rep.sonic_max = std::max(rep.sonic_max, std::abs(v));
  return rep;
}

}  // namespace ehyp
