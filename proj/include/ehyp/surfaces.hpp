#pragma once

// Extremal graphs in Euclidean and Minkowski 3-space, the Legendre
// (hodograph) transform, and nonlinear Hodge equations
//   delta[rho(Q) omega] = d omega = 0,   Q = |omega|^2
// on Cartesian grids.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "ehyp/density.hpp"
#include "ehyp/error.hpp"
#include "ehyp/grid_field.hpp"

namespace ehyp {

/// A = sum over cells of sqrt|1 - f_x^2 - f_y^2| hx hy.
inline double area_functional(const GridField& f) {
  require(f.components == 1, ErrorKind::InvalidArgument, "area functional needs a scalar field");
  const GridField p = diff(f, Axis::X);
  const GridField q = diff(f, Axis::Y);
  double area = 0.0;
  for (std::size_t j = 0; j < f.ny; ++j)
    for (std::size_t i = 0; i < f.nx; ++i) {
      if (f.masked(i, j)) continue;
      const double px = p.at(i, j);
      const double qy = q.at(i, j);
      area += std::sqrt(std::abs(1.0 - px * px - qy * qy));
    }
  return area * f.cell_area();
}

enum class ExtremalKind { MinkowskiGraph, EuclideanMinimal, LorentzMaximal };

inline const char* to_string(ExtremalKind k) {
  switch (k) {
    case ExtremalKind::MinkowskiGraph: return "minkowski";
    case ExtremalKind::EuclideanMinimal: return "euclidean";
    case ExtremalKind::LorentzMaximal: return "lorentz";
  }
  return "?";
}

/// Pointwise residual on interior samples (the boundary ring is masked).
///   MinkowskiGraph:   (1 - p^2) q_y + 2pq p_y + (1 - q^2) p_x
///   EuclideanMinimal: (1 + q^2) p_x - 2pq p_y + (1 + p^2) q_y
///   LorentzMaximal:   div(grad f / sqrt(1 - |grad f|^2)), expanded
inline GridField extremal_residual(const GridField& f, ExtremalKind kind, double tol = 1e-12) {
  require(f.components == 1, ErrorKind::InvalidArgument, "extremal residual needs a scalar field");
  const GridField p = diff(f, Axis::X);
  const GridField q = diff(f, Axis::Y);
  const GridField fxx = diff2(f, Axis::X);
  const GridField fyy = diff2(f, Axis::Y);
  const GridField fxy = diff_xy(f);
  GridField out = f.like(1);
  for (std::size_t j = 0; j < f.ny; ++j) {
    for (std::size_t i = 0; i < f.nx; ++i) {
      if (!f.interior(i, j) || f.masked(i, j)) {
        out.set_masked(i, j, true);
        continue;
      }
      const double px = p.at(i, j);
      const double qy = q.at(i, j);
      const double a = fxx.at(i, j);
      const double b = fxy.at(i, j);
      const double c = fyy.at(i, j);
      double res = 0.0;
      switch (kind) {
        case ExtremalKind::MinkowskiGraph:
          res = (1.0 - px * px) * c + 2.0 * px * qy * b + (1.0 - qy * qy) * a;
          break;
        case ExtremalKind::EuclideanMinimal:
          res = (1.0 + qy * qy) * a - 2.0 * px * qy * b + (1.0 + px * px) * c;
          break;
        case ExtremalKind::LorentzMaximal: {
          const double w = 1.0 - px * px - qy * qy;
          if (w <= tol) fail(ErrorKind::DivergenceUndefined, "gradient is not space-like (|grad f| >= 1)");
          res = ((1.0 - qy * qy) * a + 2.0 * px * qy * b + (1.0 - px * px) * c) / (w * std::sqrt(w));
          break;
        }
      }
      out.at(i, j) = res;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Legendre transform z = p x + q y - phi(p, q), x = phi_p, y = phi_q.

struct HodographField {
  GridField phi;  // Cartesian chart over (p, q); phi.mask flags singular nodes
  std::size_t masked_count = 0;
};

struct LegendreOptions {
  double hessian_tol = 1e-10;
  // Hodograph grid size; 0 keeps the input size.
  std::size_t nx = 0;
  std::size_t ny = 0;
};

/// True when no sample used by the difference stencils at (i, j) is masked.
inline bool stencil_clear(const GridField& f, std::size_t i, std::size_t j) {
  if (f.mask.empty()) return true;
  // Edge samples use four-point one-sided second differences.
  auto range = [](std::size_t k, std::size_t n) -> std::pair<std::size_t, std::size_t> {
    const std::size_t w = n >= 4 ? 4 : 3;
    if (k == 0) return {0, w};
    if (k + 1 == n) return {n - w, n};
    return {k - 1, k + 2};
  };
  const auto [i0, i1] = range(i, f.nx);
  const auto [j0, j1] = range(j, f.ny);
  for (std::size_t b = j0; b < j1; ++b)
    for (std::size_t a = i0; a < i1; ++a)
      if (f.masked(a, b)) return false;
  return true;
}

/// Scatters phi = p x + q y - f at (p, q) = grad f and resamples it
/// piecewise-linearly onto a regular (p, q) grid spanning the scattered
/// points. The interpolant lives on the image of the source grid's triangles;
/// a triangle contributes only if all three vertices have |Hessian| above
/// tolerance. Nodes no triangle covers are masked.
inline HodographField legendre_transform(const GridField& f, const LegendreOptions& opt = {}) {
  require(f.components == 1, ErrorKind::InvalidArgument, "Legendre transform needs a scalar field");
  const GridField p = diff(f, Axis::X);
  const GridField q = diff(f, Axis::Y);
  const GridField fxx = diff2(f, Axis::X);
  const GridField fyy = diff2(f, Axis::Y);
  const GridField fxy = diff_xy(f);

  const std::size_t n = f.nx * f.ny;
  std::vector<double> phi_s(n), ps(n), qs(n);
  std::vector<std::uint8_t> ok(n, 0);
  double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin, qmin = pmin, qmax = -pmin;
  std::size_t good = 0;
  for (std::size_t j = 0; j < f.ny; ++j)
    for (std::size_t i = 0; i < f.nx; ++i) {
      const std::size_t k = j * f.nx + i;
      ps[k] = p.at(i, j);
      qs[k] = q.at(i, j);
      phi_s[k] = ps[k] * f.x(i) + qs[k] * f.y(j) - f.at(i, j);
      const double hess = fxx.at(i, j) * fyy.at(i, j) - fxy.at(i, j) * fxy.at(i, j);
      if (std::abs(hess) > opt.hessian_tol && stencil_clear(f, i, j)) {
        ok[k] = 1;
        ++good;
        pmin = std::min(pmin, ps[k]);
        pmax = std::max(pmax, ps[k]);
        qmin = std::min(qmin, qs[k]);
        qmax = std::max(qmax, qs[k]);
      }
    }
  if (good < 3 || !(pmax > pmin) || !(qmax > qmin)) {
    fail(ErrorKind::LegendreSingular, "Hessian determinant vanishes: no invertible region");
  }

  const std::size_t mx = opt.nx ? opt.nx : f.nx;
  const std::size_t my = opt.ny ? opt.ny : f.ny;
  HodographField out;
  out.phi = GridField(Chart::Cartesian, pmin, qmin, (pmax - pmin) / static_cast<double>(mx - 1),
                      (qmax - qmin) / static_cast<double>(my - 1), mx, my, 1);
  GridField& g = out.phi;
  std::vector<std::uint8_t> filled(mx * my, 0);

  auto splat = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (!ok[a] || !ok[b] || !ok[c]) return;
    const double ax = ps[a], ay = qs[a], bx = ps[b], by = qs[b], cx = ps[c], cy = qs[c];
    const double det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
    if (std::abs(det) <= 1e-300) return;
    const double lo_x = std::min({ax, bx, cx}), hi_x = std::max({ax, bx, cx});
    const double lo_y = std::min({ay, by, cy}), hi_y = std::max({ay, by, cy});
    const double slack = 1e-9;
    const auto i0 = static_cast<std::ptrdiff_t>(std::ceil((lo_x - g.x0) / g.hx - slack));
    const auto i1 = static_cast<std::ptrdiff_t>(std::floor((hi_x - g.x0) / g.hx + slack));
    const auto j0 = static_cast<std::ptrdiff_t>(std::ceil((lo_y - g.y0) / g.hy - slack));
    const auto j1 = static_cast<std::ptrdiff_t>(std::floor((hi_y - g.y0) / g.hy + slack));
    for (auto jj = std::max<std::ptrdiff_t>(j0, 0); jj <= std::min<std::ptrdiff_t>(j1, my - 1); ++jj) {
      for (auto ii = std::max<std::ptrdiff_t>(i0, 0); ii <= std::min<std::ptrdiff_t>(i1, mx - 1); ++ii) {
        const std::size_t k = static_cast<std::size_t>(jj) * mx + static_cast<std::size_t>(ii);
        if (filled[k]) continue;
        const double x = g.x(static_cast<std::size_t>(ii));
        const double y = g.y(static_cast<std::size_t>(jj));
        const double l1 = ((x - ax) * (cy - ay) - (cx - ax) * (y - ay)) / det;
        const double l2 = ((bx - ax) * (y - ay) - (x - ax) * (by - ay)) / det;
        const double l0 = 1.0 - l1 - l2;
        if (l0 < -slack || l1 < -slack || l2 < -slack) continue;
        g.values[k] = l0 * phi_s[a] + l1 * phi_s[b] + l2 * phi_s[c];
        filled[k] = 1;
      }
    }
  };

  for (std::size_t j = 0; j + 1 < f.ny; ++j)
    for (std::size_t i = 0; i + 1 < f.nx; ++i) {
      const std::size_t k00 = j * f.nx + i, k10 = k00 + 1, k01 = k00 + f.nx, k11 = k01 + 1;
      splat(k00, k10, k11);
      splat(k00, k11, k01);
    }

  g.mask.assign(mx * my, 0);
  for (std::size_t k = 0; k < mx * my; ++k) {
    if (!filled[k]) {
      g.mask[k] = 1;
      ++out.masked_count;
    }
  }
  if (out.masked_count == mx * my) fail(ErrorKind::LegendreSingular, "no hodograph node is covered");
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinear Hodge equations for a 1-form omega = omega_1 dx + omega_2 dy.

struct HodgeResidual {
  GridField closed;    // d omega:          d_x omega_2 - d_y omega_1
  GridField coclosed;  // delta(rho omega): d_x(rho omega_1) + d_y(rho omega_2)
};

inline HodgeResidual hodge_residual(const GridField& omega, const Density& dens) {
  require(omega.components == 2, ErrorKind::InvalidArgument, "Hodge residual needs a 2-component field");
  require(omega.chart == Chart::Cartesian, ErrorKind::InvalidArgument, "Hodge residual needs a Cartesian chart");
  GridField flux = omega.like(2);
  for (std::size_t j = 0; j < omega.ny; ++j)
    for (std::size_t i = 0; i < omega.nx; ++i) {
      const double w1 = omega.at(i, j, 0);
      const double w2 = omega.at(i, j, 1);
      const double r = dens.rho(w1 * w1 + w2 * w2);
      flux.at(i, j, 0) = r * w1;
      flux.at(i, j, 1) = r * w2;
    }
  HodgeResidual res{omega.like(1), omega.like(1)};
  const GridField w2x = diff(omega, Axis::X, 1);
  const GridField w1y = diff(omega, Axis::Y, 0);
  const GridField f1x = diff(flux, Axis::X, 0);
  const GridField f2y = diff(flux, Axis::Y, 1);
  for (std::size_t k = 0; k < omega.nx * omega.ny; ++k) {
    res.closed.values[k] = w2x.values[k] - w1y.values[k];
    res.coclosed.values[k] = f1x.values[k] + f2y.values[k];
  }
  res.closed.mask = omega.mask;
  res.coclosed.mask = omega.mask;
  return res;
}

/// The density paired with dens under Hodge duality: Euclidean <-> Minkowski.
inline Density dual_density(const Density& dens) {
  switch (dens.kind()) {
    case DensityKind::Euclidean: return Density::minkowski();
    case DensityKind::Minkowski: return Density::euclidean();
    default: fail(ErrorKind::InvalidArgument, "only the Euclidean and Minkowski densities have a dual");
  }
}

struct DualFormOptions {
  // Largest admissible |d omega| and |delta(rho omega)| on the input.
  double closed_threshold = 1e-8;
  // Largest admissible disagreement between the two integration paths.
  double path_tolerance = 1e-8;
};

struct DualFormResult {
  GridField sigma;
  Density dual = Density::minkowski();
  HodgeResidual dual_residual;
  double max_dual_residual = 0.0;
  double path_defect = 0.0;
  double source_residual = 0.0;
};

/// Potential sigma of *(rho omega) = rho omega_1 dy - rho omega_2 dx, so
/// d sigma = (-rho omega_2, rho omega_1). sigma(origin sample) = 0; the
/// primary path runs along the first row then up each column, the check path
/// up the first column then along each row (trapezoidal rule). The dual field
/// grad sigma is tested against the nonlinear Hodge equations with the dual
/// density.
inline DualFormResult dual_form(const GridField& omega, const Density& dens, const DualFormOptions& opt = {}) {
  const HodgeResidual src = hodge_residual(omega, dens);
  const double source = std::max(src.closed.max_abs(), src.coclosed.max_abs());
  if (!(source <= opt.closed_threshold)) {
    fail(ErrorKind::NotClosed, "input violates the Hodge equations beyond the threshold");
  }
  DualFormResult out;
  out.source_residual = source;
  out.dual = dual_density(dens);

  GridField grad = omega.like(2);  // (sigma_x, sigma_y)
  for (std::size_t j = 0; j < omega.ny; ++j)
    for (std::size_t i = 0; i < omega.nx; ++i) {
      const double w1 = omega.at(i, j, 0);
      const double w2 = omega.at(i, j, 1);
      const double r = dens.rho(w1 * w1 + w2 * w2);
      grad.at(i, j, 0) = -r * w2;
      grad.at(i, j, 1) = r * w1;
    }

  GridField s1 = omega.like(1);
  GridField s2 = omega.like(1);
  const double hx = omega.hx, hy = omega.hy;
  for (std::size_t i = 1; i < omega.nx; ++i)
    s1.at(i, 0) = s1.at(i - 1, 0) + 0.5 * hx * (grad.at(i - 1, 0, 0) + grad.at(i, 0, 0));
  for (std::size_t j = 1; j < omega.ny; ++j)
    for (std::size_t i = 0; i < omega.nx; ++i)
      s1.at(i, j) = s1.at(i, j - 1) + 0.5 * hy * (grad.at(i, j - 1, 1) + grad.at(i, j, 1));
  for (std::size_t j = 1; j < omega.ny; ++j)
    s2.at(0, j) = s2.at(0, j - 1) + 0.5 * hy * (grad.at(0, j - 1, 1) + grad.at(0, j, 1));
  for (std::size_t j = 0; j < omega.ny; ++j)
    for (std::size_t i = 1; i < omega.nx; ++i)
      s2.at(i, j) = s2.at(i - 1, j) + 0.5 * hx * (grad.at(i - 1, j, 0) + grad.at(i, j, 0));

  for (std::size_t k = 0; k < s1.values.size(); ++k)
    out.path_defect = std::max(out.path_defect, std::abs(s1.values[k] - s2.values[k]));
  if (!(out.path_defect <= opt.path_tolerance)) {
    fail(ErrorKind::PathDependence, "integration paths disagree beyond tolerance");
  }
  out.sigma = std::move(s1);

  GridField dual_omega = omega.like(2);
  const GridField sx = diff(out.sigma, Axis::X);
  const GridField sy = diff(out.sigma, Axis::Y);
  for (std::size_t k = 0; k < sx.values.size(); ++k) {
    dual_omega.values[2 * k] = sx.values[k];
    dual_omega.values[2 * k + 1] = sy.values[k];
  }
  out.dual_residual = hodge_residual(dual_omega, out.dual);
  out.max_dual_residual = std::max(out.dual_residual.closed.max_abs(), out.dual_residual.coclosed.max_abs());
  return out;
}

/// E = sum over unmasked cells of e(|omega|^2) hx hy.
inline double energy(const GridField& omega, const Density& dens) {
  double total = 0.0;
  for (std::size_t j = 0; j < omega.ny; ++j)
    for (std::size_t i = 0; i < omega.nx; ++i) {
      if (omega.masked(i, j)) continue;
      double q = 0.0;
      for (std::size_t c = 0; c < omega.components; ++c) q += omega.at(i, j, c) * omega.at(i, j, c);
      total += dens.primitive(q);
    }
  return total * omega.cell_area();
}

}  // namespace ehyp
