#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ehyp/error.hpp"

namespace ehyp {

enum class Chart { Cartesian, Polar };

inline const char* to_string(Chart c) { return c == Chart::Cartesian ? "cartesian" : "polar"; }

enum class Axis { X, Y };

/// Samples on a uniform structured grid. Sample (i, j) sits at
/// origin + (i hx, j hy); values are row-major in j with components
/// interleaved: index (j nx + i) components + c. For a polar chart x is r and
/// y is theta. Each sample stands for the cell of area hx hy centred on it.
///
/// mask, when non-empty, has one flag per sample; true excludes the sample.
struct GridField {
  Chart chart = Chart::Cartesian;
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 1.0;
  double hy = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t components = 1;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  GridField() = default;

  GridField(Chart chart_, double x0_, double y0_, double hx_, double hy_, std::size_t nx_, std::size_t ny_,
            std::size_t comps = 1)
      : chart(chart_), x0(x0_), y0(y0_), hx(hx_), hy(hy_), nx(nx_), ny(ny_), components(comps),
        values(nx_ * ny_ * comps, 0.0) {
    validate();
  }

  /// Same geometry, zero values, no mask.
  GridField like(std::size_t comps = 1) const { return GridField(chart, x0, y0, hx, hy, nx, ny, comps); }

  void validate() const {
    require(nx >= 3 && ny >= 3, ErrorKind::InvalidArgument, "grid needs at least 3 samples per axis");
    require(hx > 0.0 && hy > 0.0, ErrorKind::InvalidArgument, "grid spacing must be positive");
    require(components == 1 || components == 2, ErrorKind::InvalidArgument, "components must be 1 or 2");
    require(values.size() == nx * ny * components, ErrorKind::InvalidArgument,
            "value count must equal nx * ny * components");
    require(mask.empty() || mask.size() == nx * ny, ErrorKind::InvalidArgument, "mask must have nx * ny entries");
  }

  std::size_t index(std::size_t i, std::size_t j, std::size_t c = 0) const { return (j * nx + i) * components + c; }
  double& at(std::size_t i, std::size_t j, std::size_t c = 0) { return values[index(i, j, c)]; }
  double at(std::size_t i, std::size_t j, std::size_t c = 0) const { return values[index(i, j, c)]; }

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
  double y(std::size_t j) const { return y0 + static_cast<double>(j) * hy; }

  bool masked(std::size_t i, std::size_t j) const { return !mask.empty() && mask[j * nx + i] != 0; }
  void set_masked(std::size_t i, std::size_t j, bool m) {
    if (mask.empty()) mask.assign(nx * ny, 0);
    mask[j * nx + i] = m ? 1 : 0;
  }
  bool interior(std::size_t i, std::size_t j) const { return i > 0 && j > 0 && i + 1 < nx && j + 1 < ny; }

  double cell_area() const { return hx * hy; }

  template <class F>
  void fill(F&& f, std::size_t c = 0) {
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) at(i, j, c) = f(x(i), y(j));
  }

  /// Extracts one component as a scalar field (mask preserved).
  GridField component(std::size_t c) const {
    GridField out = like(1);
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) out.at(i, j) = at(i, j, c);
    out.mask = mask;
    return out;
  }

  double max_abs(std::size_t c = 0, bool interior_only = false) const {
    double m = 0.0;
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        if (masked(i, j) || (interior_only && !interior(i, j))) continue;
        m = std::max(m, std::abs(at(i, j, c)));
      }
    return m;
  }
};

template <class F>
GridField sample_field(Chart chart, double x0, double y0, double hx, double hy, std::size_t nx, std::size_t ny,
                       F&& f) {
  GridField g(chart, x0, y0, hx, hy, nx, ny, 1);
  g.fill(std::forward<F>(f));
  return g;
}

/// Cell-centred grid covering [xa, xb] x [ya, yb] with n x m cells.
template <class F>
GridField sample_cells(Chart chart, double xa, double xb, double ya, double yb, std::size_t n, std::size_t m,
                       F&& f) {
  const double hx = (xb - xa) / static_cast<double>(n);
  const double hy = (yb - ya) / static_cast<double>(m);
  return sample_field(chart, xa + 0.5 * hx, ya + 0.5 * hy, hx, hy, n, m, std::forward<F>(f));
}

// ---------------------------------------------------------------------------
// Finite differences: second-order centred in the interior, second-order
// one-sided on the first and last sample of each line.

namespace fd {

// Along a strided line of n samples with spacing h.
inline double d1(const double* v, std::size_t stride, std::size_t n, std::size_t k, double h) {
  auto f = [&](std::size_t m) { return v[m * stride]; };
  if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  if (k + 1 == n) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
  return (f(k + 1) - f(k - 1)) / (2.0 * h);
}

inline double d2(const double* v, std::size_t stride, std::size_t n, std::size_t k, double h) {
  auto f = [&](std::size_t m) { return v[m * stride]; };
  if (n < 4 && (k == 0 || k + 1 == n)) {
    // Three samples only: the centred stencil is the best available.
    return (f(0) - 2.0 * f(1) + f(2)) / (h * h);
  }
  if (k == 0) return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
  if (k + 1 == n) return (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / (h * h);
  return (f(k + 1) - 2.0 * f(k) + f(k - 1)) / (h * h);
}

}  // namespace fd

/// First derivative of component c along the axis.
inline GridField diff(const GridField& f, Axis axis, std::size_t c = 0) {
  GridField out = f.like(1);
  const double* base = f.values.data();
  for (std::size_t j = 0; j < f.ny; ++j) {
    for (std::size_t i = 0; i < f.nx; ++i) {
      if (axis == Axis::X) {
        out.at(i, j) = fd::d1(base + f.index(0, j, c), f.components, f.nx, i, f.hx);
      } else {
        out.at(i, j) = fd::d1(base + f.index(i, 0, c), f.nx * f.components, f.ny, j, f.hy);
      }
    }
  }
  return out;
}

inline GridField diff2(const GridField& f, Axis axis, std::size_t c = 0) {
  GridField out = f.like(1);
  const double* base = f.values.data();
  for (std::size_t j = 0; j < f.ny; ++j) {
    for (std::size_t i = 0; i < f.nx; ++i) {
      if (axis == Axis::X) {
        out.at(i, j) = fd::d2(base + f.index(0, j, c), f.components, f.nx, i, f.hx);
      } else {
        out.at(i, j) = fd::d2(base + f.index(i, 0, c), f.nx * f.components, f.ny, j, f.hy);
      }
    }
  }
  return out;
}

/// Mixed derivative as the y-derivative of the x-derivative.
inline GridField diff_xy(const GridField& f, std::size_t c = 0) { return diff(diff(f, Axis::X, c), Axis::Y); }

/// Bilinear interpolation of component c at (x, y); points outside the grid
/// are clamped onto it.
inline double interpolate(const GridField& f, double x, double y, std::size_t c = 0) {
  const double s = std::clamp((x - f.x0) / f.hx, 0.0, static_cast<double>(f.nx - 1));
  const double t = std::clamp((y - f.y0) / f.hy, 0.0, static_cast<double>(f.ny - 1));
  const std::size_t i = std::min(static_cast<std::size_t>(s), f.nx - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(t), f.ny - 2);
  const double u = s - static_cast<double>(i);
  const double v = t - static_cast<double>(j);
  return (1 - u) * (1 - v) * f.at(i, j, c) + u * (1 - v) * f.at(i + 1, j, c) + (1 - u) * v * f.at(i, j + 1, c) +
         u * v * f.at(i + 1, j + 1, c);
}

}  // namespace ehyp
