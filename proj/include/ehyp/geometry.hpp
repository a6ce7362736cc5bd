#pragma once

// Metrics, type classification, characteristics and the lens domain built
// from the polar lines of a chord of the unit disc.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ehyp/error.hpp"

namespace ehyp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;

  double norm() const { return std::hypot(x, y); }
  double dot(Point2 o) const { return x * o.x + y * o.y; }
  double cross(Point2 o) const { return x * o.y - y * o.x; }
};

inline Point2 from_polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

// Components of a symmetric 2x2 form g11 dx^2 + 2 g12 dx dy + g22 dy^2.
struct Sym2 {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;

  double det() const { return g11 * g22 - g12 * g12; }
  friend Sym2 operator+(Sym2 a, Sym2 b) { return {a.g11 + b.g11, a.g12 + b.g12, a.g22 + b.g22}; }
  friend Sym2 operator*(double s, Sym2 a) { return {s * a.g11, s * a.g12, s * a.g22}; }
};

enum class Signature { Riemannian, Lorentzian, Degenerate };

inline const char* to_string(Signature s) {
  switch (s) {
    case Signature::Riemannian: return "Riemannian";
    case Signature::Lorentzian: return "Lorentzian";
    case Signature::Degenerate: return "Degenerate";
  }
  return "?";
}

struct MetricTensor2 {
  double g11 = 1.0;
  double g12 = 0.0;
  double g22 = 1.0;
  Signature signature = Signature::Riemannian;

  double det() const { return g11 * g22 - g12 * g12; }

  // A metric with g11 < 0 and det > 0 is negative definite; the
  // variational metrics here never produce one, so it is tagged Degenerate.
  static MetricTensor2 from_components(double g11, double g12, double g22, double tol = 1e-12) {
    MetricTensor2 g{g11, g12, g22, Signature::Degenerate};
    const double d = g.det();
    if (std::abs(d) <= tol) {
      g.signature = Signature::Degenerate;
    } else if (d < 0.0) {
      g.signature = Signature::Lorentzian;
    } else {
      g.signature = g11 > 0.0 ? Signature::Riemannian : Signature::Degenerate;
    }
    return g;
  }
};

// Principal part alpha u_xx + 2 beta u_xy + gamma u_yy.
struct OperatorCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double discriminant() const { return alpha * gamma - beta * beta; }
};

enum class TypeKind { Elliptic, Hyperbolic, Parabolic };

inline const char* to_string(TypeKind k) {
  switch (k) {
    case TypeKind::Elliptic: return "Elliptic";
    case TypeKind::Hyperbolic: return "Hyperbolic";
    case TypeKind::Parabolic: return "Parabolic";
  }
  return "?";
}

struct TypeClass {
  TypeKind kind = TypeKind::Parabolic;
  double discriminant = 0.0;
  double tolerance = 0.0;
};

inline constexpr double kDefaultParabolicTol = 1e-10;

/// Beltrami's projective-disc metric
///   ds^2 = [(1 - y^2) dx^2 + 2xy dx dy + (1 - x^2) dy^2] / (1 - x^2 - y^2)^2.
/// Throws MetricSingular on the absolute |1 - x^2 - y^2| <= tol.
inline MetricTensor2 beltrami_metric(Point2 p, double tol = 1e-12) {
  const double d = 1.0 - p.x * p.x - p.y * p.y;
  if (std::abs(d) <= tol) {
    fail(ErrorKind::MetricSingular, "point lies on the absolute (unit circle)");
  }
  const double d2 = d * d;
  MetricTensor2 g{(1.0 - p.y * p.y) / d2, p.x * p.y / d2, (1.0 - p.x * p.x) / d2, Signature::Degenerate};
  // det g = 1 / d^3, so the sign of d alone decides the signature.
  g.signature = d > 0.0 ? Signature::Riemannian : Signature::Lorentzian;
  return g;
}

/// Principal part of the linearized (hodograph) extremal-surface equation at
/// (p, q): (1 - p^2) u_pp - 2pq u_pq + (1 - q^2) u_qq.
inline OperatorCoefficients operator_coefficients_exp2(Point2 pq) {
  return {1.0 - pq.x * pq.x, -pq.x * pq.y, 1.0 - pq.y * pq.y};
}

inline TypeClass classify(const OperatorCoefficients& c, double tol = kDefaultParabolicTol) {
  require(tol >= 0.0, ErrorKind::InvalidArgument, "classification tolerance must be nonnegative");
  const double disc = c.discriminant();
  TypeKind kind = TypeKind::Parabolic;
  if (disc > tol) {
    kind = TypeKind::Elliptic;
  } else if (disc < -tol) {
    kind = TypeKind::Hyperbolic;
  }
  return {kind, disc, tol};
}

// ---------------------------------------------------------------------------
// Characteristics of (a^2 - x^2) dy^2 + 2xy dx dy + (a^2 - y^2) dx^2 = 0.

/// A characteristic slope dy/dx, or the vertical direction x = const.
struct Slope {
  bool vertical = false;
  double value = 0.0;

  // Vertical sorts above every finite slope.
  friend bool operator<(const Slope& a, const Slope& b) {
    if (a.vertical != b.vertical) return b.vertical;
    return a.value < b.value;
  }
};

/// Real roots m of (a^2 - x^2) m^2 + 2xy m + (a^2 - y^2) = 0, sorted with the
/// largest slope first. An empty result marks an elliptic point. When the
/// leading coefficient vanishes the lost root is reported as a vertical marker.
inline std::vector<Slope> characteristic_slopes(Point2 p, double a = 1.0, double tol = 1e-12) {
  require(a > 0.0, ErrorKind::InvalidArgument, "characteristic radius a must be positive");
  const double qa = a * a - p.x * p.x;
  const double qb = 2.0 * p.x * p.y;
  const double qc = a * a - p.y * p.y;
  std::vector<Slope> out;

  if (std::abs(qa) <= tol * a * a) {
    out.push_back({true, 0.0});
    if (std::abs(qb) > tol * a * a) out.push_back({false, -qc / qb});
  } else {
    // Discriminant of the quadratic: 4 a^2 (x^2 + y^2 - a^2).
    const double rr = p.x * p.x + p.y * p.y - a * a;
    if (rr < -tol * a * a) return out;
    if (rr <= tol * a * a) {
      out.push_back({false, -qb / (2.0 * qa)});
    } else {
      const double sq = a * std::sqrt(rr);
      // Stable quadratic roots: avoid cancellation between -xy and sq.
      const double qq = -(p.x * p.y + std::copysign(sq, p.x * p.y == 0.0 ? 1.0 : p.x * p.y));
      double m1 = qq / qa;
      double m2 = qc / qq;
      out.push_back({false, m1});
      out.push_back({false, m2});
    }
  }
  std::sort(out.begin(), out.end(), [](const Slope& u, const Slope& v) { return v < u; });
  return out;
}

/// Unit null directions of the characteristic form at p: zero (elliptic),
/// one (on the circle r = a), or two (outside).
inline std::vector<Point2> characteristic_directions(Point2 p, double a = 1.0, double tol = 1e-12) {
  const double r2 = p.x * p.x + p.y * p.y;
  const double a2 = a * a;
  std::vector<Point2> dirs;
  if (r2 < a2 * (1.0 - tol)) return dirs;
  if (r2 <= a2 * (1.0 + tol)) {
    const double r = std::sqrt(r2);
    dirs.push_back({-p.y / r, p.x / r});
    return dirs;
  }
  // Quadratic form M = [[a^2 - y^2, xy], [xy, a^2 - x^2]] acting on (dx, dy);
  // trace 2a^2 - r^2, det a^2 (a^2 - r^2) < 0 here.
  const double m11 = a2 - p.y * p.y;
  const double m12 = p.x * p.y;
  const double m22 = a2 - p.x * p.x;
  const double half_tr = 0.5 * (m11 + m22);
  const double disc = std::hypot(0.5 * (m11 - m22), m12);
  const double lam1 = half_tr + disc;  // > 0
  const double lam2 = half_tr - disc;  // < 0
  // Eigenvector for lam1.
  Point2 e1;
  if (std::abs(m12) > 0.0 || m11 < m22) {
    if (m11 >= m22) {
      e1 = {lam1 - m22, m12};
    } else {
      e1 = {m12, lam1 - m11};
    }
  } else {
    e1 = {1.0, 0.0};
  }
  const double n1 = e1.norm();
  e1 = (1.0 / n1) * e1;
  const Point2 e2{-e1.y, e1.x};
  const double w1 = std::sqrt(-lam2);
  const double w2 = std::sqrt(lam1);
  for (double s : {1.0, -1.0}) {
    Point2 d = w1 * e1 + (s * w2) * e2;
    dirs.push_back((1.0 / d.norm()) * d);
  }
  return dirs;
}

namespace detail {

inline Slope slope_of(Point2 d) {
  if (std::abs(d.x) <= 1e-14 * std::abs(d.y)) return {true, 0.0};
  return {false, d.y / d.x};
}

}  // namespace detail

enum class Branch { Plus, Minus };

struct CharacteristicPath {
  std::vector<Point2> points;
  double step = 0.0;
  Branch branch = Branch::Plus;
  double length = 0.0;
  bool reached_circle = false;
};

/// Traces a characteristic of the radius-a form with a fixed-step classical
/// Runge-Kutta scheme on the unit direction field. Branch Plus starts on the
/// larger slope (vertical counts as largest); the direction is oriented
/// outward (d . p > 0), or counterclockwise for Plus / clockwise for Minus
/// when starting on the circle. Later steps follow the root nearest the
/// previous direction.
inline CharacteristicPath trace_characteristic(Point2 start, Branch branch, double step, double max_len,
                                               double a = 1.0, double tol = 1e-10) {
  require(step > 0.0, ErrorKind::InvalidArgument, "step must be positive");
  require(max_len > 0.0, ErrorKind::InvalidArgument, "max_len must be positive");
  require(a > 0.0, ErrorKind::InvalidArgument, "characteristic radius a must be positive");

  auto dirs = characteristic_directions(start, a, tol);
  if (dirs.empty()) {
    fail(ErrorKind::DegenerateDirection, "no real characteristic directions at an elliptic point");
  }

  Point2 dir;
  if (dirs.size() == 1) {
    dir = dirs[0];
    const bool ccw = start.cross(dir) > 0.0;
    if (ccw != (branch == Branch::Plus)) dir = -1.0 * dir;
  } else {
    const Slope s0 = detail::slope_of(dirs[0]);
    const Slope s1 = detail::slope_of(dirs[1]);
    if (!(s0 < s1) && !(s1 < s0)) {
      fail(ErrorKind::DegenerateDirection, "characteristic branches coincide off the circle");
    }
    const bool first_is_larger = s1 < s0;
    dir = (first_is_larger == (branch == Branch::Plus)) ? dirs[0] : dirs[1];
    if (dir.dot(start) < 0.0) dir = -1.0 * dir;
  }

  // Returns the characteristic direction at p closest to prev, or nullopt
  // once p has left the hyperbolic region.
  auto field = [&](Point2 p, Point2 prev) -> std::optional<Point2> {
    auto ds = characteristic_directions(p, a, tol);
    if (ds.empty()) return std::nullopt;
    Point2 best = ds[0];
    double best_dot = std::abs(best.dot(prev));
    for (std::size_t i = 1; i < ds.size(); ++i) {
      const double d = std::abs(ds[i].dot(prev));
      if (d > best_dot) {
        best = ds[i];
        best_dot = d;
      }
    }
    if (best.dot(prev) < 0.0) best = -1.0 * best;
    return best;
  };

  CharacteristicPath path;
  path.step = step;
  path.branch = branch;
  path.points.push_back(start);
  Point2 p = start;
  double travelled = 0.0;
  while (travelled < max_len * (1.0 - 1e-12)) {
    const double h = std::min(step, max_len - travelled);
    auto k1 = field(p, dir);
    if (!k1) break;
    auto k2 = field(p + (0.5 * h) * *k1, *k1);
    if (!k2) break;
    auto k3 = field(p + (0.5 * h) * *k2, *k2);
    if (!k3) break;
    auto k4 = field(p + h * *k3, *k3);
    if (!k4) break;
    const Point2 next = p + (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
    travelled += (next - p).norm();
    dir = *k4;
    p = next;
    path.points.push_back(p);
    if (p.norm() <= a * (1.0 + tol)) {
      path.reached_circle = true;
      break;
    }
  }
  path.length = travelled;
  return path;
}

// ---------------------------------------------------------------------------
// Lines, polar lines and the lens domain.

/// n1 x + n2 y = d with n1^2 + n2^2 = 1.
struct Line2 {
  double n1 = 1.0;
  double n2 = 0.0;
  double d = 0.0;

  static Line2 normalized(double n1, double n2, double d) {
    const double n = std::hypot(n1, n2);
    require(n > 0.0, ErrorKind::InvalidArgument, "line normal must be nonzero");
    return {n1 / n, n2 / n, d / n};
  }

  double signed_distance(Point2 p) const { return n1 * p.x + n2 * p.y - d; }
  double distance_from_origin() const { return std::abs(d); }
  // Unit direction along the line.
  Point2 direction() const { return {-n2, n1}; }
};

/// Tangent line to the unit circle at the point of polar angle phi.
inline Line2 tangent_line(double phi) { return {std::cos(phi), std::sin(phi), 1.0}; }

inline Point2 intersect(const Line2& a, const Line2& b) {
  const double det = a.n1 * b.n2 - a.n2 * b.n1;
  require(std::abs(det) > 1e-300, ErrorKind::InvalidArgument, "parallel lines do not intersect");
  return {(a.d * b.n2 - a.n2 * b.d) / det, (a.n1 * b.d - a.d * b.n1) / det};
}

struct PolarLines {
  Line2 lower;
  Line2 upper;
  Point2 pole;
};

inline PolarLines polar_lines_of_chord(double x0) {
  if (!(x0 > 0.0 && x0 < 1.0)) fail(ErrorKind::InvalidChord, "chord abscissa must lie in (0, 1)");
  const double y0 = std::sqrt(1.0 - x0 * x0);
  return {Line2{x0, -y0, 1.0}, Line2{x0, y0, 1.0}, Point2{1.0 / x0, 0.0}};
}

enum class SegmentKind { EllipticArc, ParabolicArc, CharacteristicSegment, RadialSegment };

inline const char* to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::EllipticArc: return "EllipticArc";
    case SegmentKind::ParabolicArc: return "ParabolicArc";
    case SegmentKind::CharacteristicSegment: return "CharacteristicSegment";
    case SegmentKind::RadialSegment: return "RadialSegment";
  }
  return "?";
}

struct BoundarySegment {
  SegmentKind kind;
  Point2 start;
  Point2 end;
  // Arcs only: radius and signed angular sweep from theta_start to theta_end.
  double radius = 0.0;
  double theta_start = 0.0;
  double theta_end = 0.0;
  // False for the sonic arc, which separates the elliptic and hyperbolic parts.
  bool outer = true;
};

enum class LensRegion { Outside, Elliptic, Hyperbolic };

/// A characteristic leaf: the two polar lines of the chord x = tau, cut at
/// their tangent points and meeting at the pole (1/tau, 0).
struct FoliationLeaf {
  double tau = 0.0;
  Point2 pole;
  Point2 upper_foot;
  Point2 lower_foot;
};

struct LensDomain {
  double x0 = 0.5;
  double eps = 0.25;
  double theta0 = std::numbers::pi / 3.0;
  Point2 pole;
  PolarLines polar;
  std::vector<BoundarySegment> segments;

  const BoundarySegment& sonic_arc() const {
    for (const auto& s : segments)
      if (s.kind == SegmentKind::ParabolicArc) return s;
    fail(ErrorKind::InvalidArgument, "lens domain has no sonic arc");
  }

  LensRegion region_polar(double r, double theta, double tol = 1e-12) const {
    if (std::abs(theta) > theta0 + tol || r < eps - tol) return LensRegion::Outside;
    if (r < 1.0) return LensRegion::Elliptic;
    const double delta = std::acos(std::min(1.0, 1.0 / r));
    return std::abs(theta) + delta <= theta0 + tol ? LensRegion::Hyperbolic : LensRegion::Outside;
  }

  LensRegion region(Point2 p, double tol = 1e-12) const {
    return region_polar(p.norm(), std::atan2(p.y, p.x), tol);
  }

  FoliationLeaf leaf(double tau) const {
    require(tau >= x0 && tau < 1.0, ErrorKind::InvalidArgument, "leaf parameter must lie in [x0, 1)");
    const double phi = std::acos(tau);
    return {tau, {1.0 / tau, 0.0}, from_polar(1.0, phi), from_polar(1.0, -phi)};
  }

  /// count leaves ordered by decreasing radial distance of their poles,
  /// starting with the polar lines of the chord x = x0.
  std::vector<FoliationLeaf> foliation(std::size_t count) const {
    std::vector<FoliationLeaf> leaves;
    leaves.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double tau = x0 + (1.0 - x0) * static_cast<double>(i) / static_cast<double>(count);
      leaves.push_back(leaf(tau));
    }
    return leaves;
  }
};

/// Boundary listed counterclockwise from (eps, -theta0); the sonic arc is
/// appended last with outer = false.
inline LensDomain build_lens_domain(double x0, double eps) {
  if (!(x0 > 0.0 && x0 < 1.0)) fail(ErrorKind::InvalidChord, "chord abscissa must lie in (0, 1)");
  if (!(eps > 0.0 && eps < x0)) fail(ErrorKind::InvalidChord, "inner radius must satisfy 0 < eps < x0");
  LensDomain dom;
  dom.x0 = x0;
  dom.eps = eps;
  dom.theta0 = std::acos(x0);
  dom.polar = polar_lines_of_chord(x0);
  dom.pole = dom.polar.pole;
  const double t0 = dom.theta0;
  const Point2 lower_foot = from_polar(1.0, -t0);
  const Point2 upper_foot = from_polar(1.0, t0);
  dom.segments = {
      {SegmentKind::RadialSegment, from_polar(eps, -t0), lower_foot},
      {SegmentKind::CharacteristicSegment, lower_foot, dom.pole},
      {SegmentKind::CharacteristicSegment, dom.pole, upper_foot},
      {SegmentKind::RadialSegment, upper_foot, from_polar(eps, t0)},
      {SegmentKind::EllipticArc, from_polar(eps, t0), from_polar(eps, -t0), eps, t0, -t0},
      {SegmentKind::ParabolicArc, lower_foot, upper_foot, 1.0, -t0, t0, false},
  };
  return dom;
}

// ---------------------------------------------------------------------------
// Flow metrics.

enum class FlowKind { Continuity, MinimalEuclidean, MinkowskiGraph };

/// Flow metric split as conformal_factor (dx^2 + dy^2) + non_euclidean.
struct FlowMetric {
  double conformal_factor = 1.0;
  Sym2 non_euclidean;
  MetricTensor2 metric;
};

/// Velocity (u, v) = d psi. Continuity: c^2 (dx^2 + dy^2) - (*d psi)^2 with
/// *d psi = u dy - v dx; MinimalEuclidean: dx^2 + dy^2 + d psi^2;
/// MinkowskiGraph: dx^2 + dy^2 - d psi^2.
inline FlowMetric flow_metric(FlowKind kind, double u, double v, double gamma_ad = 1.4) {
  FlowMetric fm;
  switch (kind) {
    case FlowKind::Continuity: {
      require(gamma_ad > 1.0, ErrorKind::InvalidArgument, "adiabatic constant must exceed 1");
      const double q2 = u * u + v * v;
      if (q2 >= 2.0 / (gamma_ad - 1.0) * (1.0 - 1e-12)) fail(ErrorKind::Cavitation, "speed at or beyond the cavitation bound");
      fm.conformal_factor = 1.0 - 0.5 * (gamma_ad - 1.0) * q2;
      fm.non_euclidean = {-v * v, u * v, -u * u};
      break;
    }
    case FlowKind::MinimalEuclidean:
      fm.non_euclidean = {u * u, u * v, v * v};
      break;
    case FlowKind::MinkowskiGraph:
      fm.non_euclidean = {-u * u, -u * v, -v * v};
      break;
  }
  const Sym2 full = Sym2{fm.conformal_factor, 0.0, fm.conformal_factor} + fm.non_euclidean;
  fm.metric = MetricTensor2::from_components(full.g11, full.g12, full.g22);
  return fm;
}

}  // namespace ehyp
