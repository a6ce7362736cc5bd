#pragma once

// Densities rho(Q) of nonlinear Hodge equations and their energy primitives
// e(Q) = int_0^Q rho(s) ds.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "ehyp/error.hpp"

namespace ehyp {

enum class DensityKind { Euclidean, Minkowski, Polytropic, Custom };

struct DensityValue {
  double rho = 0.0;
  double drho = 0.0;
  double e = 0.0;
};

class Density {
 public:
  using Fn = std::function<double(double)>;

  /// rho = 1 / sqrt(1 + Q): graphs in Euclidean 3-space.
  static Density euclidean() { return Density(DensityKind::Euclidean, "euclidean"); }

  /// rho = 1 / sqrt|1 - Q|: graphs in Minkowski 3-space. Q < 1 is space-like,
  /// Q > 1 time-like; |1 - Q| <= light_cone_tol is rejected.
  static Density minkowski(double light_cone_tol = 1e-8) {
    Density d(DensityKind::Minkowski, "minkowski");
    d.light_cone_tol_ = light_cone_tol;
    return d;
  }

  /// Isentropic gas: rho = (1 - (gamma-1)/2 Q)^(1/(gamma-1)), defined below
  /// the cavitation speed Q = 2/(gamma-1).
  static Density polytropic(double gamma_ad) {
    require(gamma_ad > 1.0, ErrorKind::InvalidArgument, "adiabatic constant must exceed 1");
    Density d(DensityKind::Polytropic, "polytropic");
    d.gamma_ = gamma_ad;
    return d;
  }

  /// User-supplied density; e(Q) by quadrature unless a primitive is given.
  static Density custom(std::string name, Fn rho, Fn drho, Fn primitive = {},
                        double q_max = std::numeric_limits<double>::infinity()) {
    Density d(DensityKind::Custom, std::move(name));
    d.rho_ = std::move(rho);
    d.drho_ = std::move(drho);
    d.primitive_ = std::move(primitive);
    d.q_max_ = q_max;
    return d;
  }

  /// rho = 1, the linear (Maxwell / Yang-Mills) case.
  static Density unit() {
    return custom("unit", [](double) { return 1.0; }, [](double) { return 0.0; }, [](double q) { return q; });
  }

  DensityKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double gamma() const { return gamma_; }
  double light_cone_tol() const { return light_cone_tol_; }

  /// Upper end of the admissible Q-range (exclusive). For Minkowski this is
  /// the light cone, the end of the space-like branch.
  double domain_bound() const {
    switch (kind_) {
      case DensityKind::Euclidean: return std::numeric_limits<double>::infinity();
      case DensityKind::Minkowski: return 1.0;
      case DensityKind::Polytropic: return 2.0 / (gamma_ - 1.0);
      case DensityKind::Custom: return q_max_;
    }
    return 0.0;
  }

  bool has_closed_primitive() const { return kind_ != DensityKind::Custom || static_cast<bool>(primitive_); }

  void check(double q) const {
    if (!(q >= 0.0)) fail(ErrorKind::InvalidArgument, "Q must be nonnegative");
    switch (kind_) {
      case DensityKind::Minkowski:
        if (std::abs(1.0 - q) <= light_cone_tol_) fail(ErrorKind::LightCone, "Q on the light cone Q = 1");
        break;
      case DensityKind::Polytropic:
        if (q >= domain_bound() * (1.0 - 1e-12)) fail(ErrorKind::Cavitation, "Q at or beyond the cavitation bound");
        break;
      case DensityKind::Custom:
        if (q >= q_max_) fail(ErrorKind::DensityDomain, "Q outside the custom density's domain");
        break;
      case DensityKind::Euclidean:
        break;
    }
  }

  double rho(double q) const {
    check(q);
    switch (kind_) {
      case DensityKind::Euclidean: return 1.0 / std::sqrt(1.0 + q);
      case DensityKind::Minkowski: return 1.0 / std::sqrt(std::abs(1.0 - q));
      case DensityKind::Polytropic: return std::pow(base(q), 1.0 / (gamma_ - 1.0));
      case DensityKind::Custom: return rho_(q);
    }
    return 0.0;
  }

  double drho(double q) const {
    check(q);
    switch (kind_) {
      case DensityKind::Euclidean: return -0.5 * std::pow(1.0 + q, -1.5);
      case DensityKind::Minkowski:
        // d/dQ |1 - Q|^{-1/2} = (1/2) sign(1 - Q) |1 - Q|^{-3/2}
        return 0.5 * std::copysign(1.0, 1.0 - q) * std::pow(std::abs(1.0 - q), -1.5);
      case DensityKind::Polytropic: {
        const double b = 1.0 / (gamma_ - 1.0);
        return -0.5 * std::pow(base(q), b - 1.0);
      }
      case DensityKind::Custom: return drho_(q);
    }
    return 0.0;
  }

  /// e(Q), in closed form where one exists.
  double primitive(double q) const {
    check(q);
    switch (kind_) {
      case DensityKind::Euclidean: return 2.0 * (std::sqrt(1.0 + q) - 1.0);
      case DensityKind::Minkowski:
        if (q < 1.0) return 2.0 * (1.0 - std::sqrt(1.0 - q));
        return 2.0 + 2.0 * std::sqrt(q - 1.0);
      case DensityKind::Polytropic:
        return (2.0 / gamma_) * (1.0 - std::pow(base(q), gamma_ / (gamma_ - 1.0)));
      case DensityKind::Custom:
        if (primitive_) return primitive_(q);
        return primitive_numeric(q);
    }
    return 0.0;
  }

  /// e(Q) by adaptive Gauss-Kronrod quadrature of rho, ignoring any closed form.
  double primitive_numeric(double q) const {
    check(q);
    if (q == 0.0) return 0.0;
    auto f = [this](double s) { return rho_unchecked(s); };
    if (kind_ == DensityKind::Minkowski) {
      // Integrate in t = |1 - s| so the 1/sqrt singularity sits at t = 0,
      // where tanh-sinh nodes keep full relative precision.
      boost::math::quadrature::tanh_sinh<double> ts;
      auto g = [](double t) { return 1.0 / std::sqrt(t); };
      if (q < 1.0) return ts.integrate(g, 1.0 - q, 1.0);
      return ts.integrate(g, 0.0, 1.0) + ts.integrate(g, 0.0, q - 1.0);
    }
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, q, 12, 1e-14, &err);
  }

  DensityValue evaluate(double q) const { return {rho(q), drho(q), primitive(q)}; }

 private:
  Density(DensityKind k, std::string name) : kind_(k), name_(std::move(name)) {}

  double base(double q) const { return 1.0 - 0.5 * (gamma_ - 1.0) * q; }

  double rho_unchecked(double q) const {
    switch (kind_) {
      case DensityKind::Euclidean: return 1.0 / std::sqrt(1.0 + q);
      case DensityKind::Minkowski: return 1.0 / std::sqrt(std::abs(1.0 - q));
      case DensityKind::Polytropic: return std::pow(std::max(base(q), 0.0), 1.0 / (gamma_ - 1.0));
      case DensityKind::Custom: return rho_(q);
    }
    return 0.0;
  }

  DensityKind kind_;
  std::string name_;
  double gamma_ = 1.4;
  double light_cone_tol_ = 1e-8;
  double q_max_ = std::numeric_limits<double>::infinity();
  Fn rho_;
  Fn drho_;
  Fn primitive_;
};

// ---------------------------------------------------------------------------
// Type change of the nonlinear Hodge system happens where d/dQ (Q rho^2) = 0,
// i.e. where rho + 2 Q rho' = 0.

enum class SonicKind { None, Root, SingularTransition };

struct SonicLocus {
  SonicKind kind = SonicKind::None;
  double q = std::numeric_limits<double>::quiet_NaN();
};

inline SonicLocus sonic_Q(const Density& dens) {
  switch (dens.kind()) {
    case DensityKind::Euclidean:
      // rho + 2 Q rho' = (1 + Q)^{-3/2} > 0: ellipticity only degenerates.
      return {SonicKind::None, std::numeric_limits<double>::quiet_NaN()};
    case DensityKind::Minkowski:
      return {SonicKind::SingularTransition, 1.0};
    default:
      break;
  }
  auto g = [&](double q) { return dens.rho(q) + 2.0 * q * dens.drho(q); };
  const double bound = dens.domain_bound();
  const double hi = std::isfinite(bound) ? bound : 1e6;
  // Scan for the first sign change, then refine with TOMS 748.
  constexpr int kScan = 4096;
  double qa = 0.0;
  double ga = g(qa);
  for (int s = 1; s <= kScan; ++s) {
    double qb = hi * static_cast<double>(s) / kScan;
    if (qb >= bound) qb = bound * (1.0 - 1e-12);
    const double gb = g(qb);
    if (gb == 0.0) return {SonicKind::Root, qb};
    if ((ga < 0.0) != (gb < 0.0)) {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      auto [lo, up] = boost::math::tools::toms748_solve(g, qa, qb, ga, gb, tol, iters);
      return {SonicKind::Root, 0.5 * (lo + up)};
    }
    qa = qb;
    ga = gb;
  }
  return {SonicKind::None, std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace ehyp
