#pragma once

// Energies of fields on balls in R^n, conformal energy profiles
// r^{4-n} E(B_r), power-law growth fits and the hypothesis check for the
// Liouville-type vanishing of stationary fields.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ehyp/density.hpp"
#include "ehyp/error.hpp"

namespace ehyp {

struct FieldSampler {
  std::size_t n = 2;
  // Q = |F|^2 at a point of R^n; must be pure.
  std::function<double(std::span<const double>)> q;
  // Declared by the caller; enables the monotonicity assertion.
  bool stationary = false;

  static FieldSampler constant(std::size_t n, double q0, bool stationary = false) {
    return {n, [q0](std::span<const double>) { return q0; }, stationary};
  }
};

struct BallQuadrature {
  std::size_t radial = 128;
  // Nodes per polar angle on [0, pi]; the azimuth gets twice as many.
  std::size_t angular = 8;
};

namespace detail {

struct SphereRule {
  std::vector<double> dirs;  // unit vectors, n per node
  std::vector<double> weights;
};

/// Midpoint rule on S^{n-1} in hyperspherical angles; weights carry the
/// surface element prod_m sin^{n-1-m}(phi_m).
inline SphereRule sphere_rule(std::size_t n, std::size_t angular) {
  SphereRule rule;
  const std::size_t polar = n - 2;
  const std::size_t naz = 2 * angular;
  const double hp = std::numbers::pi / static_cast<double>(angular);
  const double ha = 2.0 * std::numbers::pi / static_cast<double>(naz);
  std::vector<std::size_t> idx(polar, 0);
  std::vector<double> x(n);
  for (;;) {
    double w = 1.0;
    double sprod = 1.0;
    for (std::size_t m = 0; m < polar; ++m) {
      const double phi = (static_cast<double>(idx[m]) + 0.5) * hp;
      x[m] = sprod * std::cos(phi);
      w *= std::pow(std::sin(phi), static_cast<double>(n - 2 - m)) * hp;
      sprod *= std::sin(phi);
    }
    for (std::size_t a = 0; a < naz; ++a) {
      const double th = (static_cast<double>(a) + 0.5) * ha;
      x[n - 2] = sprod * std::cos(th);
      x[n - 1] = sprod * std::sin(th);
      rule.dirs.insert(rule.dirs.end(), x.begin(), x.end());
      rule.weights.push_back(w * ha);
    }
    std::size_t m = 0;
    while (m < polar && ++idx[m] == angular) idx[m++] = 0;
    if (m == polar) break;
  }
  return rule;
}

}  // namespace detail

/// int over B_r of e(Q), midpoint rule in the radius times the sphere rule.
inline double ball_energy(const FieldSampler& s, const Density& dens, double r, const BallQuadrature& quad = {}) {
  require(s.n >= 2, ErrorKind::InvalidArgument, "dimension must be at least 2");
  require(static_cast<bool>(s.q), ErrorKind::InvalidArgument, "sampler has no evaluator");
  require(r > 0.0, ErrorKind::InvalidArgument, "radius must be positive");
  require(quad.radial >= 1 && quad.angular >= 1, ErrorKind::InvalidArgument, "quadrature needs nodes");
  const detail::SphereRule rule = detail::sphere_rule(s.n, quad.angular);
  const std::size_t nodes = rule.weights.size();
  const double hr = r / static_cast<double>(quad.radial);
  std::vector<double> p(s.n);
  double total = 0.0;
  for (std::size_t k = 0; k < quad.radial; ++k) {
    const double rho = (static_cast<double>(k) + 0.5) * hr;
    double shell = 0.0;
    for (std::size_t a = 0; a < nodes; ++a) {
      for (std::size_t d = 0; d < s.n; ++d) p[d] = rho * rule.dirs[a * s.n + d];
      const double q = s.q(p);
      if (!(q >= 0.0)) fail(ErrorKind::DensityDomain, "sampled Q is negative or not a number");
      double e = 0.0;
      try {
        e = dens.primitive(q);
      } catch (const Error& err) {
        fail(ErrorKind::DensityDomain, std::string("sampled Q leaves the density's domain: ") + err.what());
      }
      shell += rule.weights[a] * e;
    }
    total += shell * std::pow(rho, static_cast<double>(s.n - 1)) * hr;
  }
  return total;
}

struct RadialEnergyProfile {
  std::size_t n = 0;
  double q_crit = std::numeric_limits<double>::infinity();
  std::vector<double> radii;
  std::vector<double> energy;
  std::vector<double> conformal;  // r^{4-n} E(B_r)
  bool energy_nondecreasing = true;
  bool conformal_nondecreasing = true;
  // Pass/fail of the monotonicity formula; set only for stationary samplers.
  std::optional<bool> monotonicity_check;
};

inline RadialEnergyProfile conformal_profile(const FieldSampler& s, const Density& dens,
                                             const std::vector<double>& radii, const BallQuadrature& quad = {},
                                             double q_crit = std::numeric_limits<double>::infinity()) {
  require(!radii.empty(), ErrorKind::InvalidArgument, "need at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0, ErrorKind::InvalidArgument, "radii must be positive");
    require(i == 0 || radii[i] > radii[i - 1], ErrorKind::InvalidArgument, "radii must increase");
  }
  RadialEnergyProfile p;
  p.n = s.n;
  p.q_crit = q_crit;
  p.radii = radii;
  for (double r : radii) {
    const double e = ball_energy(s, dens, r, quad);
    p.energy.push_back(e);
    p.conformal.push_back(std::pow(r, 4.0 - static_cast<double>(s.n)) * e);
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    p.energy_nondecreasing = p.energy_nondecreasing && p.energy[i] >= p.energy[i - 1];
    p.conformal_nondecreasing = p.conformal_nondecreasing && p.conformal[i] >= p.conformal[i - 1];
  }
  if (s.stationary) p.monotonicity_check = p.conformal_nondecreasing;
  return p;
}

struct GrowthFit {
  double C = 0.0;
  double k = -std::numeric_limits<double>::infinity();
  double residual = 0.0;  // RMS of log E - log(C r^k)
  // All energies zero: any growth condition holds.
  bool degenerate = false;
};

/// Least-squares fit of log E = log C + k log r.
inline GrowthFit growth_fit(const std::vector<double>& radii, const std::vector<double>& energy) {
  require(radii.size() == energy.size(), ErrorKind::InvalidArgument, "radii and energies differ in length");
  if (std::all_of(energy.begin(), energy.end(), [](double e) { return e == 0.0; })) {
    GrowthFit g;
    g.degenerate = true;
    return g;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0 && energy[i] >= 0.0, ErrorKind::InvalidArgument, "radii must be positive, energies nonnegative");
    if (energy[i] > 0.0) {
      x.push_back(std::log(radii[i]));
      y.push_back(std::log(energy[i]));
    }
  }
  require(x.size() >= 3, ErrorKind::InvalidArgument, "need at least three radii with positive energy");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::InvalidArgument, "radii must not all coincide");
  GrowthFit g;
  g.k = sxy / sxx;
  const double logc = my - g.k * mx;
  g.C = std::exp(logc);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - logc - g.k * x[i];
    ss += r * r;
  }
  g.residual = std::sqrt(ss / m);
  return g;
}

inline GrowthFit growth_fit(const RadialEnergyProfile& p) { return growth_fit(p.radii, p.energy); }

enum class Verdict { Applies, DoesNotApply };

inline std::string_view to_string(Verdict v) { return v == Verdict::Applies ? "Applies" : "DoesNotApply"; }

struct LiouvilleVerdict {
  std::size_t n = 0;
  double C = std::numeric_limits<double>::quiet_NaN();
  double k = 0.0;
  bool dimension_ok = false;   // n > 4
  bool growth_ok = false;      // 4 + k - n < 0
  bool rho_prime_ok = false;   // rho' <= 0
  bool bounded_ok = false;     // Q <= Q_crit
  bool stationary_ok = false;  // r-stationary
  Verdict verdict = Verdict::DoesNotApply;
  std::string reason;  // first failed hypothesis
};

/// Hypotheses are checked in order: dimension, growth, rho', boundedness,
/// stationarity. k = -inf (degenerate fit) satisfies any growth condition.
inline LiouvilleVerdict liouville_verdict(std::size_t n, double k, bool rho_prime_nonpositive, bool bounded_by_qcrit,
                                          bool stationary, double C = std::numeric_limits<double>::quiet_NaN()) {
  LiouvilleVerdict v;
  v.n = n;
  v.k = k;
  v.C = C;
  v.dimension_ok = n > 4;
  v.growth_ok = 4.0 + k - static_cast<double>(n) < 0.0;
  v.rho_prime_ok = rho_prime_nonpositive;
  v.bounded_ok = bounded_by_qcrit;
  v.stationary_ok = stationary;
  if (!v.dimension_ok) {
    v.reason = "n > 4 fails";
  } else if (!v.growth_ok) {
    v.reason = "growth 4 + k - n < 0 fails";
  } else if (!v.rho_prime_ok) {
    v.reason = "rho' <= 0 fails";
  } else if (!v.bounded_ok) {
    v.reason = "Q bounded by Q_crit fails";
  } else if (!v.stationary_ok) {
    v.reason = "field not declared stationary";
  }
  v.verdict = v.reason.empty() ? Verdict::Applies : Verdict::DoesNotApply;
  return v;
}

inline LiouvilleVerdict liouville_verdict(std::size_t n, const GrowthFit& fit, bool rho_prime_nonpositive,
                                          bool bounded_by_qcrit, bool stationary) {
  return liouville_verdict(n, fit.k, rho_prime_nonpositive, bounded_by_qcrit, stationary, fit.C);
}

}  // namespace ehyp
