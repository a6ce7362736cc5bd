// Acceptance run: one PASS/FAIL line per criterion, with measured values and
// wall time. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ehyp/ehyp.hpp"

using namespace ehyp;

namespace {

int failures = 0;

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [x]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void criterion(int id, const char* name, double time_limit, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("threw: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0) c.require(secs < time_limit, "time " + num(secs) + "s < " + num(time_limit) + "s");
  else c.detail += "; time " + num(secs) + "s";
  if (!c.ok) ++failures;
  std::printf("%s %2d %s: %s\n", c.ok ? "PASS" : "FAIL", id, name, c.detail.c_str());
  std::fflush(stdout);
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& e) {
  double mh = 0, me = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    mh += std::log(h[k]) / static_cast<double>(h.size());
    me += std::log(e[k]) / static_cast<double>(h.size());
  }
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    sxy += (std::log(h[k]) - mh) * (std::log(e[k]) - me);
    sxx += (std::log(h[k]) - mh) * (std::log(h[k]) - mh);
  }
  return sxy / sxx;
}

}  // namespace

int main() {
  criterion(1, "discriminant identity", 1.0, [](Check& c) {
    const std::size_t n = 201;
    double worst = 0.0;
    std::size_t mismatches = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const Point2 p{-2.0 + 4.0 * static_cast<double>(i) / (n - 1), -2.0 + 4.0 * static_cast<double>(j) / (n - 1)};
        const OperatorCoefficients k = operator_coefficients_exp2(p);
        const double expect = 1.0 - p.x * p.x - p.y * p.y;
        worst = std::max(worst, std::abs(k.discriminant() - expect));
        if (std::abs(expect) < 1e-9) continue;
        const TypeKind t = classify(k).kind;
        const Signature s = beltrami_metric(p).signature;
        if ((t == TypeKind::Elliptic) != (s == Signature::Riemannian) ||
            (t == TypeKind::Hyperbolic) != (s == Signature::Lorentzian))
          ++mismatches;
      }
    c.require(worst < 1e-12, "max |delta - (1-p^2-q^2)| = " + num(worst));
    c.require(mismatches == 0, "signature mismatches = " + std::to_string(mismatches));
  });

  criterion(2, "characteristic tangency", 5.0, [](Check& c) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rad(1.0, 2.0), ang(-std::numbers::pi, std::numbers::pi);
    double worst = 0.0, worst_dist = 0.0;
    for (int s = 0; s < 20; ++s) {
      double r = rad(rng);
      while (r <= 1.0) r = rad(rng);
      const Point2 start = from_polar(r, ang(rng));
      const CharacteristicPath path = trace_characteristic(start, s % 2 ? Branch::Minus : Branch::Plus, 1e-3, 1.0);
      const Point2 d = path.points.back() - path.points.front();
      const Line2 line = Line2::normalized(-d.y, d.x, -d.y * start.x + d.x * start.y);
      worst_dist = std::max(worst_dist, std::abs(line.distance_from_origin() - 1.0));
      for (const Point2& p : path.points) worst = std::max(worst, std::abs(line.signed_distance(p)));
    }
    c.require(worst < 1e-6, "max distance to line = " + num(worst));
    c.require(worst_dist < 1e-6, "max |line distance - 1| = " + num(worst_dist));
  });

  criterion(3, "multiplier identity order", 10.0, [](Check& c) {
    std::vector<double> hs, es;
    for (std::size_t n : {41u, 81u, 161u, 321u}) {
      const double h = 0.45 / static_cast<double>(n - 1);
      const PolarField f = sample_field(Chart::Polar, 1.05, -0.5, h, 1.0 / static_cast<double>(n - 1), n, n,
                                        [](double r, double t) { return r * r * t; });
      hs.push_back(h);
      es.push_back(multiplier_identity_residual(f));
    }
    const double p = fitted_order(hs, es);
    c.require(p >= 1.8, "fitted order = " + num(p) + " (residuals " + num(es[0]) + " .. " + num(es[3]) + ")");
  });

  const LensDomain lens = build_lens_domain(0.5, 0.25);

  criterion(4, "homogeneous open problem", 0.0, [&](Check& c) {
    for (std::size_t n : {16u, 32u, 64u}) {
      OpenProblemOptions opt;
      opt.resolution = n;
      const OpenProblemSolution s = solve_open_problem(lens, OpenProblemData::homogeneous(), opt);
      c.require(s.phi.max_abs() < 5.0 * s.h, "n=" + std::to_string(n) + " max|phi| = " + num(s.phi.max_abs()) +
                                                  " < 5h = " + num(5.0 * s.h));
    }
  });

  criterion(5, "over-determination gap", 0.0, [&](Check& c) {
    auto theta = [](double, double t) { return t; };
    for (std::size_t n : {16u, 32u, 64u}) {
      OpenProblemOptions opt;
      opt.resolution = n;
      const GapReport g = overdetermination_gap(lens, OpenProblemData::from_function(lens, theta),
                                                [](double, double t) { return t + 0.1; }, opt);
      c.require(std::abs(g.gap - 0.1) <= 5.0 * g.h, "n=" + std::to_string(n) + " gap = " + num(g.gap));
    }
  });

  criterion(6, "symmetric-positive checker", 1.0, [](Check& c) {
    const ScalarFn one = [](double) { return 1.0; }, minus_one = [](double) { return -1.0; };
    const FirstOrderSystem sys = build_system(TypeChangeFn::linear(0.5), 1.0);
    const AdmissibilityReport r = verify_symmetric_positive(sys, 1.0, 1.0, one, minus_one);
    c.require(r.min_det_E >= 0.5 - 1e-15, "min det E = " + num(r.min_det_E));
    if (r.kappa) {
      const Mat2& k = r.kappa->kappa_star_at_first;
      const double kerr = (k - (Mat2() << 0.5, 0.5, 0.5, 1.0).finished()).cwiseAbs().maxCoeff();
      c.require(kerr < 1e-12, "kappa* entry error = " + num(kerr));
      c.require(std::abs(r.kappa->kappa_min_eig - 0.1909830) < 1e-6, "kappa min eig = " + num(r.kappa->kappa_min_eig));
    } else {
      c.require(false, "no kappa report");
    }
    if (r.boundary) {
      const auto& m = r.boundary->mu_eigs_first;
      c.require(std::abs(m[0] - 0.5) < 1e-12 && std::abs(m[1] - 1.5) < 1e-12,
                "mu* eigs = {" + num(m[0]) + ", " + num(m[1]) + "}");
    } else {
      c.require(false, "no boundary report");
    }
    c.require(r.admissible, "preset admissible");
    const AdmissibilityReport s2 = verify_symmetric_positive(sys, 1.0, 2.0, one, minus_one);
    c.require(s2.failure_kind == ErrorKind::SingularMultiplier, "c=2 SingularMultiplier");
    const AdmissibilityReport s01 = verify_symmetric_positive(sys, 1.0, 0.1, one, minus_one);
    c.require(s01.failure_kind == ErrorKind::InadmissibleBoundary, "c=0.1 InadmissibleBoundary");
  });

  criterion(7, "strong solver convergence", 60.0, [](Check& c) {
    const ScalarFn one = [](double) { return 1.0; }, minus_one = [](double) { return -1.0; };
    const FirstOrderSystem sys = build_system(TypeChangeFn::linear(0.5), 1.0);
    const MultiplierChoice ch = choose_parameters(sys.K, 1.0, one, minus_one);
    auto u_eta = [](double e, double x) { return e * std::sin(x); };
    auto u_xi = [](double e, double x) { return 0.5 * e * e * std::cos(x); };
    auto f = [](double e, double x) {
      return e * std::sin(x) + (e - 0.5) * std::sin(x) - 0.5 * e * e * std::sin(x) + 0.5 * e * e * std::cos(x);
    };
    StrongOptions opt;
    opt.boundary_rhs = [&](double x) { return u_eta(1.0, x) - u_xi(1.0, x); };
    double err[2];
    int k = 0;
    for (std::size_t n : {32u, 64u}) {
      const DiscreteSolution s = solve_strong(sys, ch, f, one, minus_one, {n, n}, opt);
      err[k++] = strong_error_l2(s, u_eta, u_xi);
      c.require(s.boundary_defect < 10.0 * s.h,
                "n=" + std::to_string(n) + " boundary defect = " + num(s.boundary_defect) + " < 10h");
    }
    c.require(err[0] / err[1] >= 1.7, "L2 error ratio 32->64 = " + num(err[0] / err[1]));
  });

  criterion(8, "Hodge duality of constant fields", 0.0, [](Check& c) {
    for (double a : {0.5, 1.0, 2.0}) {
      const std::size_t n = 17;
      GridField w(Chart::Cartesian, 0.0, 0.0, 1.0 / (n - 1), 1.0 / (n - 1), n, n, 2);
      w.fill([&](double, double) { return a; }, 0);
      w.fill([](double, double) { return 0.0; }, 1);
      const DualFormResult d = dual_form(w, Density::euclidean());
      // |d sigma|^2 from one-sided differences of the returned potential.
      double worst = 0.0;
      const GridField& s = d.sigma;
      for (std::size_t j = 0; j + 1 < n; ++j)
        for (std::size_t i = 0; i + 1 < n; ++i) {
          const double sx = (s.at(i + 1, j) - s.at(i, j)) / s.hx, sy = (s.at(i, j + 1) - s.at(i, j)) / s.hy;
          worst = std::max(worst, std::abs(sx * sx + sy * sy - a * a / (1.0 + a * a)));
        }
      c.require(d.source_residual < 1e-10 && d.max_dual_residual < 1e-10,
                "c=" + num(a) + " residuals " + num(d.source_residual) + ", " + num(d.max_dual_residual));
      c.require(worst < 1e-10, "c=" + num(a) + " ||dsigma|^2 - c^2/(1+c^2)| = " + num(worst));
    }
  });

  criterion(9, "energy closed forms", 0.0, [](Check& c) {
    const Density e = Density::euclidean(), m = Density::minkowski();
    c.require(std::abs(e.primitive(3.0) - 2.0) < 1e-10 && std::abs(e.primitive_numeric(3.0) - 2.0) < 1e-10,
              "euclidean e(3) = " + num(e.primitive(3.0)) + ", quadrature " + num(e.primitive_numeric(3.0)));
    c.require(std::abs(m.primitive(0.75) - 1.0) < 1e-10 && std::abs(m.primitive_numeric(0.75) - 1.0) < 1e-10,
              "minkowski e(0.75) = " + num(m.primitive(0.75)) + ", quadrature " + num(m.primitive_numeric(0.75)));
    const SonicLocus s = sonic_Q(Density::polytropic(1.4));
    c.require(s.kind == SonicKind::Root && std::abs(s.q - 5.0 / 6.0) < 1e-10, "sonic Q = " + num(s.q));
  });

  criterion(10, "Liouville truth table", 0.0, [](Check& c) {
    c.require(liouville_verdict(5, 0.5, true, true, true).verdict == Verdict::Applies, "(5, 0.5) Applies");
    bool four = true;
    for (double k : {-2.0, 0.0, 0.5, 3.0}) four = four && liouville_verdict(4, k, true, true, true).verdict == Verdict::DoesNotApply;
    c.require(four, "(4, *) DoesNotApply");
    c.require(liouville_verdict(6, 3.0, true, true, true).verdict == Verdict::DoesNotApply, "(6, 3) DoesNotApply");
    const std::vector<double> r{0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> E;
    for (double x : r) E.push_back(7.0 * x * x);
    const GrowthFit g = growth_fit(r, E);
    c.require(std::abs(g.k - 2.0) < 1e-6, "7r^2 fit k = " + num(g.k));
    const RadialEnergyProfile p =
        conformal_profile(FieldSampler::constant(5, 1.0), Density::unit(), {0.5, 1.0, 1.5, 2.0, 2.5});
    bool strict = true;
    for (std::size_t i = 1; i < p.conformal.size(); ++i) strict = strict && p.conformal[i] > p.conformal[i - 1];
    c.require(strict, "constant-Q n=5 conformal column strictly increasing");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
