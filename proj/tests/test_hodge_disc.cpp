#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ehyp/hodge_disc.hpp"

using namespace ehyp;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an ehyp::Error";
  return ErrorKind::ConfigError;
}

// Polar field on [ra, rb] x [ta, tb] with n radial and m angular samples.
template <class F>
PolarField polar(double ra, double rb, double ta, double tb, std::size_t n, std::size_t m, F&& f) {
  return sample_field(Chart::Polar, ra, ta, (rb - ra) / static_cast<double>(n - 1), (tb - ta) / static_cast<double>(m - 1),
                      n, m, std::forward<F>(f));
}

// max |phi - exact| over unmasked samples of a solver output.
template <class F>
double solution_error(const OpenProblemSolution& s, F&& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < s.phi.ny; ++j)
    for (std::size_t i = 0; i < s.phi.nx; ++i)
      if (!s.phi.masked(i, j)) e = std::max(e, std::abs(s.phi.at(i, j) - exact(s.phi.x(i), s.phi.y(j))));
  return e;
}

const LensDomain& preset() {
  static const LensDomain d = build_lens_domain(0.5, 0.25);
  return d;
}

}  // namespace

TEST(PolarResidual, Examples) {
  const auto c = polar(0.3, 1.6, -1, 1, 21, 21, [](double, double) { return 3.0; });
  EXPECT_EQ(polar_residual(c).max_abs(), 0.0);
  const auto t = polar(0.3, 1.6, -1, 1, 21, 21, [](double, double th) { return th; });
  EXPECT_LT(polar_residual(t).max_abs(), 1e-12);
  const auto r2 = polar(0.3, 1.6, -1, 1, 21, 21, [](double r, double) { return r * r; });
  const PolarField res = polar_residual(r2);
  for (std::size_t j = 0; j < res.ny; ++j)
    for (std::size_t i = 0; i < res.nx; ++i) {
      const double r = res.x(i);
      EXPECT_NEAR(res.at(i, j), 4 * r * r - 6 * r * r * r * r, 1e-11);
    }
}

TEST(PolarResidual, RequiresPolarChart) {
  GridField g(Chart::Cartesian, 0.5, 0, 0.1, 0.1, 5, 5);
  EXPECT_EQ(kind_of([&] { polar_residual(g); }), ErrorKind::InvalidArgument);
  GridField z(Chart::Polar, 0.0, 0, 0.1, 0.1, 5, 5);
  EXPECT_EQ(kind_of([&] { polar_residual(z); }), ErrorKind::InvalidArgument);
}

TEST(PsiPair, Examples) {
  const AuxiliaryPair c = psi_pair(polar(0.3, 1.6, -1, 1, 11, 11, [](double, double) { return 1.0; }));
  EXPECT_EQ(c.psi1.max_abs(), 0.0);
  EXPECT_EQ(c.psi2.max_abs(), 0.0);

  const AuxiliaryPair a = psi_pair(polar(0.3, 1.6, -1, 1, 11, 11, [](double r, double) { return r * r; }));
  for (std::size_t j = 0; j < 11; ++j)
    for (std::size_t i = 0; i < 11; ++i) {
      const double r = a.psi1.x(i);
      EXPECT_NEAR(a.psi1.at(i, j), 4 * std::pow(r, 4) * (1 - r * r), 1e-12);
      EXPECT_NEAR(a.psi2.at(i, j), 0.0, 1e-13);
    }

  const AuxiliaryPair t = psi_pair(polar(0.3, 1.6, -1, 1, 11, 11, [](double, double th) { return th; }));
  for (double v : t.psi1.values) EXPECT_NEAR(v, -1.0, 1e-13);
  for (double v : t.psi2.values) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(MultiplierIdentity, ConstantIsExact) {
  EXPECT_EQ(multiplier_identity_residual(polar(0.3, 1.6, -1, 1, 11, 11, [](double, double) { return 2.0; })), 0.0);
}

TEST(MultiplierIdentity, RadialSquareConverges) {
  double prev = 0.0;
  for (std::size_t n : {41u, 81u, 161u, 321u}) {
    const double e = multiplier_identity_residual(polar(0.3, 1.6, -1, 1, n, n, [](double r, double) { return r * r; }));
    if (prev > 0.0) {
      EXPECT_GT(prev / e, 3.5) << n;
    }
    prev = e;
  }
}

TEST(MultiplierIdentityProperty, SecondOrderOnSmoothFields) {
  using Fn = double (*)(double, double);
  const Fn fields[] = {
      [](double r, double t) { return r * r * t; },
      [](double r, double t) { return std::sin(2 * t) * std::exp(r); },
      [](double r, double t) { return std::cos(r * t) + r; },
  };
  for (Fn f : fields) {
    std::vector<double> hs, es;
    for (std::size_t n : {41u, 81u, 161u, 321u}) {
      const PolarField p = polar(1.05, 1.5, -0.5, 0.5, n, n, f);
      hs.push_back(std::log(p.hx));
      es.push_back(std::log(multiplier_identity_residual(p)));
    }
    // Least-squares slope of log e against log h.
    const double mh = (hs[0] + hs[1] + hs[2] + hs[3]) / 4, me = (es[0] + es[1] + es[2] + es[3]) / 4;
    double sxy = 0, sxx = 0;
    for (int k = 0; k < 4; ++k) {
      sxy += (hs[k] - mh) * (es[k] - me);
      sxx += (hs[k] - mh) * (hs[k] - mh);
    }
    const double order = sxy / sxx;
    EXPECT_GE(order, 1.8);
  }
}

TEST(ChiReconstruct, Examples) {
  const auto c = chi_reconstruct(psi_pair(polar(0.3, 1.6, -1, 1, 9, 9, [](double, double) { return 1.0; })), 0, 0);
  EXPECT_EQ(c.chi.max_abs(), 0.0);
  EXPECT_EQ(c.defect, 0.0);

  const auto t = chi_reconstruct(psi_pair(polar(0.3, 1.6, -1, 1, 9, 9, [](double, double th) { return th; })), 4, 4);
  for (std::size_t j = 0; j < 9; ++j)
    for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(t.chi.at(i, j), -t.chi.y(j), 1e-13);
  EXPECT_LT(t.defect, 1e-13);

  const auto r2 = chi_reconstruct(psi_pair(polar(0.3, 1.6, -1, 1, 33, 33, [](double r, double) { return r * r; })), 0, 0);
  EXPECT_GT(r2.defect, 0.1);
}

TEST(ChiReconstruct, SolutionDefectShrinks) {
  // phi = theta + arccos(1/r) solves the wave form of L in r > 1.
  auto f = [](double r, double t) { return t + std::acos(1.0 / r); };
  double prev = 0.0;
  for (std::size_t n : {17u, 33u, 65u}) {
    const auto chi = chi_reconstruct(psi_pair(polar(1.1, 1.5, -0.5, 0.5, n, n, f)), 0, 0);
    if (prev > 0.0) {
      EXPECT_LT(chi.defect, prev / 3.0);
    }
    prev = chi.defect;
  }
}

TEST(ChiCharacteristicDerivative, Examples) {
  const auto path = trace_characteristic(from_polar(1.2, 0.0), Branch::Plus, 1e-3, 0.2);
  const auto c = chi_characteristic_derivative(polar(1.05, 1.5, -0.5, 0.5, 21, 21, [](double, double) { return 1.0; }), path);
  for (const auto& s : c) EXPECT_EQ(s.formula, 0.0);
  const auto t = chi_characteristic_derivative(polar(1.05, 1.5, -0.5, 0.5, 21, 21, [](double, double th) { return th; }), path);
  for (const auto& s : t) EXPECT_NEAR(s.formula, -1.0, 1e-12);
  const auto r2 = chi_characteristic_derivative(polar(1.05, 1.5, -0.5, 0.5, 21, 21, [](double r, double) { return r * r; }), path);
  for (const auto& s : r2) EXPECT_LE(s.formula, 0.0);
}

TEST(ChiCharacteristicDerivative, OutsideHyperbolicRegion) {
  const auto path = trace_characteristic(from_polar(1.2, 0.0), Branch::Plus, 1e-3, 0.2);
  CharacteristicPath inside = path;
  inside.points.front() = from_polar(0.9, 0.0);
  const auto f = polar(0.5, 1.5, -0.5, 0.5, 21, 21, [](double, double th) { return th; });
  EXPECT_EQ(kind_of([&] { chi_characteristic_derivative(f, inside); }), ErrorKind::OutsideHyperbolicRegion);
}

TEST(ChiCharacteristicDerivative, MatchesDifferencedChiForSolutions) {
  // For a solution chi is path independent and its derivative along a
  // characteristic equals the squared form.
  auto f = [](double r, double t) { return std::sin(t - std::acos(1.0 / r)) + 0.5 * (t + std::acos(1.0 / r)); };
  const PolarField phi = polar(1.05, 1.5, -0.5, 0.5, 161, 161, f);
  const ChiField chi = chi_reconstruct(psi_pair(phi), 80, 80);
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const auto path = trace_characteristic(from_polar(1.2, 0.0), b, 1e-2, 0.15);
    const auto samples = chi_characteristic_derivative(phi, path, &chi);
    std::size_t compared = 0;
    for (const auto& s : samples) {
      if (std::isnan(s.differenced)) continue;
      EXPECT_NEAR(s.differenced, s.formula, 5e-3) << "r=" << s.r << " theta=" << s.theta;
      ++compared;
    }
    EXPECT_GT(compared, 5u);
  }
}

TEST(ChiCharacteristicDerivativeProperty, FormulaIsNonpositive) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0), rad(1.1, 1.3), ang(-0.2, 0.2);
  for (int s = 0; s < 30; ++s) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const PolarField phi = polar(1.05, 1.5, -0.5, 0.5, 21, 21,
                                 [&](double r, double t) { return a * r * r + b * std::sin(c * t) + a * b * r * t; });
    for (Branch br : {Branch::Plus, Branch::Minus}) {
      const auto path = trace_characteristic(from_polar(rad(rng), ang(rng)), br, 1e-3, 0.1);
      for (const auto& smp : chi_characteristic_derivative(phi, path)) ASSERT_LE(smp.formula, 0.0);
    }
  }
}

TEST(OpenProblem, HomogeneousDataGivesZero) {
  for (std::size_t n : {16u, 32u, 64u}) {
    OpenProblemOptions opt;
    opt.resolution = n;
    const auto sol = solve_open_problem(preset(), OpenProblemData::homogeneous(), opt);
    EXPECT_LT(sol.phi.max_abs(), 5.0 * sol.h);
    double nu = 0.0;
    for (double v : sol.nu_trace) nu = std::max(nu, std::abs(v));
    EXPECT_LT(nu, 5.0 * sol.h);
  }
}

TEST(OpenProblem, GridStraddlesSonicArc) {
  OpenProblemOptions opt;
  opt.resolution = 16;
  const auto sol = solve_open_problem(preset(), OpenProblemData::homogeneous(), opt);
  const std::size_t n = sol.elliptic_rows;
  EXPECT_NEAR(0.5 * (sol.phi.x(n - 1) + sol.phi.x(n)), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(sol.phi.x0, 0.25);
  ASSERT_EQ(sol.residuals.size(), 2u);
  EXPECT_EQ(sol.residuals[0].region, "elliptic");
  EXPECT_EQ(sol.residuals[1].region, "hyperbolic");
}

TEST(OpenProblem, RecoversTheta) {
  // theta is reproduced by both the five-point scheme and the leaf formula,
  // so only rounding remains.
  for (std::size_t n : {16u, 32u, 64u}) {
    OpenProblemOptions opt;
    opt.resolution = n;
    const auto data = OpenProblemData::from_function(preset(), [](double, double t) { return t; });
    const auto sol = solve_open_problem(preset(), data, opt);
    EXPECT_LT(solution_error(sol, [](double, double t) { return t; }), 1e-12);
  }
}

TEST(OpenProblem, ManufacturedInhomogeneous) {
  auto exact = [](double r, double t) { return r * r * t; };
  auto source = [](double r, double t) { return t * (4 * r * r - 6 * std::pow(r, 4)); };
  std::vector<double> errs, hs;
  for (std::size_t n : {16u, 32u, 64u}) {
    OpenProblemOptions opt;
    opt.resolution = n;
    const auto sol = solve_open_problem(preset(), OpenProblemData::from_function(preset(), exact, source), opt);
    errs.push_back(solution_error(sol, exact));
    hs.push_back(sol.h);
    EXPECT_LT(errs.back(), hs.back());
    EXPECT_LT(sol.residuals[0].norm, 10.0 * sol.h);
  }
  EXPECT_GT(errs[0] / errs[1], 1.8);
  EXPECT_GT(errs[1] / errs[2], 1.8);
}

TEST(OpenProblem, CornerMismatchRejected) {
  OpenProblemData d = OpenProblemData::homogeneous();
  d.inner_arc = [](double) { return 1.0; };
  EXPECT_EQ(kind_of([&] { solve_open_problem(preset(), d); }), ErrorKind::InvalidArgument);
}

TEST(OpenProblem, EvaluateMatchesSamples) {
  OpenProblemOptions opt;
  opt.resolution = 32;
  const auto data = OpenProblemData::from_function(preset(), [](double, double t) { return t; });
  const auto sol = solve_open_problem(preset(), data, opt);
  for (double r : {0.5, 0.9, 1.2, 1.6})
    for (double t : {-0.4, 0.0, 0.3}) {
      if (preset().region_polar(r, t) == LensRegion::Outside) continue;
      EXPECT_NEAR(sol.evaluate(r, t), t, 1e-3) << r << " " << t;
    }
}

TEST(Overdetermination, ConsistentDataGivesNoGap) {
  const auto data = OpenProblemData::from_function(preset(), [](double, double t) { return t; });
  for (std::size_t n : {16u, 32u}) {
    OpenProblemOptions opt;
    opt.resolution = n;
    const GapReport g = overdetermination_gap(preset(), data, [](double, double t) { return t; }, opt);
    EXPECT_LT(g.gap, g.h);
    EXPECT_GT(g.samples, 0u);
  }
}

TEST(Overdetermination, PerturbedHyperbolicData) {
  const auto data = OpenProblemData::from_function(preset(), [](double, double t) { return t; });
  for (std::size_t n : {16u, 32u, 64u}) {
    OpenProblemOptions opt;
    opt.resolution = n;
    const GapReport g = overdetermination_gap(preset(), data, [](double, double t) { return t + 0.1; }, opt);
    EXPECT_NEAR(g.gap, 0.1, 5.0 * g.h);
  }
}

TEST(Overdetermination, HomogeneousWithConstant) {
  for (double c : {0.3, -0.7}) {
    OpenProblemOptions opt;
    opt.resolution = 24;
    const GapReport g = overdetermination_gap(preset(), OpenProblemData::homogeneous(),
                                              [c](double, double) { return c; }, opt);
    EXPECT_NEAR(g.gap, std::abs(c), 1e-12);
    EXPECT_LT(g.sonic_max, 1e-12);
  }
}
