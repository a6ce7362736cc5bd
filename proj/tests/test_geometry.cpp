#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ehyp/geometry.hpp"

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

}  // namespace

TEST(BeltramiMetric, Origin) {
  const MetricTensor2 g = beltrami_metric({0.0, 0.0});
  EXPECT_DOUBLE_EQ(g.g11, 1.0);
  EXPECT_DOUBLE_EQ(g.g12, 0.0);
  EXPECT_DOUBLE_EQ(g.g22, 1.0);
  EXPECT_EQ(g.signature, Signature::Riemannian);
}

TEST(BeltramiMetric, HalfwayPoint) {
  const MetricTensor2 g = beltrami_metric({0.5, 0.0});
  EXPECT_NEAR(g.g11, 16.0 / 9.0, 1e-15);
  EXPECT_NEAR(g.g12, 0.0, 1e-15);
  EXPECT_NEAR(g.g22, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(g.signature, Signature::Riemannian);
}

TEST(BeltramiMetric, SingularOnAbsolute) {
  EXPECT_EQ(kind_of([] { beltrami_metric({1.0, 0.0}); }), ErrorKind::MetricSingular);
  EXPECT_EQ(kind_of([] { beltrami_metric({0.6, 0.8}); }), ErrorKind::MetricSingular);
}

TEST(BeltramiMetric, LorentzianOutside) { EXPECT_EQ(beltrami_metric({1.5, 0.3}).signature, Signature::Lorentzian); }

TEST(OperatorCoefficients, Examples) {
  const auto c0 = operator_coefficients_exp2({0.0, 0.0});
  EXPECT_DOUBLE_EQ(c0.alpha, 1.0);
  EXPECT_DOUBLE_EQ(c0.beta, 0.0);
  EXPECT_DOUBLE_EQ(c0.gamma, 1.0);

  const auto c1 = operator_coefficients_exp2({0.6, 0.8});
  EXPECT_NEAR(c1.alpha, 0.64, 1e-15);
  EXPECT_NEAR(c1.beta, -0.48, 1e-15);
  EXPECT_NEAR(c1.gamma, 0.36, 1e-15);
  EXPECT_NEAR(c1.discriminant(), 0.0, 1e-15);

  const auto c2 = operator_coefficients_exp2({2.0, 0.0});
  EXPECT_DOUBLE_EQ(c2.alpha, -3.0);
  EXPECT_DOUBLE_EQ(c2.gamma, 1.0);
  EXPECT_DOUBLE_EQ(c2.discriminant(), -3.0);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify({1.0, 0.0, 1.0}, 1e-12).kind, TypeKind::Elliptic);
  const TypeClass p = classify({0.64, -0.48, 0.36}, 1e-12);
  EXPECT_EQ(p.kind, TypeKind::Parabolic);
  EXPECT_NEAR(p.discriminant, 0.0, 1e-12);
  const TypeClass h = classify({-3.0, 0.0, 1.0}, 1e-12);
  EXPECT_EQ(h.kind, TypeKind::Hyperbolic);
  EXPECT_DOUBLE_EQ(h.discriminant, -3.0);
  EXPECT_DOUBLE_EQ(h.tolerance, 1e-12);
}

TEST(Classify, ToleranceBand) {
  EXPECT_EQ(classify({1e-11, 0.0, 1.0}, 1e-10).kind, TypeKind::Parabolic);
  EXPECT_EQ(classify({2e-10, 0.0, 1.0}, 1e-10).kind, TypeKind::Elliptic);
  EXPECT_EQ(classify({-2e-10, 0.0, 1.0}, 1e-10).kind, TypeKind::Hyperbolic);
}

TEST(GeometryProperty, DiscriminantIdentityAndSignature) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int s = 0; s < 20000; ++s) {
    const Point2 p{u(rng), u(rng)};
    const auto c = operator_coefficients_exp2(p);
    const double expect = 1.0 - p.x * p.x - p.y * p.y;
    ASSERT_NEAR(c.discriminant(), expect, 1e-12);
    if (std::abs(expect) < 1e-6) continue;
    const auto kind = classify(c).kind;
    const auto sig = beltrami_metric(p).signature;
    ASSERT_EQ(kind == TypeKind::Elliptic, sig == Signature::Riemannian);
    ASSERT_EQ(kind == TypeKind::Hyperbolic, sig == Signature::Lorentzian);
  }
}

TEST(CharacteristicSlopes, Examples) {
  const auto s = characteristic_slopes({std::sqrt(2.0), 0.0});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_FALSE(s[0].vertical);
  EXPECT_NEAR(s[0].value, 1.0, 1e-14);
  EXPECT_NEAR(s[1].value, -1.0, 1e-14);

  EXPECT_TRUE(characteristic_slopes({0.0, 0.0}).empty());

  const auto v = characteristic_slopes({1.0, 0.0});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(v[0].vertical);
}

TEST(CharacteristicSlopes, PolarLinesAreCharacteristic) {
  for (double x0 : {0.2, 0.5, 0.9}) {
    const PolarLines pl = polar_lines_of_chord(x0);
    for (const Line2& line : {pl.lower, pl.upper}) {
      const Point2 dir = line.direction();
      for (double t : {0.3, 0.7, 1.5}) {
        // Points on the line beyond the tangent point.
        const Point2 foot{line.n1 * line.d, line.n2 * line.d};
        const Point2 p = foot + t * dir;
        const double m = dir.y / dir.x;
        const double a2 = 1.0;
        const double res = (a2 - p.x * p.x) * m * m + 2.0 * p.x * p.y * m + (a2 - p.y * p.y);
        EXPECT_NEAR(res, 0.0, 1e-12) << "x0=" << x0 << " t=" << t;
      }
    }
  }
}

TEST(TraceCharacteristic, TangentStart) {
  const Point2 start{0.5, std::sqrt(0.75)};
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const auto path = trace_characteristic(start, b, 1e-3, 1.0);
    ASSERT_GT(path.points.size(), 100u);
    for (const Point2& p : path.points) EXPECT_NEAR(0.5 * p.x + std::sqrt(0.75) * p.y, 1.0, 1e-6);
  }
}

TEST(TraceCharacteristic, SlopeOneThroughRootTwo) {
  const auto path = trace_characteristic({std::sqrt(2.0), 0.0}, Branch::Plus, 1e-3, 1.0);
  for (const Point2& p : path.points) {
    EXPECT_NEAR(p.y, p.x - std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(std::abs(p.x - p.y) / std::sqrt(2.0), 1.0, 1e-9);
  }
  EXPECT_EQ(path.branch, Branch::Plus);
  EXPECT_DOUBLE_EQ(path.step, 1e-3);
}

TEST(TraceCharacteristic, ElllipticStartThrows) {
  EXPECT_EQ(kind_of([] { trace_characteristic({0.0, 0.0}, Branch::Plus, 1e-3, 1.0); }),
            ErrorKind::DegenerateDirection);
}

TEST(TraceCharacteristic, RandomIdealPointsStayTangent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rad(1.05, 2.0), ang(-std::numbers::pi, std::numbers::pi);
  for (int s = 0; s < 10; ++s) {
    const Point2 start = from_polar(rad(rng), ang(rng));
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const auto path = trace_characteristic(start, b, 1e-3, 1.0);
      const Point2 d = path.points.back() - path.points.front();
      const Line2 line = Line2::normalized(-d.y, d.x, -d.y * start.x + d.x * start.y);
      EXPECT_NEAR(line.distance_from_origin(), 1.0, 1e-6);
      for (const Point2& p : path.points) ASSERT_NEAR(line.signed_distance(p), 0.0, 1e-6);
    }
  }
}

TEST(PolarLines, HalfChord) {
  const PolarLines pl = polar_lines_of_chord(0.5);
  EXPECT_NEAR(pl.pole.x, 2.0, 1e-15);
  EXPECT_NEAR(pl.pole.y, 0.0, 1e-15);
  EXPECT_NEAR(pl.upper.n1, 0.5, 1e-15);
  EXPECT_NEAR(pl.upper.n2, std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(pl.lower.n2, -std::sqrt(3.0) / 2.0, 1e-15);
  for (const Line2& l : {pl.lower, pl.upper}) {
    EXPECT_NEAR(l.n1 * l.n1 + l.n2 * l.n2, 1.0, 1e-12);
    EXPECT_NEAR(l.signed_distance(pl.pole), 0.0, 1e-15);
  }
  const Point2 x = intersect(pl.lower, pl.upper);
  EXPECT_NEAR(x.x, 2.0, 1e-14);
}

TEST(PolarLines, LimitAndInvalid) {
  const PolarLines pl = polar_lines_of_chord(1.0 - 1e-9);
  EXPECT_NEAR(pl.pole.x, 1.0, 1e-8);
  EXPECT_NEAR(pl.upper.n1, 1.0, 1e-8);
  EXPECT_EQ(kind_of([] { polar_lines_of_chord(1.5); }), ErrorKind::InvalidChord);
  EXPECT_EQ(kind_of([] { polar_lines_of_chord(0.0); }), ErrorKind::InvalidChord);
}

TEST(LensDomain, Preset) {
  const LensDomain d = build_lens_domain(0.5, 0.25);
  EXPECT_NEAR(d.theta0, std::numbers::pi / 3.0, 1e-15);
  EXPECT_NEAR(d.pole.x, 2.0, 1e-15);
  const BoundarySegment& nu = d.sonic_arc();
  EXPECT_FALSE(nu.outer);
  EXPECT_DOUBLE_EQ(nu.radius, 1.0);
  EXPECT_NEAR(nu.theta_start, -std::numbers::pi / 3.0, 1e-15);
  EXPECT_NEAR(nu.theta_end, std::numbers::pi / 3.0, 1e-15);
  int chars = 0;
  for (const auto& s : d.segments) {
    if (s.kind != SegmentKind::CharacteristicSegment) continue;
    ++chars;
    // Each characteristic segment lies on a tangent line at (1, +-theta0).
    const Point2 foot = std::abs(s.start.norm() - 1.0) < 1e-12 ? s.start : s.end;
    EXPECT_NEAR(foot.norm(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(std::atan2(foot.y, foot.x)), d.theta0, 1e-12);
    const Line2 tl = tangent_line(std::atan2(foot.y, foot.x));
    EXPECT_NEAR(tl.signed_distance(s.start), 0.0, 1e-12);
    EXPECT_NEAR(tl.signed_distance(s.end), 0.0, 1e-12);
  }
  EXPECT_EQ(chars, 2);
}

TEST(LensDomain, CounterclockwiseOuterBoundary) {
  const LensDomain d = build_lens_domain(0.5, 0.25);
  // Outer segments chain end to start and enclose positive signed area.
  double area = 0.0;
  const BoundarySegment* prev = nullptr;
  for (const auto& s : d.segments) {
    if (!s.outer) continue;
    if (prev) {
      EXPECT_NEAR((prev->end - s.start).norm(), 0.0, 1e-12);
    }
    area += s.start.cross(s.end);
    prev = &s;
  }
  EXPECT_GT(area, 0.0);
}

TEST(LensDomain, OtherChordAndInvalid) {
  EXPECT_NEAR(build_lens_domain(0.9, 0.5).theta0, 0.45102681179626236, 1e-12);
  EXPECT_EQ(kind_of([] { build_lens_domain(0.5, 0.6); }), ErrorKind::InvalidChord);
}

TEST(LensDomain, RegionsAndFoliation) {
  const LensDomain d = build_lens_domain(0.5, 0.25);
  EXPECT_EQ(d.region({0.5, 0.0}), LensRegion::Elliptic);
  EXPECT_EQ(d.region({1.5, 0.0}), LensRegion::Hyperbolic);
  EXPECT_EQ(d.region({2.5, 0.0}), LensRegion::Outside);
  EXPECT_EQ(d.region({0.1, 0.0}), LensRegion::Outside);
  const auto leaves = d.foliation(8);
  ASSERT_EQ(leaves.size(), 8u);
  for (std::size_t i = 1; i < leaves.size(); ++i) EXPECT_LT(leaves[i].pole.x, leaves[i - 1].pole.x);
  EXPECT_NEAR(leaves[0].pole.x, 2.0, 1e-15);
}

TEST(FlowMetric, Continuity) {
  const FlowMetric a = flow_metric(FlowKind::Continuity, 0.0, 0.0, 1.4);
  EXPECT_DOUBLE_EQ(a.conformal_factor, 1.0);
  EXPECT_DOUBLE_EQ(a.metric.g11, 1.0);
  EXPECT_DOUBLE_EQ(a.metric.g22, 1.0);
  EXPECT_NEAR(flow_metric(FlowKind::Continuity, 0.5, 0.0, 1.4).conformal_factor, 0.95, 1e-15);
  EXPECT_EQ(kind_of([] { flow_metric(FlowKind::Continuity, 2.0, 1.0, 1.4); }), ErrorKind::Cavitation);
}

TEST(FlowMetric, DualPairDiffersBySign) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < 200; ++s) {
    const double a = u(rng), b = u(rng);
    const FlowMetric e = flow_metric(FlowKind::MinimalEuclidean, a, b);
    const FlowMetric m = flow_metric(FlowKind::MinkowskiGraph, a, b);
    EXPECT_DOUBLE_EQ(e.non_euclidean.g11, a * a);
    EXPECT_DOUBLE_EQ(e.non_euclidean.g12, a * b);
    EXPECT_DOUBLE_EQ(e.non_euclidean.g22, b * b);
    EXPECT_DOUBLE_EQ(e.non_euclidean.g11, -m.non_euclidean.g11);
    EXPECT_DOUBLE_EQ(e.non_euclidean.g12, -m.non_euclidean.g12);
    EXPECT_DOUBLE_EQ(e.non_euclidean.g22, -m.non_euclidean.g22);
  }
}
