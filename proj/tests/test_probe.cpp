#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cyclecert/certify.hpp"
#include "cyclecert/probe.hpp"
#include "test_support.hpp"

using namespace cyclecert;
using namespace cyclecert::probe;
using namespace cyclecert::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// r' = r (1 - r^2), theta' = 1
SystemSpec logistic() { return rotational_system(poly({1, -1}), poly({1})); }

double logistic_r(double r0, double t) {
  const double e = std::exp(2 * t);
  return std::sqrt(r0 * r0 * e / (1 - r0 * r0 + r0 * r0 * e));
}

const RingReport* ring_of(const Certificate& cert, double r) {
  for (const auto& ring : cert.rings) {
    if (ring.simply_connected ? (!ring.outer || r < ring.outer->lo.get_d()) : ring.contains_radius(r)) return &ring;
  }
  return nullptr;
}

// Every cycle sits in a ring (by its full radial extent) whose predicted stability it shares.
void expect_triple_agreement(const Certificate& cert, const CycleSearch& search) {
  for (const auto& c : search.cycles) {
    EXPECT_TRUE(c.consistent) << c.section_radius;
    EXPECT_EQ(c.return_derivative < 1.0, c.stability == Stability::stable);
    const RingReport* lo = ring_of(cert, c.min_radius);
    const RingReport* hi = ring_of(cert, c.max_radius);
    ASSERT_NE(lo, nullptr);
    EXPECT_EQ(lo, hi) << "cycle crosses a ring boundary at r = " << c.section_radius;
    EXPECT_FALSE(lo->simply_connected);
    EXPECT_EQ(lo->stability_if_exists, c.stability) << c.section_radius;
  }
}

}  // namespace

TEST(Integrate, LinearRotation) {
  const SystemSpec rot(-Y(), X());
  const Trajectory tr = integrate(rot, {1.0, 0.0}, kPi / 2, 1e-12);
  const Point2 end = tr.at(kPi / 2);
  EXPECT_NEAR(end.x, 0.0, 1e-9);
  EXPECT_NEAR(end.y, 1.0, 1e-9);
  const Point2 mid = tr.at(kPi / 4);
  EXPECT_NEAR(mid.x, std::cos(kPi / 4), 1e-8);
  EXPECT_NEAR(mid.y, std::sin(kPi / 4), 1e-8);
}

TEST(Integrate, LogisticClosedForm) {
  for (double r0 : {0.1, 0.5, 1.5, 3.0}) {
    const Trajectory tr = integrate(logistic(), {r0, 0.0}, 4.0, 1e-12);
    for (double t : {0.5, 1.0, 2.5, 4.0}) {
      const Point2 p = tr.at(t);
      EXPECT_NEAR(std::hypot(p.x, p.y), logistic_r(r0, t), 1e-8) << r0 << " " << t;
      EXPECT_NEAR(std::remainder(std::atan2(p.y, p.x) - t, 2 * kPi), 0.0, 1e-8);
    }
  }
}

TEST(Integrate, ReversedFollowsBackwardTime) {
  for (double r0 : {0.3, 0.5, 0.9}) {
    const Trajectory tr = integrate(logistic(), {r0, 0.0}, 2.0, 1e-12, 1e6, true);
    for (double t : {0.5, 1.0, 2.0}) {
      const Point2 p = tr.at(t);
      EXPECT_NEAR(std::hypot(p.x, p.y), logistic_r(r0, -t), 1e-8) << r0 << " " << t;
      EXPECT_NEAR(std::remainder(std::atan2(p.y, p.x) + t, 2 * kPi), 0.0, 1e-8);
    }
  }
}

TEST(Integrate, InvariantCircleIsKept) {
  const Trajectory tr = integrate(logistic(), {0.6, 0.8}, 20.0, 1e-12);
  for (double t = 0.0; t <= 20.0; t += 0.37) {
    const Point2 p = tr.at(t);
    EXPECT_NEAR(std::hypot(p.x, p.y), 1.0, 1e-9);
  }
}

TEST(Integrate, BlowUpIsReported) {
  // r' = r^3 escapes in finite time 1/(2 r0^2)
  const SystemSpec blow(X() * rho(), Y() * rho());
  EXPECT_THROW(integrate(blow, {1.0, 0.0}, 2.0, 1e-10), ProbeError);
  EXPECT_THROW(integrate(logistic(), {1.0, 0.0}, 1.0, 0.0), std::invalid_argument);
}

TEST(PoincareReturn, LogisticMatchesClosedForm) {
  for (double r0 : {0.2, 0.5, 0.9, 1.0, 1.7}) {
    EXPECT_NEAR(poincare_return(logistic(), r0), logistic_r(r0, 2 * kPi), 1e-9) << r0;
  }
  ReturnOptions opt;
  opt.section_angle = 1.1;
  EXPECT_NEAR(poincare_return(logistic(), 0.3, opt), logistic_r(0.3, 2 * kPi), 1e-9);
}

TEST(PoincareReturn, DetailOnInvariantCircle) {
  const ReturnResult res = poincare_return_detail(VectorField(logistic()), 1.0, {});
  EXPECT_NEAR(res.r1, 1.0, 1e-9);
  EXPECT_NEAR(res.period, 2 * kPi, 1e-8);
  // div = 2u + 2 s u' = -2 on s = 1
  EXPECT_NEAR(res.divergence_integral, -4 * kPi, 1e-7);
  EXPECT_NEAR(res.min_radius, 1.0, 1e-9);
  EXPECT_NEAR(res.max_radius, 1.0, 1e-9);
}

TEST(PoincareReturn, ClockwiseRotationAndReversal) {
  // theta' = -1: the return still measures one full turn
  const SystemSpec cw = rotational_system(poly({1, -1}), poly({-1}));
  EXPECT_NEAR(poincare_return(cw, 0.5), logistic_r(0.5, 2 * kPi), 1e-9);
  const VectorField back(logistic(), true);
  EXPECT_NEAR(poincare_return_detail(back, 0.999, {}).r1, logistic_r(0.999, -2 * kPi), 1e-8);
  EXPECT_THROW(poincare_return(logistic(), 0.0), std::invalid_argument);
}

TEST(PoincareReturn, ReturnsWithinTheSectionForTheWorkedSystem) {
  const SystemSpec s = system_1_3();
  const double a = poincare_return(s, 1.0);
  const double b = poincare_return(s, 1.1);
  // the stable cycle near r = 1.018 attracts both sides
  EXPECT_GT(a, 1.0);
  EXPECT_LT(b, 1.1);
}

TEST(CriticalPoints, WorkedSystemHasOnlyTheOrigin) {
  const auto pts = critical_points(system_1_3(), 1e6);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].status, CriticalStatus::origin_exact);
  EXPECT_EQ(pts[0].x, 0.0);
  EXPECT_EQ(pts[0].y, 0.0);
}

TEST(CriticalPoints, Example2HasOnlyTheOrigin) {
  const auto pts = critical_points(example2(q(1, 8), q(1, 15), q(1, 20)), 1e6);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].status, CriticalStatus::origin_exact);
}

TEST(CriticalPoints, Example3HasFivePointsInsideTheDisc) {
  const SystemSpec s = example3(q(1, 20), q(1, 15));
  const auto pts = critical_points(s, 1e6);
  ASSERT_EQ(pts.size(), 5u);
  int on_axis = 0;
  for (const auto& p : pts) {
    EXPECT_LT(p.x * p.x + p.y * p.y, 1.5);
    EXPECT_LT(std::abs(s.P().eval_f64(p.x, p.y)), 1e-10);
    EXPECT_LT(std::abs(s.Q().eval_f64(p.x, p.y)), 1e-10);
    if (std::abs(p.x) < 1e-8 && std::abs(std::abs(p.y) - 1.0) < 1e-8) ++on_axis;
  }
  EXPECT_EQ(on_axis, 2);
}

TEST(CriticalPoints, KnownLinearAndBoxFilter) {
  // x' = x (x - 1), y' = y: critical points (0, 0) and (1, 0)
  const SystemSpec s(X() * (X() - C(1)), Y());
  const auto pts = critical_points(s, 10);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[1].x, 1.0, 1e-12);
  EXPECT_NEAR(pts[1].y, 0.0, 1e-12);
  EXPECT_EQ(critical_points(s, 0.5).size(), 1u);
  EXPECT_THROW(critical_points(SystemSpec(X() * Y(), X() * Y() * Rat(2)), 10), DegenerateResultant);
}

TEST(SectionAngle, AvoidsCriticalPointsOnTheRay) {
  EXPECT_EQ(choose_section_angle({{0, 0, 0, CriticalStatus::origin_exact}}), 0.0);
  const double a = choose_section_angle({{0, 0, 0, CriticalStatus::origin_exact}, {1.5, 0, 0, CriticalStatus::refined_numeric}});
  EXPECT_GT(std::abs(a), 1e-2);
}

TEST(Transversality, RotationalCircles) {
  const auto in = circle_transversality(logistic(), 2);
  EXPECT_EQ(in.flow, Flow::inward);
  EXPECT_TRUE(in.rigorous);
  const auto out = circle_transversality(logistic(), q(1, 2));
  EXPECT_EQ(out.flow, Flow::outward);
  EXPECT_TRUE(out.rigorous);
  EXPECT_THROW(circle_transversality(logistic(), 0), std::invalid_argument);
}

TEST(Transversality, Example2Disc) {
  // outward near the origin (unstable focus), inward on x^2 + y^2 = 3/2
  const SystemSpec s = example2(q(1, 8), q(1, 15), q(1, 20));
  EXPECT_EQ(circle_transversality(s, q(1, 10)).flow, Flow::outward);
  const auto mid = circle_transversality(s, q(1224745, 1000000));
  EXPECT_EQ(mid.flow, Flow::inward);
  EXPECT_EQ(circle_transversality(s, 3).flow, Flow::outward);
}

TEST(FindCycles, WorkedSystemTwoCyclesWithTripleAgreement) {
  const SystemSpec s = system_1_3();
  const Certificate cert = certify(s);
  ASSERT_TRUE(cert.verdict.certified);
  const CycleSearch search = find_cycles(s);
  ASSERT_EQ(search.cycles.size(), 2u);
  EXPECT_EQ(search.cycles[0].stability, Stability::stable);
  EXPECT_EQ(search.cycles[1].stability, Stability::unstable);
  EXPECT_LT(search.cycles[0].max_radius, std::sqrt(79.0 / 32.0));
  EXPECT_GT(search.cycles[1].min_radius, std::sqrt(79.0 / 32.0));
  for (const auto& c : search.cycles) EXPECT_GT(std::abs(c.return_derivative - 1.0), 1e-3);
  expect_triple_agreement(cert, search);
}

TEST(FindCycles, RadiiStableUnderToleranceHalving) {
  FindOptions a;
  a.tol = 1e-10;
  FindOptions b = a;
  b.tol = 5e-11;
  const CycleSearch sa = find_cycles(system_1_3(), a);
  const CycleSearch sb = find_cycles(system_1_3(), b);
  ASSERT_EQ(sa.cycles.size(), sb.cycles.size());
  for (std::size_t i = 0; i < sa.cycles.size(); ++i) {
    EXPECT_NEAR(sa.cycles[i].section_radius, sb.cycles[i].section_radius, 1e-6);
  }
}

TEST(FindCycles, RotationalCirclesAreRecovered) {
  // u = (1 - s)(2 - s)(3 - s): invariant circles at r = 1, sqrt 2, sqrt 3
  const SystemSpec s = rotational_system(from_roots({1, 2, 3}) * Rat(-1), poly({1, q(1, 2)}));
  const CycleSearch search = find_cycles(s);
  ASSERT_EQ(search.cycles.size(), 3u);
  const double expected[3] = {1.0, std::sqrt(2.0), std::sqrt(3.0)};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(search.cycles[static_cast<std::size_t>(i)].section_radius, expected[i], 1e-7);
  EXPECT_EQ(search.cycles[0].stability, Stability::stable);
  EXPECT_EQ(search.cycles[1].stability, Stability::unstable);
  EXPECT_EQ(search.cycles[2].stability, Stability::stable);
  // return map derivative of r' = r u(r^2) at a circle: exp(2 s u'(s) * period)
  const double period = 2 * kPi / (1 + 0.5 * 1.0);
  EXPECT_NEAR(search.cycles[0].return_derivative, std::exp(2 * 1.0 * -2.0 * period), 1e-4);
}

TEST(FindCycles, Example4TwoStableCyclesStraddlingTheMiddleRing) {
  const SystemSpec s = example4(q(1, 34));
  const Certificate cert = certify(s);
  ASSERT_TRUE(cert.verdict.certified);
  const CycleSearch search = find_cycles(s);
  ASSERT_EQ(search.cycles.size(), 2u);
  for (const auto& c : search.cycles) EXPECT_EQ(c.stability, Stability::stable);
  EXPECT_LT(search.cycles[0].max_radius * search.cycles[0].max_radius, 2 - std::sqrt(3.0) / 3);
  EXPECT_GT(search.cycles[1].min_radius * search.cycles[1].min_radius, 2 + std::sqrt(3.0) / 3);
  expect_triple_agreement(cert, search);
}

TEST(FindCycles, Example2InnerStableOuterUnstable) {
  const SystemSpec s = example2(q(1, 8), q(1, 15), q(1, 20));
  const Certificate cert = certify(s);
  const CycleSearch search = find_cycles(s);
  ASSERT_EQ(search.cycles.size(), 2u);
  EXPECT_EQ(search.cycles[0].stability, Stability::stable);
  EXPECT_LT(search.cycles[0].max_radius * search.cycles[0].max_radius, 1.5);
  EXPECT_EQ(search.cycles[1].stability, Stability::unstable);
  expect_triple_agreement(cert, search);
}

TEST(FindCycles, Example3OuterUnstableEnclosesCriticalPoints) {
  const SystemSpec s = example3(q(1, 20), q(1, 15));
  const CycleSearch search = find_cycles(s);
  ASSERT_EQ(search.cycles.size(), 1u);
  EXPECT_EQ(search.cycles[0].stability, Stability::unstable);
  double far = 0.0;
  for (const auto& p : critical_points(s, 1e6)) far = std::max(far, std::hypot(p.x, p.y));
  EXPECT_GT(search.cycles[0].min_radius, far);
}

TEST(FindCycles, NoCyclesForALinearFocus) {
  const SystemSpec s(X() * Rat(-1) - Y(), X() - Y());
  FindOptions opt;
  opt.r_max = 3;
  EXPECT_TRUE(find_cycles(s, opt).cycles.empty());
}

TEST(Csv, HeadersAndRows) {
  const CycleSearch search = find_cycles(logistic(), 2.0);
  std::ostringstream disp, find;
  write_displacement_csv(disp, search);
  write_findings_csv(find, search);
  EXPECT_EQ(disp.str().substr(0, disp.str().find('\n')).find("r"), 0u);
  std::size_t lines = 0;
  for (char ch : find.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 2u);
  std::ostringstream traj;
  write_trajectory_csv(traj, integrate(logistic(), {0.5, 0.0}, 1.0, 1e-9));
  EXPECT_GT(traj.str().size(), 20u);
}

TEST(FindCycles, SharedFactorFallsBackToDefaultSection) {
  // u and v both vanish at s = -2, so P and Q share the factor x^2 + y^2 + 2
  const SystemSpec s = rotational_system(poly({2, 1}) * poly({1, -1}), poly({2, 1}));
  EXPECT_THROW(critical_points(s, 10), DegenerateResultant);
  const CycleSearch search = find_cycles(s);
  ASSERT_EQ(search.cycles.size(), 1u);
  EXPECT_NEAR(search.cycles[0].section_radius, 1.0, 1e-7);
  EXPECT_FALSE(search.log.empty());
}
