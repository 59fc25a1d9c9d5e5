#include <gtest/gtest.h>

#include <random>

#include "cyclecert/polarize.hpp"
#include "test_support.hpp"

using namespace cyclecert;
using namespace cyclecert::testing;

namespace {

TrigRadialPoly r_times(const TrigRadialPoly& t, int power) {
  return TrigRadialPoly::from_radial(RatPoly::monomial(Rat(1), static_cast<std::size_t>(power))) * t;
}

void expect_polar_identities(const SystemSpec& s) {
  const PolarSystem ps = to_polar(s);
  EXPECT_EQ(from_cartesian(X() * s.P() + Y() * s.Q()), r_times(ps.R, 1));
  EXPECT_EQ(from_cartesian(X() * s.Q() - Y() * s.P()), r_times(ps.Theta, 2));
}

}  // namespace

TEST(ToPolar, WorkedSystemAverage) {
  const PolarSystem ps = to_polar(system_1_3());
  EXPECT_EQ(ps.n, 5);
  EXPECT_EQ(radial_average(ps), poly({4, q(-79, 16), 1}));
  expect_polar_identities(system_1_3());
}

TEST(ToPolar, ExampleAverages) {
  for (const Rat& b : {q(-1, 2), Rat(0), q(3, 7)}) {
    const SystemSpec s = example1(1, b, 1, q(1, 2));
    EXPECT_EQ(radial_average(to_polar(s)), poly({1, (b - 8) / 8}));
    expect_polar_identities(s);
  }
  EXPECT_EQ(radial_average(to_polar(example2(q(1, 8), q(1, 15), q(1, 20)))), poly({2, -3, 1}));
  EXPECT_EQ(radial_average(to_polar(example3(q(1, 20), q(1, 15)))), poly({2, -3, 1}));
  EXPECT_EQ(radial_average(to_polar(example4(q(1, 34)))), poly({6, -11, 6, -1}));
}

TEST(ToPolar, RejectsNonSingularOrigin) {
  EXPECT_THROW(SystemSpec(X() + C(1), Y()), OriginNotSingular);
}

TEST(RotationalSystem, PolarFormIsExact) {
  const RatPoly u = poly({2, -3, 1});
  const RatPoly v = poly({1, q(1, 3)});
  const PolarSystem ps = to_polar(rotational_system(u, v));
  EXPECT_EQ(ps.R, TrigRadialPoly::from_radial(shift_up(substitute_square(u), 1)));
  EXPECT_EQ(ps.Theta, TrigRadialPoly::from_radial(substitute_square(v)));
  EXPECT_EQ(radial_average(ps), u);
}

TEST(RotationalSystem, RandomRoundTrip) {
  std::mt19937_64 rng(21);
  for (int inst = 0; inst < 200; ++inst) {
    const RatPoly u = random_poly(rng, 5);
    const RatPoly v = random_poly(rng, 5);
    const PolarSystem ps = to_polar(rotational_system(u, v));
    EXPECT_EQ(radial_average(ps), u);
    EXPECT_EQ(ps.Theta, TrigRadialPoly::from_radial(substitute_square(v)));
  }
}

TEST(ToPolar, IdentitiesOnRandomSystems) {
  std::mt19937_64 rng(22);
  for (int inst = 0; inst < 200; ++inst) {
    const SystemSpec s(random_bipoly(rng, 6, 7, false), random_bipoly(rng, 6, 7, false));
    expect_polar_identities(s);
    // theta-mean of R / r only carries even powers
    EXPECT_NO_THROW(radial_average(to_polar(s)));
  }
}

TEST(ToPolar, LinearPartGivesConstantTerm) {
  // x' = a x - y, y' = x + a y has p(s) = a
  for (const Rat& a : {q(-2, 3), Rat(0), q(5, 4)}) {
    const SystemSpec s(X() * a - Y(), X() + Y() * a);
    const RatPoly p = radial_average(to_polar(s));
    if (sgn(a) == 0) {
      EXPECT_TRUE(p.is_zero());
    } else {
      EXPECT_EQ(p, RatPoly::constant(a));
    }
  }
}
