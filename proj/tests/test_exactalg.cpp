#include <gtest/gtest.h>

#include <random>

#include "cyclecert/sturm.hpp"
#include "test_support.hpp"

using namespace cyclecert;
using namespace cyclecert::testing;

TEST(Rational, ParsesCanonicalForms) {
  EXPECT_EQ(parse_rat("-49/10"), q(-49, 10));
  EXPECT_EQ(parse_rat(" 6/4 "), q(3, 2));
  EXPECT_EQ(parse_rat("+7"), Rat(7));
  EXPECT_EQ(to_string(q(6, -4)), "-3/2");
}

TEST(Rational, RejectsMalformedLiterals) {
  for (const char* bad : {"", "1/0", "1.5", "a", "1/", "/2", "--1", "1/2/3"}) {
    EXPECT_THROW(parse_rat(bad), RationalParseError) << bad;
  }
}

TEST(Rational, StringRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rat v = random_rat(rng, 100000, 1000);
    EXPECT_EQ(parse_rat(to_string(v)), v);
  }
}

TEST(RatPoly, TrimsAndReportsDegree) {
  EXPECT_EQ(RatPoly({1, 2, 0, 0}).degree(), 1);
  EXPECT_TRUE(RatPoly({0, 0}).is_zero());
  EXPECT_EQ(RatPoly{}.degree(), RatPoly::kZeroDegree);
}

TEST(RatPoly, ProductOfLinearFactors) {
  const RatPoly s = RatPoly::x();
  const RatPoly one = RatPoly::constant(1);
  const RatPoly p = (s - one * Rat(2)) * (s - one * Rat(4)) * (s * s + one * Rat(4)) * (s + one * Rat(3));
  // expansion checked with sympy
  EXPECT_EQ(p, poly({96, -40, 12, -6, -3, 1}));
  EXPECT_EQ(p + RatPoly{}, p);
  EXPECT_EQ((s - one) * (s + one), poly({-1, 0, 1}));
}

TEST(RatPoly, DerivativeExamples) {
  EXPECT_EQ(derivative(poly({6, -11, 6, -1})), poly({-11, 12, -3}));
  EXPECT_TRUE(derivative(poly({5})).is_zero());
  EXPECT_EQ(derivative(poly({4, q(-79, 16), 1})), poly({q(-79, 16), 2}));
}

TEST(RatPoly, SubstituteSquareExamples) {
  EXPECT_EQ(substitute_square(poly({-1, 1})), poly({-1, 0, 1}));
  EXPECT_EQ(substitute_square(poly({4, q(-79, 16), 1})), poly({4, 0, q(-79, 16), 0, 1}));
  EXPECT_TRUE(substitute_square(RatPoly{}).is_zero());
}

TEST(RatPoly, DivisionIdentity) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const RatPoly a = random_poly(rng, 8);
    RatPoly b = random_poly(rng, 4);
    if (b.is_zero()) continue;
    const auto [quo, rem] = divmod(a, b);
    EXPECT_EQ(quo * b + rem, a);
    EXPECT_LT(rem.degree(), b.degree());
    EXPECT_EQ(exact_div(a * b, b), a);
  }
}

TEST(RatPoly, GcdOfConstructedFactors) {
  const RatPoly f = from_roots({1, 2, q(1, 3)});
  const RatPoly g = from_roots({2, q(1, 3), -5});
  EXPECT_EQ(gcd(f, g), from_roots({2, q(1, 3)}));
  const RatPoly sq = from_roots({1, 1, 1, 2, 2, 3});
  EXPECT_EQ(square_free(sq), from_roots({1, 2, 3}));
}

TEST(RatPoly, ExactArithmeticRoundTrips) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const RatPoly a = random_poly(rng, 7);
    const RatPoly b = random_poly(rng, 7);
    EXPECT_EQ((a + b) - b, a);
    const RatPoly g = gcd(a, b);
    if (!g.is_zero()) {
      EXPECT_EQ(exact_div(a * b, g) * g, a * b);
    }
  }
}

TEST(RatPoly, ChainRuleForSquareSubstitution) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const RatPoly p = random_poly(rng, 8);
    EXPECT_EQ(derivative(substitute_square(p)), shift_up(substitute_square(derivative(p)), 1) * Rat(2));
  }
}

TEST(Sturm, ChainEndsInNonzeroConstantAndStartsSquareFree) {
  const SturmChain c(from_roots({1, 1, 2, -3}));
  EXPECT_EQ(c.chain().front(), square_free(from_roots({1, 1, 2, -3})));
  EXPECT_EQ(c.chain().back().degree(), 0);
}

TEST(Sturm, CountExamples) {
  const RatPoly w = poly({0, 0, q(-79, 16), 0, 2});
  EXPECT_EQ(count_roots(w, RootRange::non_negative()), 2);
  EXPECT_EQ(count_roots(poly({1, 0, 1}), RootRange::non_negative()), 0);
  EXPECT_EQ(count_roots(poly({0, 0, -11, 0, 12, 0, -3}), RootRange::non_negative()), 3);
  EXPECT_EQ(count_roots(from_roots({0, 1, 2}), RootRange::positive()), 2);
  EXPECT_EQ(count_roots(from_roots({0, 1, 2}), RootRange::half_open(0, 1)), 1);
  EXPECT_EQ(count_roots(from_roots({0, 1, 2}), RootRange::half_open(-1, 0)), 1);
  EXPECT_THROW(count_roots(RatPoly{}, RootRange::positive()), ZeroPolynomial);
}

// Oracle: products of distinct rational linear factors (random multiplicity)
// and positive-definite quadratics, so the distinct roots are known exactly.
TEST(SturmProperty, CountsMatchKnownRootConstruction) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> n_roots(0, 5);
  std::uniform_int_distribution<int> mult(1, 2);
  std::uniform_int_distribution<int> n_quad(0, 2);
  for (int inst = 0; inst < 500; ++inst) {
    const auto roots = distinct_rats(rng, n_roots(rng), -40, 40, 8);
    RatPoly p = RatPoly::constant(random_rat(rng));
    if (sgn(p.coeff(0)) == 0) p = RatPoly::constant(1);
    for (const auto& r : roots) {
      for (int m = mult(rng); m > 0 && p.degree() < 10; --m) p = p * RatPoly{Rat(-r), Rat(1)};
    }
    for (int k = n_quad(rng); k > 0 && p.degree() + 2 <= 10; --k) {
      const Rat c = random_rat(rng, 20, 4);
      const Rat d = abs_rat(random_rat(rng, 20, 4)) + q(1, 16);
      p = p * RatPoly{c * c + d, Rat(-2 * c), Rat(1)};  // (x - c)^2 + d
    }
    std::vector<Rat> present;
    for (const auto& r : roots) {
      if (sgn(p.eval(r)) == 0) present.push_back(r);
    }
    const SturmChain chain(p);
    EXPECT_EQ(chain.count_all(), static_cast<int>(present.size()));
    const Rat a = random_rat(rng, 40, 8);
    const Rat b = a + abs_rat(random_rat(rng, 40, 8));
    int expected = 0;
    for (const auto& r : present) expected += (r > a && r <= b) ? 1 : 0;
    EXPECT_EQ(count_roots(chain, RootRange::half_open(a, b)), expected) << p;
    int positive = 0;
    for (const auto& r : present) positive += sgn(r) > 0 ? 1 : 0;
    EXPECT_EQ(count_roots(chain, RootRange::positive()), positive);
    const auto iso = real_roots_isolated(chain, q(1, 1024));
    ASSERT_EQ(iso.size(), present.size());
    for (std::size_t i = 0; i < iso.size(); ++i) {
      EXPECT_TRUE(iso[i].lo <= present[i] && present[i] <= iso[i].hi);
      EXPECT_TRUE(iso[i].exact() || (iso[i].lo < present[i] && iso[i].width() <= q(1, 1024)));
    }
  }
}

// Oracle: scan the square-free part on a rational grid and bisect every sign
// change down to 2^-40. Each sign change brackets an odd number of roots, so
// the Sturm count is at least the number of changes, has the same parity, and
// sees a root in every bisected bracket.
TEST(SturmProperty, CountsAgreeWithGridScanOnRandomPolynomials) {
  std::mt19937_64 rng(99);
  const Rat tiny(1, mpz_class(1) << 40);
  for (int inst = 0; inst < 500; ++inst) {
    RatPoly p = random_poly(rng, 10);
    if (p.degree() < 1) p = p * RatPoly::x() + RatPoly::constant(1);
    const SturmChain chain(p);
    const RatPoly sf = square_free(p);
    const Rat bound = root_bound(sf);
    const int steps = 512;
    int changes = 0;
    bool grid_hit_root = false;
    Rat prev_x = -bound;
    int prev_s = sf.sign_at(prev_x);
    for (int i = 1; i <= steps; ++i) {
      const Rat x = i == steps ? bound : -bound + bound * 2 * Rat(3 * i + 1, 3 * steps);
      const int s = sf.sign_at(x);
      if (s == 0) {
        grid_hit_root = true;
        continue;
      }
      if (s != prev_s) {
        Rat lo = prev_x, hi = x;
        while (hi - lo > tiny) {
          const Rat m = (lo + hi) / 2;
          const int sm = sf.sign_at(m);
          if (sm == 0) {
            lo = m - tiny;
            hi = m;
            break;
          }
          (sm == prev_s ? lo : hi) = m;
        }
        EXPECT_GE(chain.count_half_open(lo, hi), 1) << p;
        ++changes;
      }
      prev_x = x;
      prev_s = s;
    }
    const int sturm = chain.count_all();
    EXPECT_GE(sturm, changes) << p;
    if (!grid_hit_root) {
      EXPECT_EQ((sturm - changes) % 2, 0) << p;
    }
    EXPECT_LE(sturm, p.degree());
  }
}

TEST(Negativity, WorkedExamples) {
  const RatPoly phi = poly({0, 0, q(-79, 10), 0, q(-3459, 400), q(869, 600), q(1269, 200), q(46, 75), q(-8, 5)});
  const auto w = is_negative_on_positive_axis(phi);
  EXPECT_TRUE(w.negative);
  EXPECT_EQ(w.stripped_power, 2u);
  EXPECT_EQ(w.positive_roots, 0);
  EXPECT_FALSE(is_negative_on_positive_axis(poly({0, 0, 1})).negative);
  EXPECT_TRUE(is_negative_on_positive_axis(poly({0, 0, q(-79, 10), 0, q(-1287, 128), 0, q(237, 40), 0, q(-8, 5)})).negative);
  EXPECT_THROW(is_negative_on_positive_axis(RatPoly{}), ZeroPolynomial);
}

TEST(Negativity, DetectsEachFailureMode) {
  EXPECT_NE(is_negative_on_positive_axis(from_roots({1, -2}) * Rat(-1)).reason.find("root"), std::string::npos);
  EXPECT_NE(is_negative_on_positive_axis(poly({1, 0, 1})).reason.find("r = 1"), std::string::npos);
  // -(r - 3)^2 - 1 has value -5 at r = 1 and no roots: negative
  EXPECT_TRUE(is_negative_on_positive_axis(poly({-10, 6, -1})).negative);
}

TEST(NegativityProperty, TrueVerdictHoldsAtExactSamples) {
  std::mt19937_64 rng(7);
  int negatives = 0;
  for (int inst = 0; inst < 400; ++inst) {
    RatPoly p = random_poly(rng, 6);
    if (inst % 2 == 0) {
      // -(a sum of squares + c) r^m: negative by construction
      const RatPoly a = random_poly(rng, 3);
      p = shift_up((a * a + RatPoly::constant(abs_rat(random_rat(rng)) + q(1, 32))) * Rat(-1), inst % 3);
    }
    if (p.is_zero()) continue;
    const auto w = is_negative_on_positive_axis(p);
    if (inst % 2 == 0) {
      EXPECT_TRUE(w.negative) << p;
    }
    if (!w.negative) continue;
    ++negatives;
    for (int k = 0; k < 100; ++k) {
      const Rat r = abs_rat(random_rat(rng, 1000, 64)) + q(1, 997);
      EXPECT_LT(sgn(p.eval(r)), 0) << p << " at " << r;
    }
  }
  EXPECT_GE(negatives, 200);
}

TEST(Isolation, WorkedExamples) {
  const auto w = real_roots_isolated(poly({0, 0, q(-79, 16), 0, 2}), q(1, 1 << 20));
  ASSERT_EQ(w.size(), 3u);  // -sqrt(79/32), 0, sqrt(79/32)
  EXPECT_TRUE(w[1].exact());
  EXPECT_NEAR(w[2].approx(), std::sqrt(79.0 / 32.0), 1e-6);
  const auto sq = real_roots_isolated(poly({-1, 0, 1}));
  ASSERT_EQ(sq.size(), 2u);
  EXPECT_TRUE(sq[0].lo <= -1 && -1 <= sq[0].hi);
  EXPECT_TRUE(sq[1].lo <= 1 && 1 <= sq[1].hi);
  const auto c = real_roots_isolated(poly({-11, 12, -3}), q(1, 1 << 30));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0].approx(), 2 - std::sqrt(3.0) / 3, 1e-8);
  EXPECT_NEAR(c[1].approx(), 2 + std::sqrt(3.0) / 3, 1e-8);
}

TEST(Isolation, RefinementShrinksBelowRequestedWidth) {
  const SturmChain chain(poly({-2, 0, 1}));
  for (int e : {4, 16, 40, 80}) {
    const Rat width(1, mpz_class(1) << e);
    for (const auto& iv : real_roots_isolated(chain, width)) {
      EXPECT_LE(iv.width(), width);
      EXPECT_LE(sgn(iv.lo * iv.lo - 2) * sgn(iv.hi * iv.hi - 2), 0);
    }
  }
}

TEST(Isolation, PositiveRootsIncludeALoneRootNearTheBound) {
  const SturmChain chain(poly({-100, 1}));
  const auto roots = positive_roots_isolated(chain);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_TRUE(roots[0].lo < 100 && 100 <= roots[0].hi);
}
