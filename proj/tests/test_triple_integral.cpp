#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "localtriple/triple_integral.hpp"

using namespace lt;

namespace {

struct Ctx {
  LocalField F;
  Characters X;
  GridCache cache;
  explicit Ctx(int p) : F(p), X(F, p == 3 ? 9 : 7), cache(X, 4) {}
};

cplx expi(double t) { return std::polar(1.0, t); }

RepDescriptor tempered(double th) { return RepDescriptor::unramified(expi(th), expi(-th)); }

RepDescriptor ps11(const Ctx& S, cplx z, std::uint64_t j = 1) {
  const std::uint64_t n = S.X.group_order(1);
  return RepDescriptor::principal_series(S.X.make_char(1, j, z), S.X.make_char(1, (n - j) % n, 1.0 / z));
}

RepDescriptor sc(int c, std::uint64_t seed, MultChar w = MultChar{}) {
  return RepDescriptor::supercuspidal(c, w, seed);
}

}  // namespace

TEST(CosetWeights, SumToOne) {
  for (int q : {3, 5, 7})
    for (int c = 1; c <= 6; ++c) {
      double s = 0;
      for (int i = 0; i <= c; ++i) s += coset_weight(q, c, i);
      EXPECT_NEAR(s, 1.0, 1e-15);
    }
  EXPECT_DOUBLE_EQ(coset_weight(3, 2, 0), 0.75);
  EXPECT_DOUBLE_EQ(coset_weight(3, 2, 2), 1.0 / 12);
  EXPECT_DOUBLE_EQ(coset_weight(3, 2, 1), 2.0 / 12);
}

TEST(ClosedForm, TableExamples) {
  Ctx S(3);
  // Type 3 against Type 3 has A = B = 0.
  RepDescriptor t3 = RepDescriptor::principal_series(MultChar{0, 0, 1.0}, S.X.make_char(1, 1));
  for (int c3 : {2, 3, 4})
    EXPECT_NEAR(std::abs(closed_form_integral(3, t3, t3, sc(c3, 1)) - 1.0 / (4 * std::pow(3, c3 - 1))),
                0.0, 1e-15);
  RepDescriptor sp = RepDescriptor::special(1.0);
  EXPECT_NEAR(std::abs(closed_form_integral(3, sp, sp, ps11(S, 1.0)) - 4.0 / 27), 0.0, 1e-15);
  EXPECT_EQ(closed_form_integral(3, sp, sp, sc(3, 1)), closed_form_integral(3, sp, sp, sc(3, 2)));
  for (int q : {3, 5})
    for (int c3 : {4, 5}) {
      const double expect = q * q / ((q - 1.0) * (q - 1.0) * (q + 1) * std::pow(q, c3 - 1));
      EXPECT_NEAR(std::abs(closed_form_integral(q, sc(2, 1), sc(2, 2), sc(c3, 3)) - expect), 0.0, 1e-15);
    }
}

TEST(Hypotheses, Rejections) {
  Ctx S(3);
  RepDescriptor u = tempered(0.0);
  EXPECT_THROW(check_hypotheses(S.X, u, u, RepDescriptor::special(1.0)), DomainError);
  RepDescriptor t = RepDescriptor::principal_series(S.X.make_char(2, 1), S.X.make_char(2, 5));
  EXPECT_THROW(check_hypotheses(S.X, t, u, sc(3, 1)), DomainError);
  // Central characters multiplying to w(pi) = -1.
  EXPECT_THROW(check_hypotheses(S.X, RepDescriptor::special(expi(std::numbers::pi / 2)), u, sc(2, 1)),
               DomainError);
  EXPECT_NO_THROW(check_hypotheses(S.X, u, u, sc(2, 1)));
}

TEST(BruteForce, TemperedPairAgainstLevelOneOne) {
  Ctx S(3);
  RepDescriptor u = tempered(std::numbers::pi / 2);
  auto r = brute_force_integral(S.cache, u, u, ps11(S, expi(0.7)));
  EXPECT_NEAR(std::abs(r.A - (-1.0 / 3)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.B - (-1.0 / 3)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.brute_force - 4.0 / 27), 0.0, 1e-10);
  EXPECT_LE(r.abs_error, 1e-8);
  EXPECT_TRUE(epsilon_sign_assert(r));
}

TEST(BruteForce, TypeOnePair) {
  Ctx S(3);
  const int c3 = 4;
  auto r = brute_force_integral(S.cache, sc(2, 5), ps11(S, expi(0.2)), sc(c3, 6));
  const double q = 3;
  const double expect = q * q / ((q - 1) * (q - 1) * (q + 1) * std::pow(q, c3 - 1));
  EXPECT_NEAR(std::abs(r.brute_force - expect), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.A + 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.B + 0.5), 0.0, 1e-12);
}

TEST(BruteForce, TypeThreeHasVanishingA) {
  for (int p : {3, 5}) {
    Ctx S(p);
    MultChar nu = S.X.make_char(1, 1);
    RepDescriptor t3 = RepDescriptor::principal_series(MultChar{0, 0, expi(0.4)}, nu);
    // Central character of pi3 cancels the level-one part of t3.
    MultChar w3 = S.X.inverse(t3.central(S.X));
    auto r = brute_force_integral(S.cache, t3, RepDescriptor::special(1.0), sc(3, 7, w3));
    EXPECT_NEAR(std::abs(r.A), 0.0, 1e-12);
    const double q = p;
    const double expect = (1 + 1 / q) / ((q + 1) * q * q);
    EXPECT_NEAR(std::abs(r.brute_force - expect), 0.0, 1e-10);
  }
}

TEST(Contributions, OnlyTopTwoCosetsContribute) {
  Ctx S(3);
  const double q = 3;
  for (int c3 : {2, 3, 4}) {
    RepDescriptor u = tempered(std::numbers::pi / 3), sp = RepDescriptor::special(-1.0);
    auto r = brute_force_integral(S.cache, u, sp, sc(c3, 3));
    for (int i = 0; i + 2 <= c3; ++i) EXPECT_LE(std::abs(r.per_coset[i]), 1e-10) << c3 << " " << i;
    for (const auto& row : r.contributions) {
      if (row.i == c3 && row.vm == 0)
        EXPECT_NEAR(std::abs(row.value - coset_weight(3, c3, c3)), 0.0, 1e-12);
      if (row.vm < -1) EXPECT_LE(std::abs(row.value), 1e-10);
    }
    // Row (c3, -1): weight times (q-1) A (-1/(q-1)).
    for (const auto& row : r.contributions)
      if (row.i == c3 && row.vm == -1)
        EXPECT_NEAR(std::abs(row.value + coset_weight(3, c3, c3) * r.A_table), 0.0, 1e-12);
    EXPECT_LE(r.abs_error, 1e-10);
    EXPECT_NEAR(r.brute_force.imag(), 0.0, 1e-10);
    EXPECT_GT(r.brute_force.real(), 0.0);
    (void)q;
  }
}

TEST(Contributions, Phi3AggregateAtPenultimateCoset) {
  Ctx S(3);
  for (int c3 : {2, 4}) {
    RepDescriptor r3 = c3 == 2 ? ps11(S, expi(0.3)) : sc(c3, 9);
    auto g = S.cache.get(r3, 0, c3);
    const auto& prof = g->profile(0, c3 - 1);
    const int R = g->depth();
    cplx sum = 0;
    for (std::uint64_t t = 1; t < prof.size(); ++t) {
      if (t % S.F.pow(R - 1) == 0 && t % S.F.pow(R) != 0) sum += prof[t];
    }
    EXPECT_NEAR(std::abs(sum - 0.5), 0.0, 1e-10);
  }
}

TEST(SeedInvariance, SupercuspidalThirdFactor) {
  Ctx S(3);
  RepDescriptor u = tempered(0.0);
  for (int c3 : {2, 3}) {
    auto r1 = brute_force_integral(S.cache, u, RepDescriptor::special(1.0), sc(c3, 1));
    auto r2 = brute_force_integral(S.cache, u, RepDescriptor::special(1.0), sc(c3, 2));
    EXPECT_NEAR(std::abs(r1.brute_force - r2.brute_force), 0.0, 1e-10);
  }
}

TEST(FullMode, MatchesReducedSum) {
  Ctx S(3);
  RepDescriptor u = tempered(std::numbers::pi / 3);
  RepDescriptor r3 = ps11(S, expi(0.7));
  auto reduced = brute_force_integral(S.cache, u, RepDescriptor::special(-1.0), r3);
  cplx full = brute_force_full(S.cache, u, RepDescriptor::special(-1.0), r3, 2);
  EXPECT_NEAR(std::abs(full - reduced.brute_force), 0.0, 1e-10);
}

TEST(LowerBound, NonTemperedUnramified) {
  const double alpha = 7.0 / 64;
  for (int q : {3, 5}) {
    const double bound = one_minus_A_lower_bound(q, alpha);
    EXPECT_GT(bound, 0.0);
    RepDescriptor r = RepDescriptor::unramified(std::pow(q, -alpha), std::pow(q, alpha));
    EXPECT_GE(std::abs(1.0 - table_A(q, r)), bound - 1e-12);
    for (double th = 0; th < 2 * std::numbers::pi; th += 0.1) {
      RepDescriptor t = tempered(th);
      EXPECT_GE(std::abs(1.0 - table_A(q, t)), bound - 1e-12);
    }
  }
}
