#include <gtest/gtest.h>

#include <random>

#include "localtriple/characters.hpp"
#include "localtriple/local_field.hpp"

using namespace lt;

TEST(FieldElem, ValuationsAdd) {
  LocalField F(3);
  FieldElem r = F.make(1, 1) * F.make(2, 2);
  EXPECT_EQ(r.valuation(), 3);
  EXPECT_EQ(r.unit, 2u);
}

TEST(FieldElem, InverseGivesOne) {
  LocalField F(5);
  FieldElem u = F.make(0, 17);
  FieldElem r = u * inverse(u);
  EXPECT_EQ(r.valuation(), 0);
  EXPECT_EQ(r.unit, 1u);
}

TEST(FieldElem, ModularProductAtLowPrecision) {
  LocalField F(3, 2);
  FieldElem r = F.make(0, 4) * F.make(0, 7);
  EXPECT_EQ(r.valuation(), 0);
  EXPECT_EQ(r.unit, 1u);
}

TEST(FieldElem, MakeAbsorbsPowersOfP) {
  LocalField F(3);
  FieldElem x = F.make(-2, 18);
  EXPECT_EQ(x.valuation(), 0);
  EXPECT_EQ(x.unit, 2u);
}

TEST(FieldElem, AdditionTracksCancellation) {
  LocalField F(3, 6);
  FieldElem a = F.make(0, 1);
  FieldElem b = F.make(0, -1 + 9);
  FieldElem s = a + b;
  EXPECT_EQ(s.valuation(), 2);
  EXPECT_EQ(s.unit, 1u);
  EXPECT_EQ(s.absolute_precision(), 6);
  FieldElem z = a - a;
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.absolute_precision(), 6);
}

TEST(FieldElem, PrecisionLimits) {
  EXPECT_EQ(LocalField(3).precision(), 39);
  EXPECT_EQ(LocalField(5).precision(), 26);
  EXPECT_THROW(LocalField(4), DomainError);
  EXPECT_THROW(LocalField(2), DomainError);
}

TEST(FieldElem, ZeroAbsorbsMultiplication) {
  LocalField F(3);
  FieldElem z = F.zero(5);
  FieldElem r = z * F.make(-2, 1);
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(r.val, 3);
  EXPECT_THROW(inverse(z), DomainError);
}

TEST(FieldElem, RingAxiomsOnRandomElements) {
  LocalField F(5);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> t(1, 1000000), v(-4, 4);
  for (int k = 0; k < 200; ++k) {
    FieldElem a = F.make(v(rng), t(rng)), b = F.make(v(rng), t(rng)), c = F.make(v(rng), t(rng));
    EXPECT_TRUE(approx_equal(a * (b + c), a * b + a * c));
    EXPECT_TRUE(approx_equal((a + b) + c, a + (b + c)));
    EXPECT_TRUE(approx_equal((a / b) * b, a));
  }
}

TEST(Mat2, DeterminantCarriedThroughProducts) {
  LocalField F(3);
  Mat2 g = Mat2::from_entries(F.make(1, 1), F.make(0, 2), F.make(-1, 1), F.make(0, 5));
  Mat2 h = Mat2::from_entries(F.make(0, 1), F.make(-3, 1), F.make(0, 0), F.make(2, 1));
  Mat2 gh = g * h;
  EXPECT_TRUE(approx_equal(gh.det, gh.x * gh.w - gh.y * gh.z));
  Mat2 id = g * g.inverse();
  EXPECT_TRUE(approx_equal(id.x, F.one()));
  EXPECT_TRUE(id.y.is_zero());
  EXPECT_TRUE(id.z.is_zero());
}

TEST(ShellIntegral, AdditiveMeasureOfShell) {
  LocalField F(3);
  cplx v = F.shell_integral_additive([](const FieldElem&) { return cplx(1.0); }, -1, 1);
  EXPECT_NEAR(v.real(), 2.0, 1e-12);
}

TEST(ShellIntegral, VolumeOfIntegersIsOne) {
  LocalField F(3);
  cplx acc = 0;
  for (int n = 0; n < 60; ++n)
    acc += F.shell_integral_additive([](const FieldElem&) { return cplx(1.0); }, n, 1);
  EXPECT_NEAR(acc.real(), 1.0, 1e-12);
}

TEST(ShellIntegral, PsiOnShellMinusOne) {
  LocalField F(3);
  Characters X(F);
  cplx v = F.shell_integral_additive([&](const FieldElem& m) { return X.psi(m); }, -1, 1);
  EXPECT_NEAR(v.real(), -1.0, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(ShellIntegral, MultiplicativeAverages) {
  LocalField F(3);
  Characters X(F);
  EXPECT_NEAR(F.shell_integral_multiplicative([](const FieldElem&) { return cplx(1.0); }, 7, 3).real(),
              1.0, 1e-12);
  FieldElem m = F.make(-1, 1);
  cplx v = F.shell_integral_multiplicative([&](const FieldElem& a) { return X.psi(m * a); }, 0, 1);
  EXPECT_NEAR(v.real(), -0.5, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(ShellIntegral, CharacterOrthogonality) {
  for (int p : {3, 5, 7}) {
    LocalField F(p);
    Characters X(F);
    for (int r = 1; r <= 3; ++r) {
      for (std::uint64_t j = 0; j < X.group_order(r); j += 1 + X.group_order(r) / 7) {
        MultChar nu = X.make_char(r, j);
        cplx v = F.shell_integral_multiplicative(
            [&](const FieldElem& u) { return X.eval(nu, u); }, 0, r);
        double expect = nu.level == 0 ? 1.0 : 0.0;
        EXPECT_NEAR(std::abs(v - expect), 0.0, 1e-10) << "p=" << p << " r=" << r << " j=" << j;
      }
    }
  }
}

TEST(ShellIntegral, AdditiveMultiplicativeConsistency) {
  LocalField F(5);
  Characters X(F);
  FieldElem m = F.make(-3, 2);
  auto f = [&](const FieldElem& x) { return X.psi(m * x); };
  for (int n = -2; n <= 1; ++n) {
    cplx a = F.shell_integral_additive(f, n, 4);
    cplx b = F.shell_integral_multiplicative(f, n, 4);
    EXPECT_NEAR(std::abs(a - std::pow(5.0, -n) * 0.8 * b), 0.0, 1e-10);
  }
}

TEST(ShellIntegral, IndependentOfResolutionPastLevel) {
  LocalField F(3);
  Characters X(F);
  MultChar chi = X.make_char(2, 1);
  FieldElem m = F.make(-2, 1);
  auto f = [&](const FieldElem& x) { return X.eval(chi, x) * X.psi(m * x); };
  cplx a = F.shell_integral_multiplicative(f, 0, 2);
  cplx b = F.shell_integral_multiplicative(f, 0, 3);
  EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
}

TEST(ShellIntegral, ResolutionBeyondPrecisionThrows) {
  LocalField F(3, 4);
  EXPECT_THROW(F.shell_integral_additive([](const FieldElem&) { return cplx(1.0); }, 0, 5),
               PrecisionError);
}
