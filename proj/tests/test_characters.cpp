#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "localtriple/characters.hpp"

using namespace lt;

namespace {

// Legendre symbol by Euler's criterion, used as an independent oracle.
int legendre(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = powmod(a, (p - 1) / 2, p);
  return r == 1 ? 1 : -1;
}

}  // namespace

TEST(Characters, GeneratorIsPrimitiveModPrimePowers) {
  for (int p : {3, 5, 7, 11, 13}) {
    LocalField F(p);
    Characters X(F, 3);
    std::uint64_t m = ipow(p, 3), order = m - m / p, g = X.generator();
    std::uint64_t x = 1;
    for (std::uint64_t e = 1; e < order; ++e) {
      x = mulmod(x, g, m);
      ASSERT_NE(x, 1u) << "p=" << p;
    }
    EXPECT_EQ(mulmod(x, g, m), 1u);
  }
}

TEST(Characters, UnramifiedValueOnUniformizerPower) {
  LocalField F(5);
  Characters X(F);
  cplx z = std::polar(1.0, 0.7);
  MultChar chi = X.make_char(0, 0, z);
  EXPECT_NEAR(std::abs(X.eval(chi, F.make(2, 1)) - z * z), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(X.eval(chi, F.one()) - 1.0), 0.0, 1e-14);
}

TEST(Characters, QuadraticCharacterMatchesLegendre) {
  for (int p : {3, 5, 7, 11}) {
    LocalField F(p);
    Characters X(F);
    MultChar quad = X.make_char(1, (p - 1) / 2);
    EXPECT_EQ(quad.level, 1);
    for (int a = 1; a < p; ++a)
      EXPECT_NEAR(X.eval(quad, F.make(0, a)).real(), legendre(a, p), 1e-12);
  }
  LocalField F(3);
  Characters X(F);
  EXPECT_NEAR(X.eval(X.make_char(1, 1), F.make(0, 2)).real(), -1.0, 1e-14);
}

TEST(Characters, LevelNormalization) {
  LocalField F(3);
  Characters X(F);
  MultChar a = X.make_char(3, 9);
  EXPECT_EQ(a.level, 1);
  EXPECT_EQ(a.index, 1u);
  EXPECT_EQ(X.make_char(2, 0).level, 0);
  EXPECT_EQ(X.make_char(2, 2).level, 2);
}

TEST(Characters, MultiplicativityOnRandomPairs) {
  LocalField F(5);
  Characters X(F);
  std::mt19937_64 rng(5);
  MultChar chi = X.make_char(3, 37, std::polar(1.0, 1.3));
  std::uniform_int_distribution<std::int64_t> t(1, 1 << 30), v(-5, 5);
  for (int k = 0; k < 100; ++k) {
    FieldElem a = F.make(v(rng), t(rng)), b = F.make(v(rng), t(rng));
    EXPECT_NEAR(std::abs(X.eval(chi, a * b) - X.eval(chi, a) * X.eval(chi, b)), 0.0, 1e-12);
  }
}

TEST(Characters, TrivialOnDeepUnits) {
  LocalField F(3);
  Characters X(F);
  MultChar chi = X.make_char(2, 5);
  for (int t = 0; t < 20; ++t)
    EXPECT_NEAR(std::abs(X.eval(chi, F.make(0, 1 + 9 * t)) - 1.0), 0.0, 1e-12);
  EXPECT_NE(std::abs(X.eval(chi, F.make(0, 4)) - 1.0), 0.0);
}

TEST(Characters, EvalNeedsPrecision) {
  LocalField F(3);
  Characters X(F);
  MultChar chi = X.make_char(3, 1);
  EXPECT_THROW(X.eval(chi, F.make_with_precision(0, 2, 2)), PrecisionError);
  EXPECT_THROW(X.eval(chi, F.zero(4)), DomainError);
}

TEST(AdditiveCharacter, TrivialOnIntegersAndLevel) {
  LocalField F(3);
  Characters X(F);
  EXPECT_NEAR(std::abs(X.psi(F.make(0, 5)) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(X.psi(F.make(-1, 1)) - std::polar(1.0, 2 * std::numbers::pi / 3)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(X.psi(F.make(-2, 4)) - std::polar(1.0, 2 * std::numbers::pi * 4 / 9)), 0.0, 1e-14);
  // psi(m x) on the shell v(x) = n has level max(0, -v(m) - n).
  FieldElem m = F.make(-3, 1);
  for (int n = 0; n <= 3; ++n) {
    int lev = std::max(0, 3 - n);
    std::uint64_t mod = ipow(3, lev);
    for (int u = 1; u < 30; ++u) {
      if (u % 3 == 0) continue;
      cplx a = X.psi(m * F.make(n, u)), b = X.psi(m * F.make(n, u + mod));
      EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
    }
  }
  EXPECT_THROW(X.psi(F.make_with_precision(-3, 1, 2)), PrecisionError);
}

TEST(Fourier, IndicatorOfCharacter) {
  LocalField F(3);
  Characters X(F);
  const int r = 3;
  std::uint64_t N = X.group_order(r);
  for (std::uint64_t j : {0u, 1u, 7u, 17u}) {
    std::vector<cplx> vals(N);
    for (std::uint64_t e = 0; e < N; ++e) vals[e] = X.unit_value_at(j, r, X.unit_from_exponent(e, r));
    auto c = X.fourier_on_shell(vals, r);
    for (std::uint64_t k = 0; k < N; ++k) EXPECT_NEAR(std::abs(c[k] - (k == j ? 1.0 : 0.0)), 0.0, 1e-10);
  }
}

TEST(Fourier, PsiOnUnitsHasLevelAtMostOne) {
  LocalField F(3);
  Characters X(F);
  const int r = 3;
  std::uint64_t N = X.group_order(r);
  std::vector<cplx> vals(N);
  for (std::uint64_t e = 0; e < N; ++e)
    vals[e] = X.psi(F.make(-1, static_cast<std::int64_t>(X.unit_from_exponent(e, r))));
  auto c = X.fourier_on_shell(vals, r);
  for (std::uint64_t k = 0; k < N; ++k) {
    MultChar nu = X.make_char(r, k);
    if (nu.level > 1) EXPECT_NEAR(std::abs(c[k]), 0.0, 1e-10);
  }
  EXPECT_NEAR(c[0].real(), -0.5, 1e-12);
}

TEST(Fourier, ZeroAndRoundTrip) {
  LocalField F(5);
  Characters X(F);
  const int r = 3;
  std::uint64_t N = X.group_order(r);
  std::vector<cplx> zero(N, 0.0);
  for (auto c : X.fourier_on_shell(zero, r)) EXPECT_EQ(std::abs(c), 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<cplx> f(N);
  for (auto& v : f) v = {g(rng), g(rng)};
  auto back = X.synthesize_on_shell(X.fourier_on_shell(f, r), r);
  for (std::uint64_t e = 0; e < N; ++e) EXPECT_NEAR(std::abs(back[e] - f[e]), 0.0, 1e-10);
}

TEST(GaussSum, QuadraticAtThree) {
  LocalField F(3);
  Characters X(F);
  cplx g = X.gauss_sum(X.make_char(1, 1), -1);
  EXPECT_NEAR(g.real(), 0.0, 1e-12);
  EXPECT_NEAR(g.imag(), std::sqrt(3.0) / 3.0, 1e-12);
}

TEST(GaussSum, LevelMismatchVanishes) {
  LocalField F(5);
  Characters X(F);
  EXPECT_NEAR(std::abs(X.gauss_sum(X.make_char(1, 1), -2)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(X.gauss_sum(X.make_char(2, 1), -1)), 0.0, 1e-12);
}

TEST(GaussSum, TrivialCharacterRamanujanSum) {
  LocalField F(3);
  Characters X(F);
  cplx g = X.gauss_sum(X.trivial(), -1);
  EXPECT_NEAR(g.real(), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(g.imag(), 0.0, 1e-12);
}

TEST(GaussSum, SquareModulusForPrimitiveCharacters) {
  for (int p : {3, 5, 7}) {
    LocalField F(p);
    Characters X(F);
    for (int k = 1; k <= 3; ++k) {
      std::uint64_t N = X.group_order(k);
      for (std::uint64_t j = 1; j < N; ++j) {
        MultChar chi = X.make_char(k, j);
        if (chi.level != k) continue;
        // Raw sum over units mod p^k, computed without the library's tables.
        cplx raw = 0;
        std::uint64_t mod = ipow(p, k), gk = X.generator() % mod, x = 1;
        for (std::uint64_t e = 0; e < N; ++e) {
          raw += std::polar(1.0, 2 * std::numbers::pi * (double(j * e % N) / N + double(x) / mod));
          x = mulmod(x, gk, mod);
        }
        EXPECT_NEAR(std::norm(raw), double(mod), 1e-8);
        EXPECT_NEAR(std::abs(X.gauss_sum(chi, -k) - raw / double(mod)), 0.0, 1e-10);
      }
    }
  }
}
