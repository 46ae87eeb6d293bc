#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "localtriple/hecke_amplifier.hpp"
#include "localtriple/matrix_coefficients.hpp"

using namespace lt;

namespace {

SphericalEigendata tempered(int q, double th) {
  return SphericalEigendata(q, std::polar(1.0, th), std::polar(1.0, -th));
}

SphericalEigendata random_eigendata(std::mt19937_64& rng, int q, double alpha) {
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), tau(-alpha, alpha);
  const double r = std::pow(q, tau(rng));
  return SphericalEigendata(q, std::polar(r, ang(rng)), std::polar(1 / r, ang(rng)));
}

}  // namespace

TEST(HeckeStar, FirstValues) {
  for (int q : {3, 5, 7})
    EXPECT_EQ(hecke_star_eigenvalue(tempered(q, 0.4), 0), cplx(1.0));
  for (int q : {3, 5})
    for (double th : {0.0, 0.3, 1.7}) {
      const cplx l1 = hecke_star_eigenvalue(tempered(q, th), 1);
      EXPECT_NEAR(std::abs(l1 - 2 * std::sqrt(q) * std::cos(th)), 0.0, 1e-12);
    }
  EXPECT_NEAR(std::abs(hecke_star_eigenvalue(tempered(3, 0.0), 2) - 8.0), 0.0, 1e-12);
}

TEST(HeckeStar, MassTimesSphericalValue) {
  // Total Haar mass of K diag(pi^r, 1) K is (q + 1) q^(r - 1).
  const SphericalEigendata e(5, std::polar(1.2, 0.3), std::polar(1 / 1.2, 2.0));
  for (int r = 1; r <= 6; ++r) {
    const cplx phi = macdonald_spherical(5, e.chi1, e.chi2, r);
    EXPECT_NEAR(std::abs(hecke_star_eigenvalue(e, r) - 6.0 * std::pow(5.0, r - 1) * phi), 0.0, 1e-9);
  }
}

TEST(HeckeIdentities, TemperedExample) {
  const auto rep = verify_hecke_identities(tempered(3, std::numbers::pi / 3));
  EXPECT_TRUE(rep.pass) << rep.max_residual();
}

TEST(HeckeIdentities, RandomEigendata) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const int q = std::array{2, 3, 5, 7, 11}[k % 5];
    const auto rep = verify_hecke_identities(random_eigendata(rng, q, 7.0 / 64));
    EXPECT_TRUE(rep.pass) << k << " " << rep.max_residual();
  }
}

TEST(HeckeIdentities, NormalizedEigenvaluesAreSchurPolynomials) {
  const SphericalEigendata e = tempered(3, 0.8);
  for (int r = 0; r <= 5; ++r) {
    cplx h = 0;
    for (int j = 0; j <= r; ++j) h += std::pow(e.chi1, j) * std::pow(e.chi2, r - j);
    EXPECT_NEAR(std::abs(normalized_eigenvalue(e, r) - h), 0.0, 1e-10);
  }
}

TEST(DualOffset, ModulusAtLeastOne) {
  for (int q : {2, 3, 5}) {
    double mn = 1e9;
    int arg = -1;
    for (int k = 0; k < 64; ++k) {
      const double v = std::abs(dual_offset(q, std::polar(1.0, 2 * std::numbers::pi * k / 64)));
      if (v < mn) mn = v, arg = k;
    }
    EXPECT_NEAR(mn, 1.0, 1e-15);
    EXPECT_EQ(arg, 0);
  }
}

TEST(DualOffset, VanishingFirstEigenvalue) {
  const auto e = SphericalEigendata::from_dual(3, 0.0, 1.0);
  EXPECT_NEAR(std::abs(dual_eigenvalue_l(e)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(dual_eigenvalue_l2(e) + 1.0), 0.0, 1e-12);
  const auto f = SphericalEigendata::from_dual(3, 0.0, -1.0);
  EXPECT_NEAR(std::abs(dual_eigenvalue_l2(f)), 5.0 / 3, 1e-12);
}

TEST(DualOffset, FromDualRoundTrip) {
  const cplx lam(0.7, -1.1), w = std::polar(1.0, 2.2);
  const auto e = SphericalEigendata::from_dual(5, lam, w);
  EXPECT_NEAR(std::abs(dual_eigenvalue_l(e) - lam), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(e.central() - w), 0.0, 1e-12);
}

TEST(Corollary, ScanMinimumIsOne) {
  for (int q : {3, 5}) {
    const auto scan = corollary_bound_scan(q, 7.0 / 64);
    EXPECT_GE(scan.points, 9000u);
    EXPECT_GE(scan.minimum, 1 - 1e-9);
    EXPECT_NEAR(scan.minimum, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(scan.lambda_at_min), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(scan.w_at_min - 1.0), 0.0, 1e-12);
  }
}

TEST(Corollary, TemperedExtremes) {
  for (int q : {3, 5})
    for (double th : {0.0, std::numbers::pi}) {
      const auto e = tempered(q, th);
      EXPECT_GE(std::abs(dual_eigenvalue_l(e)) + std::abs(dual_eigenvalue_l2(e)), 1.0);
    }
}

TEST(Exponents, ExactValues) {
  const auto x = amplifier_exponents(Rational(7, 64));
  EXPECT_EQ(x.b, Rational(25, 164));
  EXPECT_EQ(x.delta, Rational(225, 5248));
  EXPECT_GT(x.delta, Rational(1, 24));
  EXPECT_EQ(x.delta - Rational(1, 24), Rational(225, 5248) - Rational(1, 24));
  const auto z = amplifier_exponents(Rational(0));
  EXPECT_EQ(z.b, Rational(1, 6));
  EXPECT_EQ(z.delta, Rational(1, 12));
  EXPECT_THROW(amplifier_exponents(Rational(1, 4)), DomainError);
  EXPECT_THROW(amplifier_exponents(Rational(-1, 8)), DomainError);
}

TEST(Exponents, DeltaDecreasing) {
  Rational prev = amplifier_exponents(Rational(0)).delta;
  for (int k = 1; k <= 100; ++k) {
    const Rational d = amplifier_exponents(Rational(7 * k, 6400)).delta;
    EXPECT_LT(d, prev) << k;
    prev = d;
  }
}

TEST(Exponents, ParseRational) {
  EXPECT_EQ(parse_rational("7/64"), Rational(7, 64));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(to_string(Rational(225, 5248)), "225/5248");
  EXPECT_THROW(parse_rational("7/0"), DomainError);
  EXPECT_THROW(parse_rational("x/2"), DomainError);
}

TEST(PrimeWindow, Enumeration) {
  EXPECT_EQ(prime_window(1e4, Rational(1, 4)), (std::vector<std::uint64_t>{11, 13, 17, 19}));
  // 10^(4 * 25/164) is about 4.07.
  EXPECT_EQ(prime_window(1e4, Rational(25, 164)), (std::vector<std::uint64_t>{5, 7}));
}

TEST(ExactModuli, Decision) {
  EXPECT_TRUE(sum_of_moduli_at_least_one(0, 1));
  EXPECT_TRUE(sum_of_moduli_at_least_one(Rational(1, 4), Rational(1, 4)));
  EXPECT_FALSE(sum_of_moduli_at_least_one(Rational(1, 4), Rational(1, 5)));
  EXPECT_TRUE(sum_of_moduli_at_least_one(Rational(1, 9), Rational(4, 9)));
  EXPECT_FALSE(sum_of_moduli_at_least_one(Rational(1, 9), Rational(4, 9) - Rational(1, 1000000)));
}

TEST(ExactEigendata, MatchesFloatingRelation) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto e = random_exact_eigendata(rng, 7, 7.0 / 64, k % 2 == 0);
    EXPECT_EQ(e.w.norm2(), Rational(1));
    const auto s = SphericalEigendata::from_dual(7, e.lambda_l.to_cplx(), e.w.to_cplx());
    EXPECT_NEAR(std::abs(dual_eigenvalue_l2(s) - e.lambda_l2(7).to_cplx()), 0.0, 1e-10);
    if (k % 2 == 0) EXPECT_LE(e.lambda_l.norm2(), Rational(4));
  }
}

TEST(Amplifier, VanishingFirstEigenvalues) {
  const Rational b(1, 4);
  const double N = 1e8;  // window [100, 200]
  auto primes = prime_window(N, b);
  ASSERT_GE(primes.size(), 20u);
  AmplifierSpec spec{Rational(7, 64), N, b, {}};
  for (int k = 0; k < 20; ++k) spec.T.push_back({primes[k], {RationalComplex(1), RationalComplex(0)}});
  const auto rep = synthetic_amplifier_check(spec);
  EXPECT_EQ(rep.size, 20u);
  EXPECT_DOUBLE_EQ(rep.amplified_sum, 20.0);
  EXPECT_TRUE(rep.exact_lower_bound);
  for (const auto& c : rep.coefficients)
    EXPECT_TRUE(std::abs(c.a) == 0.0 || std::abs(std::abs(c.a) - 1.0) < 1e-15);
}

TEST(Amplifier, EmptySet) {
  const auto rep = synthetic_amplifier_check(AmplifierSpec{Rational(7, 64), 1e4, Rational(25, 164), {}});
  EXPECT_EQ(rep.amplified_sum, 0.0);
  EXPECT_EQ(rep.norm_sum, 0.0);
  EXPECT_EQ(rep.pair_sum, 0.0);
  EXPECT_TRUE(rep.exact_lower_bound);
}

TEST(Amplifier, RandomSetsMeetTheBound) {
  std::mt19937_64 rng(5);
  const Rational alpha(7, 64);
  const double N = 1e8;
  const Rational b(1, 4);
  const auto primes = prime_window(N, b);
  for (int k = 0; k < 50; ++k) {
    AmplifierSpec spec{alpha, N, b, {}};
    for (auto l : primes) spec.T.push_back({l, random_exact_eigendata(rng, l, 7.0 / 64, k % 3 == 0)});
    const auto rep = synthetic_amplifier_check(spec);
    EXPECT_TRUE(rep.exact_lower_bound) << k;
    EXPECT_GE(rep.amplified_sum, static_cast<double>(rep.size) - 1e-9);
    EXPECT_GT(rep.c_norm, 0.0);
    EXPECT_GT(rep.c_pair, 0.0);
  }
}

TEST(Amplifier, Rejections) {
  AmplifierSpec spec{Rational(7, 64), 1e8, Rational(1, 4), {}};
  spec.T.push_back({101, {RationalComplex(Rational(1, 2)), RationalComplex(0)}});
  EXPECT_THROW(synthetic_amplifier_check(spec), DomainError);
  spec.T[0] = {102, {RationalComplex(1), RationalComplex(0)}};
  EXPECT_THROW(synthetic_amplifier_check(spec), DomainError);
  spec.T[0] = {11, {RationalComplex(1), RationalComplex(0)}};
  EXPECT_THROW(synthetic_amplifier_check(spec), DomainError);
}

TEST(Conductor, Bookkeeping) {
  auto d = conductor_bookkeeping({{3, 0, 0, 3}});
  EXPECT_EQ(d.S, (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(d.N, 27u);
  EXPECT_EQ(d.places[0].e, 3);
  d = conductor_bookkeeping({{3, 1, 1, 2}});
  EXPECT_TRUE(d.places[0].in_S);
  EXPECT_EQ(d.places[0].e, 1);
  d = conductor_bookkeeping({{3, 2, 0, 3}});
  EXPECT_FALSE(d.places[0].in_S);
  EXPECT_FALSE(d.places[0].e.has_value());
  EXPECT_EQ(d.N, 1u);
  d = conductor_bookkeeping({{3, 0, 0, 3}, {5, 1, 0, 2}, {7, 2, 1, 3}});
  EXPECT_EQ(d.S, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_EQ(d.N, 27u * 25u);
}
