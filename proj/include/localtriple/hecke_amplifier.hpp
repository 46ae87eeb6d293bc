#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "localtriple/local_field.hpp"

namespace lt {

using Rational = boost::multiprecision::cpp_rational;

// Parses "n", "n/d" or "-n/d".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

// Satake data (chi1(pi), chi2(pi)) of an unramified representation at a place of norm q.
struct SphericalEigendata {
  int q = 0;
  cplx chi1{1.0, 0.0};
  cplx chi2{1.0, 0.0};

  SphericalEigendata() = default;
  // Throws DomainError unless |chi1 chi2| = 1 to 1e-12.
  SphericalEigendata(int q, cplx chi1, cplx chi2);
  // Eigendata with dual first eigenvalue lambda_l and central value w.
  static SphericalEigendata from_dual(int q, cplx lambda_l, cplx w);

  cplx central() const { return chi1 * chi2; }
  bool tempered(double tol = 1e-12) const;
};

// Eigenvalue of the Haar mass on K diag(pi^r, 1) K; 1 at r = 0.
cplx hecke_star_eigenvalue(const SphericalEigendata& e, int r);
// Eigenvalues of the dual operators from the contragredient Satake parameters.
cplx dual_eigenvalue_l(const SphericalEigendata& e);
cplx dual_eigenvalue_l2(const SphericalEigendata& e);
// q^{-1} - (q + 1) / (q w), the constant linking the two dual eigenvalues.
cplx dual_offset(int q, cplx w);
// q^{-r/2} times the eigenvalue of the full determinant-pi^r double coset sum.
cplx normalized_eigenvalue(const SphericalEigendata& e, int r);

struct HeckeReport {
  double convolution = 0;  // lambda*_l^2 - lambda*_{l^2} - (q+1) w
  double dual_l = 0;       // dual_l - w^{-1} q^{-1/2} lambda*_l
  double dual_l2 = 0;      // dual_l2 - q^{-1} (w^{-2} lambda*_{l^2} + 1)
  double relation = 0;     // dual_l2 - dual_l^2 - offset
  double lemma = 0;        // largest product rule residual at r, s <= 2
  bool pass = false;
  double max_residual() const;
};

HeckeReport verify_hecke_identities(const SphericalEigendata& e, double tol = 1e-12);

struct CorollaryScan {
  double minimum = 0;
  cplx lambda_at_min;
  cplx w_at_min;
  std::size_t points = 0;
};

// Minimum of |dual_l2| + |dual_l| over a polar grid of dual_l in the disc of radius
// q^alpha + q^-alpha and w on the unit circle, plus Satake samples on the tempered and
// exceptional circles.
CorollaryScan corollary_bound_scan(int q, double alpha, int n_w = 25, int n_radius = 20,
                                   int n_angle = 20);

struct AmplifierExponents {
  Rational b;
  Rational delta;
};

// b = (alpha - 1/2)/(4 alpha - 3), delta = -(alpha - 1/2)(2 alpha - 1/2)/(4 alpha - 3).
// Throws DomainError unless 0 <= alpha < 1/4.
AmplifierExponents amplifier_exponents(const Rational& alpha);

// Primes in [N^b, 2 N^b].
std::vector<std::uint64_t> prime_window(double N, const Rational& b);
bool is_prime(std::uint64_t n);

struct RationalComplex {
  Rational re, im;
  RationalComplex() = default;
  RationalComplex(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  Rational norm2() const { return re * re + im * im; }
  RationalComplex conj() const { return {re, -im}; }
  cplx to_cplx() const { return {to_double(re), to_double(im)}; }
};
RationalComplex operator+(const RationalComplex& a, const RationalComplex& b);
RationalComplex operator-(const RationalComplex& a, const RationalComplex& b);
RationalComplex operator*(const RationalComplex& a, const RationalComplex& b);
bool operator==(const RationalComplex& a, const RationalComplex& b);

// Point ((1 - t^2) + 2 t i)/(1 + t^2) of the unit circle.
RationalComplex unit_point(const Rational& t);

// Dual eigendata with exact coordinates: w on the unit circle and dual_l.
struct ExactDualEigendata {
  RationalComplex w;
  RationalComplex lambda_l;
  // dual_l^2 + q^{-1} - (q + 1) conj(w) / q.
  RationalComplex lambda_l2(std::uint64_t q) const;
};

// Contragredient Satake parameters r u, r^{-1} v with u, v rational unit points and r a
// rational in [q^-alpha, q^alpha]; r = 1 gives tempered data.
ExactDualEigendata random_exact_eigendata(std::mt19937_64& rng, std::uint64_t q, double alpha,
                                          bool tempered);

// |x| + |y| >= 1 decided exactly from |x|^2 and |y|^2.
bool sum_of_moduli_at_least_one(const Rational& x2, const Rational& y2);

struct AmplifierPrime {
  std::uint64_t norm = 0;
  ExactDualEigendata e;
};

struct AmplifierSpec {
  Rational alpha;
  double N = 0;
  Rational b;
  std::vector<AmplifierPrime> T;
  // Reject norms outside [N^b, 2 N^b].
  bool check_window = true;
};

struct AmplifierCoefficient {
  std::uint64_t n = 0;
  cplx a;
  cplx lambda;
};

struct AmplifierReport {
  std::size_t size = 0;
  double amplified_sum = 0;   // sum a_n dual_n
  bool exact_lower_bound = false;  // every prime contributes at least 1, decided exactly
  double c_amplified = 0;     // amplified_sum / N^b
  double norm_sum = 0;        // sum Nm(n)^{1/2} |a_n|
  double c_norm = 0;          // norm_sum / N^{2b}
  double pair_sum = 0;        // sum Nm(nm/d^2)^{2 alpha - 1/2} |a_n| |a_m|
  double c_pair = 0;          // pair_sum / N^{(4 alpha + 1) b}
  std::vector<AmplifierCoefficient> coefficients;
};

// Throws DomainError on eigendata off the unit circle, composite norms or norms outside the
// window.
AmplifierReport synthetic_amplifier_check(const AmplifierSpec& spec);

struct PlaceLevels {
  std::uint64_t p = 0;
  int c1 = 0, c2 = 0, c3 = 0;
};

struct PlaceData {
  PlaceLevels levels;
  bool in_S = false;
  std::optional<int> e;  // c3 - c2 on S
};

struct ConductorData {
  std::vector<PlaceData> places;
  std::vector<std::uint64_t> S;
  std::uint64_t N = 1;
};

ConductorData conductor_bookkeeping(const std::vector<PlaceLevels>& levels);

}  // namespace lt
