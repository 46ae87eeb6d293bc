#include "localtriple/hecke_amplifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <set>

#include "localtriple/matrix_coefficients.hpp"

namespace lt {

namespace {

using boost::multiprecision::cpp_int;

cplx h2(cplx a, cplx b) { return a * a + a * b + b * b; }

Rational rational_near(double x, int denom) {
  return Rational(cpp_int(static_cast<long long>(std::llround(x * denom))), cpp_int(denom));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(cpp_int(text));
    cpp_int num(text.substr(0, slash)), den(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw DomainError("malformed rational '" + text + "'");
  }
}

std::string to_string(const Rational& r) { return r.str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

SphericalEigendata::SphericalEigendata(int q_, cplx c1, cplx c2) : q(q_), chi1(c1), chi2(c2) {
  if (q < 2) throw DomainError("residue field size must be at least 2");
  if (std::abs(std::abs(c1 * c2) - 1.0) > 1e-12)
    throw DomainError("Satake parameters must have |chi1 chi2| = 1");
}

SphericalEigendata SphericalEigendata::from_dual(int q, cplx lambda_l, cplx w) {
  // Contragredient parameters are the roots of x^2 - lambda_l x + 1/w.
  const cplx wd = 1.0 / w;
  const cplx disc = std::sqrt(lambda_l * lambda_l - 4.0 * wd);
  const cplx r1 = (lambda_l + disc) / 2.0, r2 = (lambda_l - disc) / 2.0;
  return SphericalEigendata(q, 1.0 / r1, 1.0 / r2);
}

bool SphericalEigendata::tempered(double tol) const { return std::abs(std::abs(chi1) - 1.0) <= tol; }

cplx hecke_star_eigenvalue(const SphericalEigendata& e, int r) {
  if (r < 0) throw DomainError("Hecke index must be nonnegative");
  if (r == 0) return 1.0;
  return (e.q + 1.0) * std::pow(static_cast<double>(e.q), r - 1) *
         macdonald_spherical(e.q, e.chi1, e.chi2, r);
}

cplx dual_eigenvalue_l(const SphericalEigendata& e) { return 1.0 / e.chi1 + 1.0 / e.chi2; }

cplx dual_eigenvalue_l2(const SphericalEigendata& e) {
  const cplx wd = 1.0 / e.central();
  return h2(1.0 / e.chi1, 1.0 / e.chi2) + (1.0 - wd) / static_cast<double>(e.q);
}

cplx dual_offset(int q, cplx w) {
  const double qd = q;
  return 1.0 / qd - (qd + 1) / (qd * w);
}

cplx normalized_eigenvalue(const SphericalEigendata& e, int r) {
  cplx s = 0, wj = 1;
  for (int j = 0; 2 * j <= r; ++j, wj *= e.central()) s += wj * hecke_star_eigenvalue(e, r - 2 * j);
  return s * std::pow(static_cast<double>(e.q), -0.5 * r);
}

double HeckeReport::max_residual() const {
  return std::max({convolution, dual_l, dual_l2, relation, lemma});
}

HeckeReport verify_hecke_identities(const SphericalEigendata& e, double tol) {
  const double q = e.q;
  const cplx w = e.central();
  const cplx s1 = hecke_star_eigenvalue(e, 1), s2 = hecke_star_eigenvalue(e, 2);
  const cplx d1 = dual_eigenvalue_l(e), d2 = dual_eigenvalue_l2(e);
  HeckeReport rep;
  rep.convolution = std::abs(s1 * s1 - s2 - (q + 1) * w);
  rep.dual_l = std::abs(d1 - s1 / (w * std::sqrt(q)));
  rep.dual_l2 = std::abs(d2 - (s2 / (w * w) + 1.0) / q);
  rep.relation = std::abs(d2 - d1 * d1 - dual_offset(e.q, w));
  for (int r = 0; r <= 2; ++r)
    for (int s = 0; s <= 2; ++s) {
      cplx rhs = 0, wj = 1;
      for (int j = 0; j <= std::min(r, s); ++j, wj *= w) rhs += wj * normalized_eigenvalue(e, r + s - 2 * j);
      const cplx lhs = normalized_eigenvalue(e, r) * normalized_eigenvalue(e, s);
      rep.lemma = std::max(rep.lemma, std::abs(lhs - rhs));
    }
  rep.pass = rep.max_residual() <= tol;
  return rep;
}

CorollaryScan corollary_bound_scan(int q, double alpha, int n_w, int n_radius, int n_angle) {
  const double two_pi = 2 * std::numbers::pi;
  const double radius = std::pow(q, alpha) + std::pow(q, -alpha);
  CorollaryScan scan;
  scan.minimum = std::numeric_limits<double>::infinity();
  auto visit = [&](cplx lambda, cplx w) {
    const double v = std::abs(lambda * lambda + dual_offset(q, w)) + std::abs(lambda);
    ++scan.points;
    if (v < scan.minimum) {
      scan.minimum = v;
      scan.lambda_at_min = lambda;
      scan.w_at_min = w;
    }
  };
  for (int k = 0; k < n_w; ++k) {
    const cplx w = std::polar(1.0, two_pi * k / n_w);
    visit(0.0, w);
    for (int i = 1; i < n_radius; ++i)
      for (int j = 0; j < n_angle; ++j)
        visit(std::polar(radius * i / (n_radius - 1), two_pi * j / n_angle), w);
    // Satake samples: r u + v / r with w^{-1} = u v.
    for (double r : {1.0, std::pow(q, alpha)})
      for (int j = 0; j < n_angle; ++j) {
        const cplx u = std::polar(1.0, two_pi * j / n_angle);
        const cplx v = 1.0 / (w * u);
        visit(r * u + v / r, w);
      }
  }
  return scan;
}

AmplifierExponents amplifier_exponents(const Rational& alpha) {
  if (alpha < 0 || alpha >= Rational(1, 4))
    throw DomainError("exponent alpha must satisfy 0 <= alpha < 1/4");
  const Rational half(1, 2);
  const Rational den = 4 * alpha - 3;
  return {(alpha - half) / den, -(alpha - half) * (2 * alpha - half) / den};
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_window(double N, const Rational& b) {
  const double lo = std::pow(N, to_double(b)), hi = 2 * lo;
  std::vector<std::uint64_t> out;
  for (auto n = static_cast<std::uint64_t>(std::ceil(lo)); static_cast<double>(n) <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
  return {a.re + b.re, a.im + b.im};
}
RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
  return {a.re - b.re, a.im - b.im};
}
RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
bool operator==(const RationalComplex& a, const RationalComplex& b) {
  return a.re == b.re && a.im == b.im;
}

RationalComplex unit_point(const Rational& t) {
  const Rational d = 1 + t * t;
  return {(1 - t * t) / d, 2 * t / d};
}

RationalComplex ExactDualEigendata::lambda_l2(std::uint64_t q) const {
  const Rational qr{cpp_int(q)};
  const RationalComplex off = RationalComplex(1 / qr) - RationalComplex((qr + 1) / qr) * w.conj();
  return lambda_l * lambda_l + off;
}

ExactDualEigendata random_exact_eigendata(std::mt19937_64& rng, std::uint64_t q, double alpha,
                                          bool tempered) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 40);
  auto unit = [&] { return unit_point(Rational(num(rng), den(rng))); };
  const RationalComplex u = unit(), v = unit();
  Rational r = 1;
  if (!tempered) {
    std::uniform_real_distribution<double> x(-alpha, alpha);
    const double qa = std::pow(static_cast<double>(q), alpha);
    do r = rational_near(std::pow(static_cast<double>(q), x(rng)), 1000);
    while (to_double(r) > qa || to_double(r) < 1 / qa);
  }
  ExactDualEigendata e;
  e.w = (u * v).conj();
  e.lambda_l = RationalComplex(r) * u + RationalComplex(1 / r) * v;
  return e;
}

bool sum_of_moduli_at_least_one(const Rational& x2, const Rational& y2) {
  if (x2 >= 1 || y2 >= 1) return true;
  // sqrt(y2) >= 1 - sqrt(x2) iff 2 sqrt(x2) >= 1 + x2 - y2.
  const Rational rhs = 1 + x2 - y2;
  if (rhs <= 0) return true;
  return 4 * x2 >= rhs * rhs;
}

AmplifierReport synthetic_amplifier_check(const AmplifierSpec& spec) {
  AmplifierReport rep;
  rep.size = spec.T.size();
  const double b = to_double(spec.b), alpha = to_double(spec.alpha);
  const double Nb = spec.N > 0 ? std::pow(spec.N, b) : 0.0;
  std::set<std::uint64_t> seen;
  for (const auto& t : spec.T) {
    if (!is_prime(t.norm)) throw DomainError("amplifier norm " + std::to_string(t.norm) + " is not prime");
    if (!seen.insert(t.norm).second) throw DomainError("repeated amplifier norm " + std::to_string(t.norm));
    if (t.e.w.norm2() != 1) throw DomainError("central value off the unit circle at " + std::to_string(t.norm));
    if (spec.check_window && (t.norm < Nb || t.norm > 2 * Nb))
      throw DomainError("amplifier norm " + std::to_string(t.norm) + " outside [N^b, 2N^b]");
  }
  rep.exact_lower_bound = true;
  for (const auto& t : spec.T) {
    const RationalComplex l1 = t.e.lambda_l, l2 = t.e.lambda_l2(t.norm);
    rep.exact_lower_bound = rep.exact_lower_bound && sum_of_moduli_at_least_one(l1.norm2(), l2.norm2());
    for (auto [nn, lam] : {std::pair{t.norm, l1.to_cplx()}, std::pair{t.norm * t.norm, l2.to_cplx()}}) {
      const cplx a = std::abs(lam) > 0 ? std::conj(lam) / std::abs(lam) : 0.0;
      rep.coefficients.push_back({nn, a, lam});
      rep.amplified_sum += (a * lam).real();
    }
  }
  for (const auto& c : rep.coefficients) rep.norm_sum += std::sqrt(static_cast<double>(c.n)) * std::abs(c.a);
  for (const auto& x : rep.coefficients)
    for (const auto& y : rep.coefficients) {
      if (std::abs(x.a) == 0 || std::abs(y.a) == 0) continue;
      const std::uint64_t d = std::gcd(x.n, y.n);
      const double ratio = static_cast<double>(x.n / d) * static_cast<double>(y.n / d);
      rep.pair_sum += std::pow(ratio, 2 * alpha - 0.5);
    }
  if (Nb > 0) {
    rep.c_amplified = rep.amplified_sum / Nb;
    rep.c_norm = rep.norm_sum / (Nb * Nb);
    rep.c_pair = rep.pair_sum / std::pow(spec.N, (4 * alpha + 1) * b);
  }
  return rep;
}

ConductorData conductor_bookkeeping(const std::vector<PlaceLevels>& levels) {
  ConductorData out;
  for (const auto& l : levels) {
    if (!is_prime(l.p)) throw DomainError("place " + std::to_string(l.p) + " is not prime");
    if (l.c1 < 0 || l.c2 < 0 || l.c3 < 0) throw DomainError("levels must be nonnegative");
    PlaceData d{l, l.c3 >= 2 * std::max(l.c1, l.c2), std::nullopt};
    if (d.in_S) {
      d.e = l.c3 - l.c2;
      out.S.push_back(l.p);
      out.N *= ipow(l.p, *d.e);
    }
    out.places.push_back(d);
  }
  return out;
}

}  // namespace lt
