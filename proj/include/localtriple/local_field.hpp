#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lt {

using cplx = std::complex<double>;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
// Inverse of a unit modulo m; throws DomainError if gcd(a, m) != 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);
std::uint64_t ipow(std::uint64_t b, int e);

// Element pi^val * unit of Q_p, with the unit known modulo p^prec.
// A zero element is only known to lie in pi^val O.
struct FieldElem {
  std::int64_t val = 0;
  std::uint64_t unit = 1;
  std::uint64_t mod = 1;
  std::int32_t prec = 0;
  std::int32_t p = 0;
  bool zero = true;

  bool is_zero() const { return zero; }
  // Valuation of a nonzero element; throws DomainError on zero.
  std::int64_t valuation() const;
  // val + prec for nonzero elements, the valuation bound for zero.
  std::int64_t absolute_precision() const;
  // Residue of the unit part modulo p^r (r <= prec).
  std::uint64_t unit_mod(int r) const;
  // Exact integer representative of x mod p^r when x is integral.
  std::uint64_t residue(int r) const;
  std::string to_string() const;
};

FieldElem operator*(const FieldElem& a, const FieldElem& b);
FieldElem operator/(const FieldElem& a, const FieldElem& b);
FieldElem operator+(const FieldElem& a, const FieldElem& b);
FieldElem operator-(const FieldElem& a, const FieldElem& b);
FieldElem operator-(const FieldElem& a);
FieldElem inverse(const FieldElem& a);
// Multiply by pi^n.
FieldElem shift(const FieldElem& a, std::int64_t n);
// True when a - b is zero to the available precision.
bool approx_equal(const FieldElem& a, const FieldElem& b);

class LocalField {
 public:
  // precision 0 picks the largest L with p^L < 2^62.
  explicit LocalField(int p, int precision = 0);

  int p() const { return p_; }
  int q() const { return p_; }
  int precision() const { return prec_; }
  std::uint64_t pow(int k) const;

  FieldElem zero(std::int64_t bound) const;
  FieldElem one() const { return make(0, 1); }
  FieldElem uniformizer_power(std::int64_t n) const { return make(n, 1); }
  // pi^n * t for an integer t (p-part of t is absorbed into the valuation).
  FieldElem make(std::int64_t n, std::int64_t t) const;
  // Same as make but the unit is only known modulo p^r.
  FieldElem make_with_precision(std::int64_t n, std::int64_t t, int r) const;

  double abs(const FieldElem& x) const;
  // Units of Z/p^r as integer representatives in increasing order.
  std::vector<std::uint64_t> unit_classes(int r) const;

  // Integral of f over pi^n O^* for additive Haar measure (vol O = 1),
  // sampling units modulo p^r.
  cplx shell_integral_additive(const std::function<cplx(const FieldElem&)>& f, std::int64_t n,
                               int r) const;
  // Same with multiplicative measure (vol O^* = 1).
  cplx shell_integral_multiplicative(const std::function<cplx(const FieldElem&)>& f,
                                     std::int64_t n, int r) const;

 private:
  int p_;
  int prec_;
  std::vector<std::uint64_t> pows_;
};

bool is_odd_prime(std::int64_t p);

// 2x2 matrix over Q_p with the determinant carried alongside the entries.
struct Mat2 {
  FieldElem x, y, z, w;
  FieldElem det;

  static Mat2 from_entries(const FieldElem& x, const FieldElem& y, const FieldElem& z,
                           const FieldElem& w);
  static Mat2 with_det(const FieldElem& x, const FieldElem& y, const FieldElem& z,
                       const FieldElem& w, const FieldElem& det);
  Mat2 inverse() const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);
bool approx_equal(const Mat2& a, const Mat2& b);

}  // namespace lt
