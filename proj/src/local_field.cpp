#include "localtriple/local_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace lt {

namespace {

constexpr std::int64_t kExactZero = std::int64_t{1} << 40;

std::int64_t clamp_bound(std::int64_t b) { return std::min(b, kExactZero); }

FieldElem make_zero(int p, std::int64_t bound) {
  FieldElem z;
  z.p = p;
  z.zero = true;
  z.val = clamp_bound(bound);
  z.unit = 0;
  z.prec = 0;
  z.mod = 1;
  return z;
}

void require_same_field(const FieldElem& a, const FieldElem& b) {
  if (a.p != b.p || a.p == 0) throw DomainError("field elements over different primes");
}

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 t = 0, nt = 1;
  __int128 r = m, nr = a % m;
  while (nr != 0) {
    __int128 qt = r / nr;
    std::swap(t, nt);
    nt -= qt * t;
    std::swap(r, nr);
    nr -= qt * r;
  }
  if (r != 1) throw DomainError("element is not invertible modulo " + std::to_string(m));
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

bool is_odd_prime(std::int64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

std::int64_t FieldElem::valuation() const {
  if (zero) throw DomainError("valuation of zero");
  return val;
}

std::int64_t FieldElem::absolute_precision() const { return zero ? val : val + prec; }

std::uint64_t FieldElem::unit_mod(int r) const {
  if (zero) throw DomainError("unit part of zero");
  if (r > prec)
    throw PrecisionError("unit known to p^" + std::to_string(prec) + ", asked for p^" +
                         std::to_string(r));
  return unit % ipow(p, r);
}

std::uint64_t FieldElem::residue(int r) const {
  if (r <= 0) return 0;
  if (absolute_precision() < r)
    throw PrecisionError("residue mod p^" + std::to_string(r) + " needs absolute precision " +
                         std::to_string(r) + ", have " + std::to_string(absolute_precision()));
  if (zero || val >= r) return 0;
  if (val < 0) throw DomainError("residue of a non-integral element");
  std::uint64_t m = ipow(p, r);
  return mulmod(ipow(p, static_cast<int>(val)), unit % m, m);
}

std::string FieldElem::to_string() const {
  std::ostringstream os;
  if (zero)
    os << "O(p^" << val << ")";
  else
    os << "p^" << val << "*" << unit << " (mod p^" << prec << ")";
  return os.str();
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  require_same_field(a, b);
  if (a.zero || b.zero) {
    return make_zero(a.p, a.val + b.val);
  }
  FieldElem r;
  r.p = a.p;
  r.zero = false;
  r.val = a.val + b.val;
  r.prec = std::min(a.prec, b.prec);
  r.mod = std::min(a.mod, b.mod);
  r.unit = mulmod(a.unit % r.mod, b.unit % r.mod, r.mod);
  return r;
}

FieldElem inverse(const FieldElem& a) {
  if (a.zero) throw DomainError("inverse of zero");
  FieldElem r = a;
  r.val = -a.val;
  r.unit = invmod(a.unit, a.mod);
  return r;
}

FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * inverse(b); }

FieldElem operator-(const FieldElem& a) {
  FieldElem r = a;
  if (!a.zero) r.unit = (a.mod - a.unit % a.mod) % a.mod;
  return r;
}

FieldElem operator+(const FieldElem& a0, const FieldElem& b0) {
  require_same_field(a0, b0);
  const int p = a0.p;
  if (a0.zero && b0.zero) return make_zero(p, std::min(a0.val, b0.val));
  if (a0.zero || b0.zero) {
    const FieldElem& z = a0.zero ? a0 : b0;
    const FieldElem& x = a0.zero ? b0 : a0;
    if (z.val <= x.val) return make_zero(p, z.val);
    FieldElem r = x;
    std::int64_t keep = z.val - x.val;
    if (keep < r.prec) {
      r.prec = static_cast<std::int32_t>(keep);
      r.mod = ipow(p, r.prec);
      r.unit %= r.mod;
    }
    return r;
  }
  const FieldElem& a = a0.val <= b0.val ? a0 : b0;
  const FieldElem& b = a0.val <= b0.val ? b0 : a0;
  std::int64_t abs_prec = std::min(a.val + a.prec, b.val + b.prec);
  if (abs_prec <= a.val) return make_zero(p, abs_prec);
  int r = static_cast<int>(abs_prec - a.val);
  std::uint64_t m = ipow(p, r);
  std::uint64_t s = a.unit % m;
  std::int64_t gap = b.val - a.val;
  if (gap < r) s = (s + mulmod(b.unit % m, ipow(p, static_cast<int>(gap)), m)) % m;
  if (s == 0) return make_zero(p, abs_prec);
  int t = 0;
  while (s % p == 0) {
    s /= p;
    ++t;
  }
  FieldElem out;
  out.p = p;
  out.zero = false;
  out.val = a.val + t;
  out.prec = r - t;
  out.mod = ipow(p, out.prec);
  out.unit = s % out.mod;
  return out;
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a + (-b); }

FieldElem shift(const FieldElem& a, std::int64_t n) {
  FieldElem r = a;
  r.val = a.zero ? clamp_bound(a.val + n) : a.val + n;
  return r;
}

bool approx_equal(const FieldElem& a, const FieldElem& b) { return (a - b).is_zero(); }

LocalField::LocalField(int p, int precision) : p_(p) {
  if (!is_odd_prime(p)) throw DomainError("p must be an odd prime, got " + std::to_string(p));
  int max_prec = 0;
  unsigned __int128 v = 1;
  const unsigned __int128 limit = static_cast<unsigned __int128>(1) << 62;
  while (v * static_cast<unsigned>(p) < limit) {
    v *= static_cast<unsigned>(p);
    ++max_prec;
  }
  if (precision < 0 || precision > max_prec)
    throw DomainError("precision must lie in [1, " + std::to_string(max_prec) + "]");
  prec_ = precision == 0 ? max_prec : precision;
  pows_.resize(prec_ + 1);
  pows_[0] = 1;
  for (int i = 1; i <= prec_; ++i) pows_[i] = pows_[i - 1] * static_cast<std::uint64_t>(p);
}

std::uint64_t LocalField::pow(int k) const {
  if (k < 0 || k > prec_) throw PrecisionError("p^" + std::to_string(k) + " beyond working precision");
  return pows_[k];
}

FieldElem LocalField::zero(std::int64_t bound) const { return make_zero(p_, bound); }

FieldElem LocalField::make(std::int64_t n, std::int64_t t) const {
  return make_with_precision(n, t, prec_);
}

FieldElem LocalField::make_with_precision(std::int64_t n, std::int64_t t, int r) const {
  if (r < 0 || r > prec_) throw PrecisionError("requested precision beyond working precision");
  if (t == 0) return make_zero(p_, kExactZero);
  bool neg = t < 0;
  std::uint64_t u = neg ? static_cast<std::uint64_t>(-(t + 1)) + 1 : static_cast<std::uint64_t>(t);
  while (u % p_ == 0) {
    u /= p_;
    ++n;
  }
  FieldElem e;
  e.p = p_;
  e.zero = false;
  e.val = n;
  e.prec = r;
  e.mod = pows_[r];
  e.unit = u % e.mod;
  if (neg) e.unit = (e.mod - e.unit) % e.mod;
  return e;
}

double LocalField::abs(const FieldElem& x) const {
  if (x.zero) return 0.0;
  return std::pow(static_cast<double>(p_), -static_cast<double>(x.val));
}

std::vector<std::uint64_t> LocalField::unit_classes(int r) const {
  std::uint64_t m = pow(r);
  std::vector<std::uint64_t> out;
  out.reserve(m - m / p_);
  if (r == 0) return {1};
  for (std::uint64_t u = 1; u < m; ++u)
    if (u % p_ != 0) out.push_back(u);
  return out;
}

cplx LocalField::shell_integral_multiplicative(const std::function<cplx(const FieldElem&)>& f,
                                               std::int64_t n, int r) const {
  if (r > prec_) throw PrecisionError("shell resolution beyond working precision");
  auto units = unit_classes(r);
  cplx acc = 0;
  for (auto u : units) acc += f(make(n, static_cast<std::int64_t>(u)));
  return acc / static_cast<double>(units.size());
}

cplx LocalField::shell_integral_additive(const std::function<cplx(const FieldElem&)>& f,
                                         std::int64_t n, int r) const {
  double vol = std::pow(static_cast<double>(p_), -static_cast<double>(n)) * (1.0 - 1.0 / p_);
  return vol * shell_integral_multiplicative(f, n, r);
}

Mat2 Mat2::from_entries(const FieldElem& x, const FieldElem& y, const FieldElem& z,
                        const FieldElem& w) {
  return with_det(x, y, z, w, x * w - y * z);
}

Mat2 Mat2::with_det(const FieldElem& x, const FieldElem& y, const FieldElem& z,
                    const FieldElem& w, const FieldElem& det) {
  if (det.is_zero()) throw DomainError("singular matrix");
  return Mat2{x, y, z, w, det};
}

Mat2 Mat2::inverse() const {
  FieldElem di = lt::inverse(det);
  return Mat2{w * di, -y * di, -z * di, x * di, di};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2{a.x * b.x + a.y * b.z, a.x * b.y + a.y * b.w, a.z * b.x + a.w * b.z,
              a.z * b.y + a.w * b.w, a.det * b.det};
}

bool approx_equal(const Mat2& a, const Mat2& b) {
  return approx_equal(a.x, b.x) && approx_equal(a.y, b.y) && approx_equal(a.z, b.z) &&
         approx_equal(a.w, b.w) && approx_equal(a.det, b.det);
}

}  // namespace lt
