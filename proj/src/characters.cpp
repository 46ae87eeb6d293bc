#include "localtriple/characters.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace lt {

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<int, int>, fftw_plan> plans;

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find({n, sign});
    if (it != plans.end()) return it->second;
    std::vector<cplx> tmp(n);
    auto* buf = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans[{n, sign}] = plan;
    return plan;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

bool is_primitive_root(std::uint64_t g, std::uint64_t p) {
  std::uint64_t n = p - 1, m = n;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    if (powmod(g, n / d, p) == 1) return false;
    while (m % d == 0) m /= d;
  }
  if (m > 1 && powmod(g, n / m, p) == 1) return false;
  return true;
}

}  // namespace

void dft(std::vector<cplx>& data, int sign) {
  if (data.size() <= 1) return;
  fftw_plan plan = plan_cache().get(static_cast<int>(data.size()), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

Characters::Characters(const LocalField& field, int table_resolution) : field_(field) {
  const std::uint64_t p = field.p();
  int r = 0;
  while (r < field.precision() && ipow(p, r + 1) <= (1u << 20)) ++r;
  if (table_resolution > 0) {
    if (table_resolution > field.precision())
      throw PrecisionError("character table resolution beyond working precision");
    r = table_resolution;
  }
  res_ = r;
  modulus_ = ipow(p, r);
  order_ = modulus_ - modulus_ / p;

  // Smallest primitive root mod p that stays primitive mod p^2, hence mod every p^k.
  gen_ = 0;
  for (std::uint64_t g = 2; g < p * p; ++g) {
    if (g % p == 0 || !is_primitive_root(g % p, p)) continue;
    if (powmod(g, p - 1, p * p) != 1) {
      gen_ = g;
      break;
    }
  }

  dlog_.assign(modulus_, 0);
  std::uint64_t x = 1;
  for (std::uint64_t e = 0; e < order_; ++e) {
    dlog_[x] = static_cast<std::uint32_t>(e);
    x = mulmod(x, gen_ % modulus_, modulus_);
  }
  mroot_.resize(order_);
  for (std::uint64_t e = 0; e < order_; ++e)
    mroot_[e] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / order_);
  aroot_.resize(modulus_);
  for (std::uint64_t t = 0; t < modulus_; ++t)
    aroot_[t] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / modulus_);
}

std::uint64_t Characters::group_order(int k) const {
  if (k <= 0) return 1;
  std::uint64_t m = ipow(p(), k);
  return m - m / p();
}

std::uint64_t Characters::dlog(std::uint64_t u) const {
  u %= modulus_;
  if (u % p() == 0) throw DomainError("dlog of a non-unit");
  return dlog_[u];
}

std::uint64_t Characters::unit_from_exponent(std::uint64_t e, int r) const {
  if (r <= 0) return 1;
  std::uint64_t m = ipow(p(), r);
  return powmod(gen_, e, m);
}

MultChar Characters::make_char(int k, std::uint64_t j, cplx at_uniformizer) const {
  if (k < 0) throw DomainError("negative character level");
  if (k > res_)
    throw PrecisionError("character level " + std::to_string(k) + " exceeds table resolution " +
                         std::to_string(res_));
  std::uint64_t n = group_order(k);
  j %= n;
  while (k >= 2 && j % p() == 0) {
    j /= p();
    --k;
  }
  if (k == 1 && j == 0) k = 0;
  if (k == 0) j = 0;
  return MultChar{k, j, at_uniformizer};
}

std::uint64_t Characters::index_at(const MultChar& chi, int r) const {
  if (r < chi.level) throw PrecisionError("resolution below character level");
  if (chi.level == 0) return 0;
  return chi.index * ipow(p(), r - chi.level);
}

MultChar Characters::multiply(const MultChar& a, const MultChar& b) const {
  int r = std::max(a.level, b.level);
  std::uint64_t n = group_order(r);
  return make_char(r, (index_at(a, r) + index_at(b, r)) % n, a.at_uniformizer * b.at_uniformizer);
}

MultChar Characters::inverse(const MultChar& a) const {
  std::uint64_t n = group_order(a.level);
  return make_char(a.level, (n - a.index % n) % n, 1.0 / a.at_uniformizer);
}

bool Characters::same_unit_part(const MultChar& a, const MultChar& b) const {
  return a.level == b.level && a.index == b.index;
}

cplx Characters::unit_value_at(std::uint64_t j, int r, std::uint64_t u) const {
  if (r == 0 || j == 0) return 1.0;
  if (r > res_) throw PrecisionError("character level exceeds table resolution");
  std::uint64_t e = dlog(u % ipow(p(), r));
  std::uint64_t scale = ipow(p(), res_ - r);
  unsigned __int128 idx = static_cast<unsigned __int128>(j) * e % order_;
  idx = idx * scale % order_;
  return mroot_[static_cast<std::uint64_t>(idx)];
}

cplx Characters::unit_value(const MultChar& chi, std::uint64_t u) const {
  return unit_value_at(chi.index, chi.level, u);
}

cplx Characters::eval(const MultChar& chi, const FieldElem& x) const {
  if (x.is_zero()) throw DomainError("character evaluated at zero");
  if (x.prec < chi.level)
    throw PrecisionError("character of level " + std::to_string(chi.level) +
                         " needs unit precision " + std::to_string(chi.level) + ", have " +
                         std::to_string(x.prec));
  cplx v = unit_value(chi, x.unit);
  if (x.val != 0) v *= std::pow(chi.at_uniformizer, static_cast<double>(x.val));
  return v;
}

cplx Characters::additive_root(std::uint64_t t, int s) const {
  if (s <= 0) return 1.0;
  std::uint64_t m = ipow(p(), s);
  t %= m;
  if (s <= res_) return aroot_[t * ipow(p(), res_ - s)];
  return std::polar(1.0, static_cast<double>(2.0L * std::numbers::pi_v<long double> * t / m));
}

cplx Characters::psi(const FieldElem& x) const {
  if (x.is_zero()) {
    if (x.val < 0) throw PrecisionError("psi of an element known only modulo a fractional ideal");
    return 1.0;
  }
  if (x.val >= 0) return 1.0;
  if (x.absolute_precision() < 0)
    throw PrecisionError("psi needs absolute precision >= 0, have " +
                         std::to_string(x.absolute_precision()));
  int s = static_cast<int>(-x.val);
  return additive_root(x.unit % ipow(p(), s), s);
}

std::vector<cplx> Characters::fourier_on_shell(std::span<const cplx> values, int r) const {
  std::uint64_t n = group_order(r);
  if (values.size() != n) throw DomainError("fourier_on_shell: wrong number of samples");
  std::vector<cplx> out(values.begin(), values.end());
  dft(out, -1);
  for (auto& c : out) c /= static_cast<double>(n);
  return out;
}

std::vector<cplx> Characters::synthesize_on_shell(std::span<const cplx> coeffs, int r) const {
  std::uint64_t n = group_order(r);
  if (coeffs.size() != n) throw DomainError("synthesize_on_shell: wrong number of coefficients");
  std::vector<cplx> out(coeffs.begin(), coeffs.end());
  dft(out, +1);
  return out;
}

cplx Characters::gauss_sum(const MultChar& chi, std::int64_t n) const {
  int r = std::max<int>({chi.level, static_cast<int>(std::max<std::int64_t>(-n, 0)), 1});
  return field_.shell_integral_additive(
      [&](const FieldElem& u) { return unit_value(chi, u.unit) * psi(shift(u, n)); }, 0, r);
}

}  // namespace lt
