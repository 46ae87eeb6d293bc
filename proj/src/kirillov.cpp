#include "localtriple/kirillov.hpp"

#include <cmath>
#include <numbers>

namespace lt {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t orbit_hash(std::uint64_t seed, const MultChar& nu) {
  return splitmix(splitmix(splitmix(seed) ^ static_cast<std::uint64_t>(nu.level)) ^ nu.index);
}

bool key_less(const MultChar& a, const MultChar& b) {
  return a.level != b.level ? a.level < b.level : a.index < b.index;
}

}  // namespace

ShellFunction ShellFunction::indicator(int resolution, std::int64_t n, std::uint64_t j) {
  ShellFunction f(resolution);
  f.add(n, j, 1.0);
  return f;
}

void ShellFunction::add(std::int64_t n, std::uint64_t j, cplx c) {
  auto [it, inserted] = terms_.try_emplace({n, j}, c);
  if (!inserted) it->second += c;
}

cplx ShellFunction::coefficient(std::int64_t n, std::uint64_t j) const {
  auto it = terms_.find({n, j});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

double ShellFunction::norm_squared() const {
  double s = 0;
  for (const auto& [k, v] : terms_) s += std::norm(v);
  return s;
}

ShellFunction ShellFunction::pruned(double eps) const {
  ShellFunction out(res_);
  for (const auto& [k, v] : terms_)
    if (std::abs(v) >= eps) out.terms_.emplace(k, v);
  return out;
}

std::vector<std::int64_t> ShellFunction::shells() const {
  std::vector<std::int64_t> out;
  for (const auto& [k, v] : terms_)
    if (out.empty() || out.back() != k.first) out.push_back(k.first);
  return out;
}

cplx ShellFunction::operator()(const Characters& X, const FieldElem& x) const {
  if (x.is_zero()) return 0.0;
  cplx acc = 0;
  auto lo = terms_.lower_bound({x.val, 0});
  for (auto it = lo; it != terms_.end() && it->first.first == x.val; ++it)
    acc += it->second * X.unit_value_at(it->first.second, res_, x.unit_mod(res_));
  return acc;
}

std::vector<cplx> ShellFunction::values_on_shell(const Characters& X, std::int64_t n) const {
  std::vector<cplx> coeffs(X.group_order(res_), 0.0);
  auto lo = terms_.lower_bound({n, 0});
  for (auto it = lo; it != terms_.end() && it->first.first == n; ++it)
    coeffs[it->first.second] += it->second;
  return X.synthesize_on_shell(coeffs, res_);
}

ShellFunction& ShellFunction::operator*=(cplx s) {
  for (auto& [k, v] : terms_) v *= s;
  return *this;
}

ShellFunction& ShellFunction::operator+=(const ShellFunction& o) {
  if (o.res_ != res_) throw DomainError("shell functions at different resolutions");
  for (const auto& [k, v] : o.terms_) add(k.first, k.second, v);
  return *this;
}

double distance(const ShellFunction& a, const ShellFunction& b) {
  ShellFunction d = a;
  ShellFunction nb = b;
  nb *= -1.0;
  d += nb;
  return std::sqrt(d.norm_squared());
}

SupercuspidalData::SupercuspidalData(const Characters& X, int c, const MultChar& central,
                                     std::uint64_t seed)
    : X_(&X), c_(c), w_(central), seed_(seed) {
  if (c < 2) throw DomainError("supercuspidal level must be at least 2");
  if (central.level > 1) throw DomainError("central character must have level <= 1");
  if (std::abs(std::abs(central.at_uniformizer) - 1.0) > 1e-12)
    throw DomainError("central character must be unitary");
  const std::uint64_t minus_one = X.field().pow(1) - 1;
  w0m1_ = X.unit_value(w_, minus_one).real();
}

std::int64_t SupercuspidalData::n_of(const MultChar& nu) const {
  return std::min<std::int64_t>(-c_, -2 * static_cast<std::int64_t>(nu.level));
}

cplx SupercuspidalData::C(const MultChar& nu0) const {
  const Characters& X = *X_;
  MultChar nu = X.make_char(nu0.level, nu0.index);
  MultChar w0{w_.level, w_.index, 1.0};
  MultChar partner = X.multiply(X.inverse(nu), X.inverse(w0));
  partner.at_uniformizer = 1.0;
  const cplx product = w0m1_ * std::pow(z0(), static_cast<double>(n_of(nu)));
  if (X.same_unit_part(nu, partner)) {
    cplx root = std::sqrt(product);
    return (orbit_hash(seed_, nu) & 1) ? -root : root;
  }
  const MultChar& rep = key_less(nu, partner) ? nu : partner;
  double theta = static_cast<double>(orbit_hash(seed_, rep) >> 11) * 0x1.0p-53 * 2 * std::numbers::pi;
  cplx c_rep = std::polar(1.0, theta);
  return X.same_unit_part(nu, rep) ? c_rep : product / c_rep;
}

ShellFunction act_borel(const SupercuspidalData& D, const ShellFunction& f, const FieldElem& a1,
                        const FieldElem& m, const FieldElem& a2) {
  const Characters& X = D.characters();
  const int R = f.resolution();
  const std::uint64_t N = X.group_order(R);
  FieldElem t = a1 / a2;
  FieldElem mp = m / a2;
  const cplx wa2 = X.eval(D.central(), a2);

  // Dilation: 1_{nu,n}(t x) = nu(u_t) 1_{nu, n - v(t)}.
  ShellFunction dil(R);
  for (const auto& [key, v] : f.terms()) {
    cplx nu_t = X.unit_value_at(key.second, R, t.unit_mod(R));
    dil.add(key.first - t.val, key.second, v * nu_t);
  }
  ShellFunction out(R);
  for (std::int64_t n : dil.shells()) {
    int level = mp.is_zero() ? 0 : static_cast<int>(std::max<std::int64_t>(0, -mp.val - n));
    if (mp.is_zero() && mp.val + n < 0) throw PrecisionError("m too imprecise for psi on shell");
    auto lo = dil.terms().lower_bound({n, 0});
    if (level == 0) {
      for (auto it = lo; it != dil.terms().end() && it->first.first == n; ++it)
        out.add(n, it->first.second, it->second * wa2);
      continue;
    }
    if (level > R)
      throw PrecisionError("psi(m x) on shell " + std::to_string(n) + " has level " +
                           std::to_string(level) + " beyond resolution " + std::to_string(R));
    if (mp.prec < level) throw PrecisionError("m known to insufficient precision");
    const std::uint64_t M = X.group_order(level);
    std::vector<cplx> vals(M);
    for (std::uint64_t e = 0; e < M; ++e) {
      FieldElem u = X.field().make(n, static_cast<std::int64_t>(X.unit_from_exponent(e, level)));
      vals[e] = X.psi(mp * u);
    }
    auto coef = X.fourier_on_shell(vals, level);
    const std::uint64_t scale = ipow(X.p(), R - level);
    for (auto it = lo; it != dil.terms().end() && it->first.first == n; ++it) {
      for (std::uint64_t l = 0; l < M; ++l) {
        if (std::abs(coef[l]) < 1e-15) continue;
        std::uint64_t j = (it->first.second + l * scale) % N;
        out.add(n, j, it->second * coef[l] * wa2);
      }
    }
  }
  return out;
}

ShellFunction act_omega(const SupercuspidalData& D, const ShellFunction& f) {
  const Characters& X = D.characters();
  const int R = f.resolution();
  if (R > X.field().precision() - 1) throw PrecisionError("resolution beyond working precision");
  const std::uint64_t N = X.group_order(R);
  const std::uint64_t w0j = X.index_at(D.central(), R);
  const cplx z0 = D.z0();
  ShellFunction out(R);
  for (const auto& [key, v] : f.terms()) {
    const auto [n, j] = key;
    MultChar nu_inv = X.from_index_at((N - j) % N, R);
    MultChar nu_w0inv = X.from_index_at((j + N - w0j) % N, R);
    std::uint64_t target = ((N - j) % N + w0j) % N;
    cplx coeff = D.C(nu_w0inv) * std::pow(z0, -static_cast<double>(n));
    out.add(-n + D.n_of(nu_inv), target, v * coeff);
  }
  return out;
}

ShellFunction act_lower(const SupercuspidalData& D, const ShellFunction& f, const FieldElem& x) {
  const LocalField& F = D.characters().field();
  ShellFunction g = act_omega(D, f);
  g = act_borel(D, g, F.one(), -x, F.one());
  g = act_omega(D, g);
  g *= D.w0_minus_one();
  return g;
}

cplx pair_upper_translate(const SupercuspidalData& D, const ShellFunction& G, const FieldElem& a,
                          const FieldElem& m, int k) {
  const Characters& X = D.characters();
  const LocalField& F = X.field();
  const int R = G.resolution();
  const std::int64_t shell = k + a.valuation();
  // E_j = avg_u psi(m pi^k u) nu_j(u).
  int level = m.is_zero() ? 0 : static_cast<int>(std::max<std::int64_t>(0, -m.val - k));
  const int r = std::max(R, level);
  const std::uint64_t N = X.group_order(r);
  std::vector<cplx> vals(N);
  for (std::uint64_t e = 0; e < N; ++e) {
    FieldElem u = F.make(k, static_cast<std::int64_t>(X.unit_from_exponent(e, r)));
    vals[e] = X.psi(m * u);
  }
  auto E = X.synthesize_on_shell(vals, r);
  for (auto& v : E) v /= static_cast<double>(N);
  const std::uint64_t scale = ipow(X.p(), r - R);
  const std::uint64_t ua = a.unit_mod(R);
  cplx acc = 0;
  auto lo = G.terms().lower_bound({shell, 0});
  for (auto it = lo; it != G.terms().end() && it->first.first == shell; ++it)
    acc += it->second * X.unit_value_at(it->first.second, R, ua) * E[it->first.second * scale];
  return acc;
}

}  // namespace lt
