#include "localtriple/matrix_coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace lt {

namespace {

constexpr std::int64_t kExact = 1 << 30;

bool near_unit(cplx z) { return std::abs(std::abs(z) - 1.0) < 1e-12; }

std::int64_t v_of(const FieldElem& x) { return x.val; }

using Invariants = std::array<std::int64_t, 4>;

// Minimal valuations of g, g eta, eta^-1 g and eta^-1 g eta with eta = diag(1, pi);
// each is constant on Iwahori double cosets.
Invariants iwahori_invariants(std::int64_t vx, std::int64_t vy, std::int64_t vz,
                              std::int64_t vw) {
  return {std::min({vx, vy, vz, vw}), std::min({vx, vy + 1, vz, vw + 1}),
          std::min({vx, vy, vz - 1, vw - 1}), std::min({vx, vy + 1, vz - 1, vw})};
}

cplx cpow(cplx z, std::int64_t n) {
  cplx r = 1.0, b = n < 0 ? 1.0 / z : z;
  for (std::int64_t k = std::abs(n); k > 0; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

void require_coset_index(int i) {
  if (i < 0) throw DomainError("coset index must be non-negative");
}

}  // namespace

std::string to_string(RepKind k) {
  switch (k) {
    case RepKind::unramified: return "unramified";
    case RepKind::special: return "special";
    case RepKind::ps_ramified: return "ps_ramified";
    case RepKind::one_ramified: return "one_ramified";
    case RepKind::supercuspidal: return "supercuspidal";
  }
  return "?";
}

RepDescriptor RepDescriptor::unramified(cplx chi1, cplx chi2) {
  if (!near_unit(chi1 * chi2)) throw DomainError("unramified: chi1 chi2 (pi) must be unitary");
  if (!near_unit(chi1)) {
    cplx ratio = chi1 / chi2;
    if (std::abs(ratio.imag()) > 1e-12 * std::abs(ratio) || ratio.real() <= 0)
      throw DomainError("unramified: non-tempered parameters must be z q^-tau, z q^tau");
  }
  RepDescriptor r;
  r.kind = RepKind::unramified;
  // pi(chi1, chi2) and pi(chi2, chi1) are isomorphic; order lexicographically.
  if (std::pair(chi2.real(), chi2.imag()) < std::pair(chi1.real(), chi1.imag()))
    std::swap(chi1, chi2);
  r.chi1 = chi1;
  r.chi2 = chi2;
  return r;
}

RepDescriptor RepDescriptor::special(cplx chi) {
  if (!near_unit(chi)) throw DomainError("special: chi(pi) must be unitary");
  RepDescriptor r;
  r.kind = RepKind::special;
  r.chi1 = chi;
  r.chi2 = chi;
  return r;
}

RepDescriptor RepDescriptor::principal_series(const MultChar& mu1, const MultChar& mu2) {
  if (!near_unit(mu1.at_uniformizer) || !near_unit(mu2.at_uniformizer))
    throw DomainError("principal series: characters must be unitary");
  if (mu1.level == 0 && mu2.level == 0) return unramified(mu1.at_uniformizer, mu2.at_uniformizer);
  RepDescriptor r;
  r.mu1 = mu1;
  r.mu2 = mu2;
  if (mu1.level > 0 && mu2.level > 0) {
    r.kind = RepKind::ps_ramified;
  } else {
    r.kind = RepKind::one_ramified;
    if (mu1.level > 0) std::swap(r.mu1, r.mu2);
  }
  return r;
}

RepDescriptor RepDescriptor::supercuspidal(int c, const MultChar& central, std::uint64_t seed) {
  if (c < 2) throw DomainError("supercuspidal level must be at least 2");
  if (central.level > 1) throw DomainError("supercuspidal central character must have level <= 1");
  if (!near_unit(central.at_uniformizer))
    throw DomainError("supercuspidal central character must be unitary");
  RepDescriptor r;
  r.kind = RepKind::supercuspidal;
  r.sc_level = c;
  r.sc_central = central;
  r.seed = seed;
  return r;
}

int RepDescriptor::level() const {
  switch (kind) {
    case RepKind::unramified: return 0;
    case RepKind::special: return 1;
    case RepKind::ps_ramified: return mu1.level + mu2.level;
    case RepKind::one_ramified: return mu2.level;
    case RepKind::supercuspidal: return sc_level;
  }
  return 0;
}

MultChar RepDescriptor::central(const Characters& X) const {
  switch (kind) {
    case RepKind::unramified: return MultChar{0, 0, chi1 * chi2};
    case RepKind::special: return MultChar{0, 0, chi1 * chi1};
    case RepKind::ps_ramified:
    case RepKind::one_ramified: return X.multiply(mu1, mu2);
    case RepKind::supercuspidal: return sc_central;
  }
  return MultChar{};
}

bool RepDescriptor::tempered() const {
  return kind != RepKind::unramified || near_unit(chi1);
}

int RepDescriptor::type() const {
  switch (kind) {
    case RepKind::unramified:
    case RepKind::special: return 2;
    case RepKind::one_ramified: return 3;
    default: return 1;
  }
}

std::string RepDescriptor::to_string() const {
  std::ostringstream os;
  os.precision(17);
  auto z = [&](cplx v) {
    if (!near_unit(v)) os << "tau=";
    os << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
  };
  auto ch = [&](const MultChar& m) {
    os << m.level << "," << m.index << ",";
    z(m.at_uniformizer);
  };
  switch (kind) {
    case RepKind::unramified:
      os << "unram(";
      z(chi1);
      os << ",";
      z(chi2);
      os << ")";
      break;
    case RepKind::special:
      os << "special(";
      z(chi1);
      os << ")";
      break;
    case RepKind::ps_ramified:
      os << "ps(";
      ch(mu1);
      os << ";";
      ch(mu2);
      os << ")";
      break;
    case RepKind::one_ramified:
      os << "one(";
      ch(mu2);
      os << ";";
      z(mu1.at_uniformizer);
      os << ")";
      break;
    case RepKind::supercuspidal:
      os << "sc(" << sc_level << ",w(" << sc_central.level << "," << sc_central.index << ",";
      z(sc_central.at_uniformizer);
      os << ")," << seed << ")";
      break;
  }
  return os.str();
}

cplx macdonald_spherical(int q, cplx chi1, cplx chi2, int n) {
  if (n < 0) throw DomainError("spherical function needs n >= 0");
  auto h = [&](int k) -> cplx {
    if (k == -1) return 0.0;
    if (k == -2) return -1.0 / (chi1 * chi2);
    cplx s = 0.0;
    for (int j = 0; j <= k; ++j) s += cpow(chi1, j) * cpow(chi2, k - j);
    return s;
  };
  const double qd = q;
  return std::pow(qd, -0.5 * n) / (1.0 + 1.0 / qd) * (h(n) - chi1 * chi2 / qd * h(n - 2));
}

cplx phi_unramified(const LocalField& F, cplx chi1, cplx chi2, const Mat2& g) {
  const std::int64_t e1 = std::min({v_of(g.x), v_of(g.y), v_of(g.z), v_of(g.w)});
  const std::int64_t n = g.det.valuation() - 2 * e1;
  return cpow(chi1 * chi2, e1) * macdonald_spherical(F.q(), chi1, chi2, static_cast<int>(n));
}

IwahoriCell iwahori_cell(const Mat2& g) {
  const Invariants target = iwahori_invariants(v_of(g.x), v_of(g.y), v_of(g.z), v_of(g.w));
  const std::int64_t D = g.det.valuation();
  const std::int64_t inf = std::numeric_limits<std::int32_t>::max();
  const std::int64_t e0 = target[0];
  IwahoriCell found;
  int matches = 0;
  for (std::int64_t s = e0; s <= D - e0; ++s) {
    const std::int64_t n = D - 2 * s;
    if (iwahori_invariants(s + n, inf, inf, s) == target) {
      found = IwahoriCell{s, n, false};
      ++matches;
    }
    if (iwahori_invariants(inf, s + n, s, inf) == target) {
      found = IwahoriCell{s, n, true};
      ++matches;
    }
  }
  if (matches != 1) throw std::logic_error("Iwahori cell not determined by invariants");
  return found;
}

cplx phi_special(const LocalField& F, cplx chi, const Mat2& g) {
  const IwahoriCell cell = iwahori_cell(g);
  const double q = F.q();
  const std::int64_t n = cell.n;
  cplx t;
  if (!cell.with_omega)
    t = cpow(chi, n) * std::pow(q, -static_cast<double>(std::abs(n)));
  else if (n >= 0)
    t = -cpow(chi, n) * std::pow(q, -1.0 - static_cast<double>(n));
  else
    t = -cpow(chi, n) * std::pow(q, 1.0 + static_cast<double>(n));
  return cpow(chi * chi, cell.s) * t;
}

MatrixCoefficient::MatrixCoefficient(const Characters& X, const RepDescriptor& rep, int twist,
                                     CoefficientOptions opts)
    : X_(&X), rep_(rep), c_(rep.level()), e_(twist) {
  if (twist < 0) throw DomainError("twist must be non-negative");
  const LocalField& F = X.field();
  depth_ = opts.depth > 0 ? opts.depth : 2 * std::max(c_, 1) + e_ + 2;
  switch (rep_.kind) {
    case RepKind::unramified:
    case RepKind::special: break;
    case RepKind::ps_ramified:
    case RepKind::one_ramified: {
      if (rep_.kind == RepKind::one_ramified) {
        const double digits = 15.0 * std::log(10.0) / std::log(static_cast<double>(F.q()));
        alpha_top_ = opts.alpha_shells > 0 ? opts.alpha_shells
                                           : static_cast<int>(std::ceil(digits));
      }
      const int n_hi = alpha_top_ + depth_ + 2 * e_ + c_ + 8;
      table_.emplace(rep_.kind == RepKind::ps_ramified
                         ? WhittakerTable::ps_ramified(X, rep_.mu1, rep_.mu2, n_hi)
                         : WhittakerTable::one_ramified(X, rep_.mu1, rep_.mu2, n_hi));
      double s2 = 0;
      const auto units = F.unit_classes(c_);
      for (int s = 0; s <= alpha_top_; ++s) {
        double acc = 0;
        for (auto u : units) acc += std::norm(newform_w(s, u));
        s2 += acc / static_cast<double>(units.size());
      }
      norm_ = s2;
      break;
    }
    case RepKind::supercuspidal: {
      sc_.emplace(X, c_, rep_.sc_central, rep_.seed);
      sc_res_ = c_ + e_ + 1;
      if (sc_res_ > X.resolution() || sc_res_ > F.precision() - 1)
        throw PrecisionError("character tables too coarse for the Kirillov model");
      const ShellFunction base = ShellFunction::indicator(sc_res_, e_, 0);
      for (int i = 0; i <= c_ + e_; ++i)
        lower_.push_back(act_lower(*sc_, base, F.uniformizer_power(i)).pruned(1e-15));
      break;
    }
  }
}

cplx MatrixCoefficient::newform_w(int s, std::uint64_t u) const {
  return table_->value_at(c_, s, u);
}

const ShellFunction& MatrixCoefficient::lower_translate(int i) const {
  return lower_[static_cast<std::size_t>(std::min(i, c_ + e_))];
}

cplx MatrixCoefficient::value(const FieldElem& a, const FieldElem& m, int i) const {
  require_coset_index(i);
  if (a.is_zero()) throw DomainError("a must be nonzero");
  const LocalField& F = X_->field();
  switch (rep_.kind) {
    case RepKind::unramified:
    case RepKind::special: {
      // (a, pi^e m; 0, 1)(1 0; pi^(i-e) 1).
      FieldElem pe = F.uniformizer_power(e_);
      FieldElem low = F.uniformizer_power(i - e_);
      Mat2 g = Mat2::with_det(a + m * pe * low, m * pe, low, F.one(), a);
      return plain_at(g);
    }
    case RepKind::ps_ramified:
    case RepKind::one_ramified: return value_whittaker(a, m, i);
    case RepKind::supercuspidal: return value_kirillov(a, m, i);
  }
  return 0.0;
}

cplx MatrixCoefficient::value_whittaker(const FieldElem& a, const FieldElem& m, int i) const {
  const LocalField& F = X_->field();
  const FieldElem y = F.uniformizer_power(i - e_);
  const FieldElem mp = shift(m, e_);
  cplx total = 0.0;
  for (int s = 0; s <= alpha_top_; ++s) {
    const int psi_level = mp.is_zero() ? 0 : static_cast<int>(std::max<std::int64_t>(0, -mp.val - s));
    const int r = std::max({c_, psi_level, 1});
    const auto units = F.unit_classes(r);
    cplx acc = 0.0;
    for (auto u : units) {
      const cplx w = newform_w(s, u);
      if (w == 0.0) continue;
      const FieldElem alpha = F.make(s, static_cast<std::int64_t>(u));
      const cplx t = table_->translate(a * alpha, y);
      if (t == 0.0) continue;
      acc += X_->psi(mp * alpha) * t * std::conj(w);
    }
    total += acc / static_cast<double>(units.size());
  }
  return total / norm_;
}

cplx MatrixCoefficient::value_kirillov(const FieldElem& a, const FieldElem& m, int i) const {
  return pair_upper_translate(*sc_, lower_translate(i), a, m, e_);
}

cplx MatrixCoefficient::plain_at(const Mat2& g) const {
  const LocalField& F = X_->field();
  switch (rep_.kind) {
    case RepKind::unramified: return phi_unramified(F, rep_.chi1, rep_.chi2, g);
    case RepKind::special: return phi_special(F, rep_.chi1, g);
    case RepKind::ps_ramified:
    case RepKind::one_ramified: {
      const int r = std::min(X_->resolution(), c_ + depth_);
      const auto units = F.unit_classes(r);
      cplx total = 0.0;
      for (int s = 0; s <= alpha_top_; ++s) {
        cplx acc = 0.0;
        for (auto u : units) {
          const cplx w = newform_w(s, u);
          if (w == 0.0) continue;
          const FieldElem alpha = F.make(s, static_cast<std::int64_t>(u));
          Mat2 d = Mat2::with_det(alpha, F.zero(kExact), F.zero(kExact), F.one(), alpha);
          acc += table_->at(d * g) * std::conj(w);
        }
        total += acc / static_cast<double>(units.size());
      }
      return total / norm_;
    }
    case RepKind::supercuspidal: {
      // The synthetic constants C_nu are not tied to the group law, so only one factorization
      // is used: g = (det/w, y; 0, w)(1 0; z/w 1), or g = (-det/z, -x; 0, -z) omega if w = 0.
      const SupercuspidalData& D = *sc_;
      // Sparse actions cost nothing extra at the finest table resolution.
      ShellFunction f = ShellFunction::indicator(std::min(X_->resolution(), F.precision() - 1), 0, 0);
      if (!g.w.is_zero()) {
        if (!g.z.is_zero()) f = act_lower(D, f, g.z / g.w);
        f = act_borel(D, f, g.det / g.w, g.y, g.w);
      } else {
        f = act_omega(D, f);
        f = act_borel(D, f, -(g.det / g.z), -g.x, -g.z);
      }
      return f.coefficient(0, 0);
    }
  }
  return 0.0;
}

std::vector<cplx> MatrixCoefficient::m_profile(int n, int i) const {
  require_coset_index(i);
  switch (rep_.kind) {
    case RepKind::ps_ramified:
    case RepKind::one_ramified: return profile_whittaker(n, i);
    case RepKind::supercuspidal: return profile_kirillov(n, i);
    default: return profile_pointwise(n, i);
  }
}

std::vector<cplx> MatrixCoefficient::profile_pointwise(int n, int i) const {
  const LocalField& F = X_->field();
  const std::uint64_t M = F.pow(depth_);
  std::vector<cplx> out(M);
  const FieldElem a = F.uniformizer_power(n);
  for (std::uint64_t t = 0; t < M; ++t) {
    FieldElem m = t == 0 ? F.zero(kExact) : F.make(-depth_, static_cast<std::int64_t>(t));
    out[t] = value(a, m, i);
  }
  return out;
}

// Phi(pi^n, t/p^R) = sum_x H(x) exp(2 pi i t x / p^R), where H(x) integrates the alpha
// integrand over the classes pi^e alpha = x mod p^R.
std::vector<cplx> MatrixCoefficient::profile_whittaker(int n, int i) const {
  const LocalField& F = X_->field();
  const int R = depth_;
  const std::uint64_t M = F.pow(R);
  std::vector<cplx> H(M, 0.0);
  const FieldElem a = F.uniformizer_power(n);
  const FieldElem y = F.uniformizer_power(i - e_);
  for (int s = 0; s <= alpha_top_; ++s) {
    const int off = e_ + s;
    const int r = std::max({c_, R - off, 1});
    const auto units = F.unit_classes(r);
    const double wgt = 1.0 / static_cast<double>(units.size());
    const std::uint64_t scale = off < R ? F.pow(off) : 0;
    for (auto u : units) {
      const cplx w = newform_w(s, u);
      if (w == 0.0) continue;
      const FieldElem alpha = F.make(s, static_cast<std::int64_t>(u));
      const cplx t = table_->translate(a * alpha, y);
      if (t == 0.0) continue;
      const std::uint64_t bin = off < R ? mulmod(scale, u % M, M) : 0;
      H[bin] += t * std::conj(w) * wgt;
    }
  }
  dft(H, +1);
  for (auto& v : H) v /= norm_;
  return H;
}

std::vector<cplx> MatrixCoefficient::profile_kirillov(int n, int i) const {
  const LocalField& F = X_->field();
  const int R = depth_;
  const std::uint64_t M = F.pow(R);
  std::vector<cplx> H(M, 0.0);
  const ShellFunction& G = lower_translate(i);
  const auto vals = G.values_on_shell(*X_, n + e_);
  const std::uint64_t Ng = X_->group_order(sc_res_);
  const int r = std::max(sc_res_, R - e_);
  const std::uint64_t Nr = X_->group_order(r);
  const std::uint64_t scale = e_ < R ? F.pow(e_) : 0;
  const double wgt = 1.0 / static_cast<double>(Nr);
  for (std::uint64_t E = 0; E < Nr; ++E) {
    const cplx v = vals[E % Ng];
    if (v == 0.0) continue;
    const std::uint64_t u = X_->unit_from_exponent(E, r);
    const std::uint64_t bin = e_ < R ? mulmod(scale, u % M, M) : 0;
    H[bin] += v * wgt;
  }
  dft(H, +1);
  return H;
}

cplx extract_A(const MatrixCoefficient& phi1, int c3) {
  if (phi1.twist() != 0) throw DomainError("A is read from the untwisted coefficient");
  if (c3 < 2 * std::max(phi1.level(), 1)) throw DomainError("level hypothesis c3 >= 2 max(c1, 1) violated");
  const LocalField& F = phi1.characters().field();
  return phi1.value(F.one(), F.uniformizer_power(-1), c3);
}

cplx extract_B(const MatrixCoefficient& phi2, int c3) {
  if (c3 < 2 * std::max(phi2.level(), 1)) throw DomainError("level hypothesis c3 >= 2 max(c2, 1) violated");
  if (phi2.twist() != c3 - phi2.level()) throw DomainError("B is read from the coefficient twisted by c3 - c2");
  const LocalField& F = phi2.characters().field();
  return phi2.value(F.one(), F.zero(kExact), c3 - 1);
}

cplx table_A(int q, const RepDescriptor& rep) {
  const double qd = q;
  switch (rep.kind) {
    case RepKind::unramified:
      return (rep.chi1 / rep.chi2 + rep.chi2 / rep.chi1 + 1.0 - 1.0 / qd) / (qd + 1.0);
    case RepKind::special: return -1.0 / qd;
    case RepKind::one_ramified: return 0.0;
    default: return -1.0 / (qd - 1.0);
  }
}

std::map<int, double> level_profile(const MatrixCoefficient& phi, int n, const FieldElem& m,
                                    int i, int r) {
  const Characters& X = phi.characters();
  const LocalField& F = X.field();
  const std::uint64_t N = X.group_order(r);
  std::vector<cplx> vals(N);
  for (std::uint64_t E = 0; E < N; ++E)
    vals[E] = phi.value(F.make(n, static_cast<std::int64_t>(X.unit_from_exponent(E, r))), m, i);
  const auto coef = X.fourier_on_shell(vals, r);
  std::map<int, double> mass;
  for (std::uint64_t j = 0; j < N; ++j) {
    const double w = std::norm(coef[j]);
    if (w == 0.0) continue;
    mass[X.make_char(r, j).level] += w;
  }
  return mass;
}

}  // namespace lt
