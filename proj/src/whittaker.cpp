#include "localtriple/whittaker.hpp"

#include <algorithm>
#include <cmath>

namespace lt {

namespace {

constexpr double kVanish = 1e-11;

double qpow(int q, double e) { return std::pow(static_cast<double>(q), e); }

}  // namespace

std::string to_string(CosetCase c) {
  switch (c) {
    case CosetCase::k0_i0: return "1i";
    case CosetCase::k0_ipos: return "1ii";
    case CosetCase::kc_iltc: return "2i";
    case CosetCase::kc_ic: return "2ii";
    case CosetCase::mid_iltk: return "3i";
    case CosetCase::mid_igtk: return "3ii";
    case CosetCase::mid_ieqk: return "3iii";
  }
  return "?";
}

Mat2 coset_matrix(const LocalField& F, const FieldElem& alpha, const FieldElem& m, int i) {
  FieldElem pi_i = F.uniformizer_power(i);
  return Mat2::with_det(pi_i, F.one(), -(alpha + m * pi_i), -m, alpha);
}

BruhatParts decompose(const LocalField& F, const Mat2& h, int c) {
  const FieldElem& z = h.z;
  const FieldElem& w = h.w;
  if (!w.is_zero()) {
    bool case_a;
    if (z.is_zero()) {
      if (z.val < w.val + c) throw PrecisionError("lower-left entry too imprecise to classify");
      case_a = true;
    } else {
      case_a = z.val >= w.val + c;
    }
    if (case_a) return BruhatParts{c, h.det / w, h.y, w};
    if (z.val >= w.val) {
      int j = static_cast<int>(z.val - w.val);
      FieldElem u = z / shift(w, j);
      return BruhatParts{j, h.det / (u * w), h.y, w};
    }
  } else {
    if (z.is_zero()) throw DomainError("matrix with vanishing bottom row");
    if (w.val <= z.val) throw PrecisionError("lower-right entry too imprecise to classify");
  }
  FieldElem r = w / z;
  return BruhatParts{0, h.det / z, h.x * (F.one() - r) + h.y, z};
}

IwasawaCoset iwasawa_classify(const LocalField& F, const FieldElem& alpha, const FieldElem& m,
                              int i, int c) {
  if (alpha.is_zero()) throw DomainError("alpha must be nonzero");
  if (c < 1) throw DomainError("level must be positive");
  i = std::min(i, c);
  Mat2 M = coset_matrix(F, alpha, m, i);
  int k = decompose(F, M, c).j;
  FieldElem S = alpha + m * F.uniformizer_power(i);
  FieldElem one = F.one(), zero = F.zero(1 << 30);
  IwasawaCoset out;
  out.k = k;
  if (k == 0) {
    out.tag = i == 0 ? CosetCase::k0_i0 : CosetCase::k0_ipos;
    FieldElem t = alpha / S;
    out.borel = Mat2::with_det(-t, F.uniformizer_power(i) + t, zero, -S, alpha);
    // Together with (1 0;1 1) this gives the middle factor; right is unipotent.
    out.right = Mat2::with_det(one, -one + m / S, zero, one, one);
  } else if (k == c) {
    out.tag = i < c ? CosetCase::kc_iltc : CosetCase::kc_ic;
    out.borel = Mat2::with_det(-(alpha / m), one, zero, -m, alpha);
    out.right = Mat2::with_det(one, zero, alpha / m + F.uniformizer_power(i) -
                                              F.uniformizer_power(c), one, one);
  } else {
    out.tag = i < k ? CosetCase::mid_iltk : (i > k ? CosetCase::mid_igtk : CosetCase::mid_ieqk);
    FieldElem pk = F.uniformizer_power(k);
    FieldElem d = S / (m * pk);
    out.borel = Mat2::with_det(-(alpha * pk / S), one, zero, -m, alpha / d);
    out.right = Mat2::with_det(d, zero, zero, one, d);
  }
  Mat2 back = reconstruct(F, out);
  if (!approx_equal(back, M)) throw std::logic_error("coset decomposition does not reproduce input");
  return out;
}

Mat2 reconstruct(const LocalField& F, const IwasawaCoset& coset) {
  FieldElem one = F.one(), zero = F.zero(1 << 30);
  Mat2 lower = Mat2::with_det(one, zero, F.uniformizer_power(coset.k), one, one);
  return coset.borel * lower * coset.right;
}

cplx newform_value(const Characters& X, const InducedData& rep, const Mat2& h) {
  BruhatParts P = decompose(X.field(), h, rep.level());
  if (P.j != rep.k2()) return 0.0;
  double mod = qpow(X.p(), -0.5 * static_cast<double>(P.b11.valuation() - P.b22.valuation()));
  return X.eval(rep.mu1, P.b11) * X.eval(rep.mu2, P.b22) * mod;
}

cplx whittaker_raw_oracle(const Characters& X, const InducedData& rep, const Mat2& g) {
  const LocalField& F = X.field();
  const int c = rep.level();
  const int p = X.p();
  // phi(omega (1 m;0 1) g) is constant on m + pi^hi O.
  std::int64_t vd = g.det.valuation();
  std::int64_t hi = 0;
  bool has_z = !g.z.is_zero(), has_w = !g.w.is_zero();
  if (has_z && has_w) {
    hi = std::max(hi, vd - g.z.val - g.w.val);
    hi = std::max(hi, c + vd - g.z.val - g.w.val);
  }
  if (has_w) hi = std::max(hi, vd - 2 * g.w.val);
  if (has_z) hi = std::max(hi, c + vd - 2 * g.z.val);
  if (hi > F.precision() - 2) throw PrecisionError("oracle support exceeds working precision");

  auto integrand = [&](const FieldElem& m) {
    Mat2 h = Mat2::with_det(g.z, g.w, -g.x - m * g.z, -g.y - m * g.w, g.det);
    return newform_value(X, rep, h) * X.psi(-m);
  };
  const double cell = qpow(p, -static_cast<double>(hi));
  auto shell = [&](std::int64_t n) {
    int r = static_cast<int>(hi - n);
    cplx acc = 0;
    std::uint64_t mod = ipow(p, r);
    for (std::uint64_t u = 1; u < mod; ++u) {
      if (u % p == 0) continue;
      acc += integrand(F.make(n, static_cast<std::int64_t>(u)));
    }
    return acc * cell;
  };

  cplx total = integrand(F.zero(1 << 30)) * cell;
  std::int64_t lo = std::min<std::int64_t>(-c - 2, vd - c - 2);
  const std::int64_t floor = lo - c - 2;
  for (std::int64_t n = hi - 1; n >= lo; --n) total += shell(n);
  cplx last = shell(lo), prev = shell(lo + 1);
  // Widen while the boundary shells still carry mass.
  while (std::abs(last) + std::abs(prev) > kVanish * (1.0 + std::abs(total))) {
    if (lo <= floor) throw TruncationError("whittaker oracle: m-integral did not truncate");
    --lo;
    prev = last;
    last = shell(lo);
    total += last;
  }
  return total;
}

WhittakerTable WhittakerTable::ps_ramified(const Characters& X, const MultChar& mu1,
                                           const MultChar& mu2, int n_hi) {
  if (mu1.level < 1 || mu2.level < 1)
    throw DomainError("ps_ramified needs both characters ramified");
  WhittakerTable t;
  t.X_ = &X;
  t.rep_ = InducedData{mu1, mu2};
  t.c_ = t.rep_.level();
  t.n_lo_ = -t.c_;
  t.n_hi_ = n_hi;
  t.normalized_ = true;
  t.norm_ = t.formula_ps(t.c_, X.field().one());
  if (std::abs(t.norm_) < 1e-14) throw DomainError("degenerate unit pairing: invalid character data");
  t.build();
  return t;
}

WhittakerTable WhittakerTable::one_ramified(const Characters& X, const MultChar& mu1,
                                            const MultChar& mu2, int n_hi) {
  if (mu1.level != 0 || mu2.level < 1)
    throw DomainError("one_ramified needs mu1 unramified and mu2 ramified");
  WhittakerTable t;
  t.X_ = &X;
  t.rep_ = InducedData{mu1, mu2};
  t.c_ = t.rep_.level();
  t.n_lo_ = -t.c_;
  t.n_hi_ = n_hi;
  t.normalized_ = false;
  t.norm_ = 1.0;
  t.build();
  return t;
}

cplx WhittakerTable::formula(int i, const FieldElem& alpha) const {
  return rep_.k1() == 0 ? formula_one(i, alpha) : formula_ps(i, alpha);
}

cplx WhittakerTable::formula_ps(int i, const FieldElem& alpha) const {
  const Characters& X = *X_;
  const LocalField& F = X.field();
  const int q = X.p();
  const int k1 = rep_.k1(), k2 = rep_.k2(), s = k2, c = c_;
  const MultChar &mu1 = rep_.mu1, &mu2 = rep_.mu2;
  i = std::min(i, c);
  const std::int64_t a = alpha.valuation();
  const FieldElem one = F.one();

  if (i < s) {
    int r = std::max<int>({k1, i, static_cast<int>(2 * i - s - a), 1});
    const double scale = qpow(q, 0.5 * a - i) * qpow(q, static_cast<double>(2 * i - s - a));
    FieldElem base = shift(alpha, -i);
    FieldElem pi_i = F.uniformizer_power(i);
    return scale * F.shell_integral_additive(
                       [&](const FieldElem& u) {
                         FieldElem t = base * (one - shift(u, s - i));
                         return X.eval(mu1, -(pi_i / u)) * X.eval(mu2, t) * X.psi(t);
                       },
                       0, r);
  }
  if (i > s) {
    int r = std::max<int>({k1 - (i - s), k2, static_cast<int>(s - a), 1});
    FieldElem pi_s = F.uniformizer_power(s);
    return qpow(q, -0.5 * a) *
           F.shell_integral_additive(
               [&](const FieldElem& u) {
                 FieldElem t = shift(alpha * u, -s);
                 return X.eval(mu1, -(pi_s / (one - shift(u, i - s)))) * X.eval(mu2, t) * X.psi(t);
               },
               0, r);
  }
  // i = s: shells v(m) <= v(alpha) - s with v(alpha + m pi^s) = v(m) + s.
  const FieldElem pi_s = F.uniformizer_power(s);
  auto shell = [&](std::int64_t n) {
    int r = std::max<int>({k1, k2, static_cast<int>(-n), 1});
    return qpow(q, -0.5 * a + n) *
           F.shell_integral_additive(
               [&](const FieldElem& m) -> cplx {
                 FieldElem S = alpha + m * pi_s;
                 if (S.is_zero() || S.val != m.val + s) return 0.0;
                 return X.eval(mu1, -(alpha * pi_s / S)) * X.eval(mu2, -m) * X.psi(-m);
               },
               n, r);
  };
  const std::int64_t top = a - s;
  const std::int64_t bottom = std::min<std::int64_t>(-std::max(k1, k2), -1);
  cplx total = 0;
  for (std::int64_t n = std::min(top, bottom - 1); n <= top; ++n) {
    cplx v = shell(n);
    if (n < bottom && std::abs(v) > kVanish) throw TruncationError("case i = k2 shell sum did not truncate");
    total += v;
  }
  return total;
}

cplx WhittakerTable::formula_one(int i, const FieldElem& alpha) const {
  const Characters& X = *X_;
  const LocalField& F = X.field();
  const int q = X.p();
  const int c = c_;
  const MultChar &mu1 = rep_.mu1, &mu2 = rep_.mu2;
  i = std::min(i, c);
  const std::int64_t a = alpha.valuation();
  if (i == c) {
    if (a < 0) return 0.0;
    cplx g = F.shell_integral_additive(
        [&](const FieldElem& m) { return X.eval(mu2, -m) * X.psi(-m); }, -c, c);
    return std::pow(mu1.at_uniformizer, static_cast<double>(a + c)) * qpow(q, -0.5 * a - c) * g;
  }
  const int r = std::max<int>({i, static_cast<int>(2 * i - c - a), 1});
  FieldElem base = shift(alpha, -i);
  const FieldElem one = F.one();
  const std::uint64_t mod = ipow(q, r);
  cplx acc = 0;
  for (std::uint64_t u = 0; u < mod; ++u) {
    FieldElem t = base * (one - F.make(c - i, static_cast<std::int64_t>(u)));
    acc += X.eval(mu2, t) * X.psi(t);
  }
  acc /= static_cast<double>(mod);
  return std::pow(mu1.at_uniformizer, static_cast<double>(i)) * qpow(q, -0.5 * a + i - c) * acc;
}

void WhittakerTable::build() {
  const LocalField& F = X_->field();
  const int p = X_->p();
  res_ = c_;
  stride_ = ipow(p, res_);
  const int shells = n_hi_ - n_lo_ + 1;
  data_.assign(static_cast<std::size_t>(c_ + 1) * shells * stride_, 0.0);
  const auto units = F.unit_classes(res_);

  // Below the bottom shell the function vanishes; confirm on two extra shells.
  for (int i = 0; i <= c_; ++i)
    for (int n = n_lo_ - 2; n < n_lo_; ++n)
      for (auto u : units)
        if (std::abs(formula(i, F.make(n, static_cast<std::int64_t>(u)))) > kVanish)
          throw std::logic_error("whittaker table: nonzero value below shell -c");

  const int check_top = std::min(n_hi_, n_lo_ + 2 * c_ + 2);
  for (int i = 0; i <= c_; ++i) {
    for (int n = n_lo_; n <= n_hi_; ++n) {
      for (auto u : units) {
        cplx v = formula(i, F.make(n, static_cast<std::int64_t>(u))) / norm_;
        if (n <= check_top) {
          for (int t = 1; t < p; t += p - 2) {
            cplx lift = formula(i, F.make(n, static_cast<std::int64_t>(u + t * stride_))) / norm_;
            if (std::abs(lift - v) > 1e-9)
              throw std::logic_error("whittaker table: level in alpha exceeds c");
          }
        }
        data_[(static_cast<std::size_t>(i) * shells + (n - n_lo_)) * stride_ + u] = v;
      }
    }
  }
}

cplx WhittakerTable::value_at(int i, int n, std::uint64_t unit) const {
  i = std::clamp(i, 0, c_);
  if (n < n_lo_) return 0.0;
  if (n > n_hi_)
    throw TruncationError("whittaker table lookup at shell " + std::to_string(n) +
                          " beyond tabulated range " + std::to_string(n_hi_));
  return data_[(static_cast<std::size_t>(i) * (n_hi_ - n_lo_ + 1) + (n - n_lo_)) * stride_ +
               unit % stride_];
}

cplx WhittakerTable::value(int i, const FieldElem& y) const {
  if (y.is_zero()) throw DomainError("whittaker value at zero");
  return value_at(i, static_cast<int>(y.val), y.unit_mod(res_));
}

cplx WhittakerTable::translate(const FieldElem& x, const FieldElem& y) const {
  if (y.is_zero() || y.val >= c_) return value(c_, x);
  if (y.val >= 0) {
    int j = static_cast<int>(y.val);
    return value(j, x / shift(y, -j));
  }
  FieldElem yi = inverse(y);
  const cplx w = value(0, x * yi * yi);
  if (w == 0.0) return 0.0;
  cplx central = X_->eval(rep_.mu1, y) * X_->eval(rep_.mu2, y);
  return central * X_->psi(x * (yi - yi * yi)) * w;
}

cplx WhittakerTable::at(const Mat2& g) const {
  BruhatParts P = decompose(X_->field(), g, c_);
  FieldElem b22i = inverse(P.b22);
  cplx central = X_->eval(rep_.mu1, P.b22) * X_->eval(rep_.mu2, P.b22);
  return central * X_->psi(P.b12 * b22i) * value(P.j, P.b11 * b22i);
}

}  // namespace lt
