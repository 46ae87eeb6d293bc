#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "localtriple/characters.hpp"

namespace lt {

// Finite sum of coeff * 1_{nu,n}, where 1_{nu,n}(u pi^n) = nu(u). Characters are stored by
// their index in the dual of (Z/p^R)^*, R = resolution().
class ShellFunction {
 public:
  using Key = std::pair<std::int64_t, std::uint64_t>;

  explicit ShellFunction(int resolution = 0) : res_(resolution) {}
  static ShellFunction indicator(int resolution, std::int64_t n, std::uint64_t j = 0);

  int resolution() const { return res_; }
  void add(std::int64_t n, std::uint64_t j, cplx c);
  cplx coefficient(std::int64_t n, std::uint64_t j) const;
  const std::map<Key, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  double norm_squared() const;
  // Drops coefficients with modulus below eps.
  ShellFunction pruned(double eps) const;
  std::vector<std::int64_t> shells() const;

  cplx operator()(const Characters& X, const FieldElem& x) const;
  // Values at u = g^e mod p^R on shell n, indexed by e.
  std::vector<cplx> values_on_shell(const Characters& X, std::int64_t n) const;

  ShellFunction& operator*=(cplx s);
  ShellFunction& operator+=(const ShellFunction& o);

 private:
  int res_;
  std::map<Key, cplx> terms_;
};

double distance(const ShellFunction& a, const ShellFunction& b);

// Synthetic supercuspidal datum: level c, central character w of level <= 1, and the unit
// constants C_nu, drawn per orbit {nu, nu^-1 w0^-1} from the seed.
class SupercuspidalData {
 public:
  SupercuspidalData(const Characters& X, int c, const MultChar& central, std::uint64_t seed);

  const Characters& characters() const { return *X_; }
  int level() const { return c_; }
  const MultChar& central() const { return w_; }
  cplx z0() const { return w_.at_uniformizer; }
  double w0_minus_one() const { return w0m1_; }
  std::uint64_t seed() const { return seed_; }

  // min(-c, -2 level(nu)).
  std::int64_t n_of(const MultChar& nu) const;
  cplx C(const MultChar& nu) const;

 private:
  const Characters* X_;
  int c_;
  MultChar w_;
  std::uint64_t seed_;
  double w0m1_;
};

// pi((a1 m;0 a2)) f (x) = w(a2) psi(m x / a2) f(a1 x / a2).
ShellFunction act_borel(const SupercuspidalData& D, const ShellFunction& f, const FieldElem& a1,
                        const FieldElem& m, const FieldElem& a2);
ShellFunction act_omega(const SupercuspidalData& D, const ShellFunction& f);
// pi((1 0;x 1)) = w0(-1) pi(omega) pi((1 -x;0 1)) pi(omega).
ShellFunction act_lower(const SupercuspidalData& D, const ShellFunction& f, const FieldElem& x);

// <pi((a m;0 1)) G, 1_{1,k}>.
cplx pair_upper_translate(const SupercuspidalData& D, const ShellFunction& G, const FieldElem& a,
                          const FieldElem& m, int k);

}  // namespace lt
