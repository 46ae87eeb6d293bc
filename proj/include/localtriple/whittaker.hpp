#pragma once

#include <string>
#include <vector>

#include "localtriple/characters.hpp"
#include "localtriple/local_field.hpp"

namespace lt {

enum class CosetCase { k0_i0, k0_ipos, kc_iltc, kc_ic, mid_iltk, mid_igtk, mid_ieqk };

std::string to_string(CosetCase c);

// omega (1 m;0 1) diag(alpha,1) (1 0;pi^i 1) = borel * (1 0;pi^k 1) * right, right in K1(pi^c).
struct IwasawaCoset {
  CosetCase tag;
  int k;
  Mat2 borel;
  Mat2 right;
};

Mat2 coset_matrix(const LocalField& F, const FieldElem& alpha, const FieldElem& m, int i);
IwasawaCoset iwasawa_classify(const LocalField& F, const FieldElem& alpha, const FieldElem& m,
                              int i, int c);
Mat2 reconstruct(const LocalField& F, const IwasawaCoset& coset);

// h = (b11 b12;0 b22) (1 0;pi^j 1) k with k in K1(pi^c) and 0 <= j <= c.
struct BruhatParts {
  int j;
  FieldElem b11, b12, b22;
};
BruhatParts decompose(const LocalField& F, const Mat2& h, int c);

// pi(mu1, mu2) with levels k1, k2; the newform lives on B (1 0;pi^k2 1) K1(pi^(k1+k2)).
struct InducedData {
  MultChar mu1, mu2;
  int k1() const { return mu1.level; }
  int k2() const { return mu2.level; }
  int level() const { return mu1.level + mu2.level; }
};

// Value of the induced-model newform at h.
cplx newform_value(const Characters& X, const InducedData& rep, const Mat2& h);

// W(g) = integral of phi(omega (1 m;0 1) g) psi(-m) dm, evaluated shell by shell.
cplx whittaker_raw_oracle(const Characters& X, const InducedData& rep, const Mat2& g);

class WhittakerTable {
 public:
  // Both characters ramified; normalized so that W^(c) is the indicator of the unit shell.
  static WhittakerTable ps_ramified(const Characters& X, const MultChar& mu1, const MultChar& mu2,
                                    int n_hi);
  // mu1 unramified, mu2 of level k >= 1; left unnormalized.
  static WhittakerTable one_ramified(const Characters& X, const MultChar& mu1, const MultChar& mu2,
                                     int n_hi);

  const InducedData& data() const { return rep_; }
  int level() const { return c_; }
  int n_lo() const { return n_lo_; }
  int n_hi() const { return n_hi_; }
  int resolution() const { return res_; }
  bool normalized() const { return normalized_; }
  const Characters& characters() const { return *X_; }

  // W^(i)(y) = W(diag(y,1)(1 0;pi^i 1)); i >= c is the same as i = c.
  cplx value(int i, const FieldElem& y) const;
  cplx value_at(int i, int n, std::uint64_t unit) const;
  // W(diag(x,1)(1 0;y 1)).
  cplx translate(const FieldElem& x, const FieldElem& y) const;
  // W(g) for any g, through the Bruhat decomposition.
  cplx at(const Mat2& g) const;

  // Direct evaluation of the formulas, bypassing the table (unnormalized for ps_ramified).
  cplx formula(int i, const FieldElem& alpha) const;
  cplx normalizer() const { return norm_; }

 private:
  WhittakerTable() = default;
  void build();
  cplx formula_ps(int i, const FieldElem& alpha) const;
  cplx formula_one(int i, const FieldElem& alpha) const;

  const Characters* X_ = nullptr;
  InducedData rep_;
  int c_ = 0;
  int n_lo_ = 0;
  int n_hi_ = 0;
  int res_ = 0;
  bool normalized_ = false;
  cplx norm_ = 1.0;
  std::uint64_t stride_ = 0;
  std::vector<cplx> data_;
};

}  // namespace lt
