#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "localtriple/local_field.hpp"

namespace lt {

// Character of Q_p^*: the unit part is nu_{level,index}(g^e) = exp(2 pi i index e / phi(p^level))
// for the fixed generator g, and pi maps to at_uniformizer.
struct MultChar {
  int level = 0;
  std::uint64_t index = 0;
  cplx at_uniformizer{1.0, 0.0};

  bool unramified() const { return level == 0; }
};

// In-place DFT, out[k] = sum_j in[j] exp(sign * 2 pi i j k / n).
void dft(std::vector<cplx>& data, int sign);

class Characters {
 public:
  // table_resolution 0 picks the largest R with p^R <= 2^20.
  explicit Characters(const LocalField& field, int table_resolution = 0);

  const LocalField& field() const { return field_; }
  int p() const { return field_.p(); }
  int resolution() const { return res_; }
  std::uint64_t generator() const { return gen_; }
  // phi(p^k), with phi(1) = 1.
  std::uint64_t group_order(int k) const;

  // Discrete log of a unit u modulo p^resolution(); the result is mod phi(p^resolution()).
  std::uint64_t dlog(std::uint64_t u) const;
  // g^e mod p^r.
  std::uint64_t unit_from_exponent(std::uint64_t e, int r) const;

  // Character of (Z/p^k)^* with index j, normalized to its exact level.
  MultChar make_char(int k, std::uint64_t j, cplx at_uniformizer = 1.0) const;
  MultChar trivial() const { return MultChar{}; }
  // Index of chi viewed as a character of (Z/p^r)^*, r >= chi.level.
  std::uint64_t index_at(const MultChar& chi, int r) const;
  MultChar from_index_at(std::uint64_t j, int r, cplx at_uniformizer = 1.0) const {
    return make_char(r, j, at_uniformizer);
  }
  MultChar multiply(const MultChar& a, const MultChar& b) const;
  MultChar inverse(const MultChar& a) const;
  bool same_unit_part(const MultChar& a, const MultChar& b) const;

  // chi(u) for an integer unit representative u (reduced mod p^level internally).
  cplx unit_value(const MultChar& chi, std::uint64_t u) const;
  // chi(x); needs the unit of x to precision >= chi.level.
  cplx eval(const MultChar& chi, const FieldElem& x) const;
  // nu_{r,j}(u) for a unit residue.
  cplx unit_value_at(std::uint64_t j, int r, std::uint64_t u) const;

  // psi(x) = exp(2 pi i {x}_p); needs absolute precision >= 0.
  cplx psi(const FieldElem& x) const;
  // exp(2 pi i t / p^s) for an integer t.
  cplx additive_root(std::uint64_t t, int s) const;

  // Coefficients c_j = avg_u f(u) conj(nu_{r,j}(u)); values are indexed by exponent,
  // values[e] = f(g^e mod p^r), size phi(p^r).
  std::vector<cplx> fourier_on_shell(std::span<const cplx> values, int r) const;
  // Inverse transform: f(g^e) = sum_j c_j nu_{r,j}(g^e).
  std::vector<cplx> synthesize_on_shell(std::span<const cplx> coeffs, int r) const;

  // Integral over O^* (additive measure) of chi(u) psi(pi^n u).
  cplx gauss_sum(const MultChar& chi, std::int64_t n) const;

 private:
  LocalField field_;
  int res_;
  std::uint64_t gen_;
  std::uint64_t modulus_;
  std::uint64_t order_;
  std::vector<std::uint32_t> dlog_;
  std::vector<cplx> mroot_;
  std::vector<cplx> aroot_;
};

}  // namespace lt
