#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "localtriple/characters.hpp"
#include "localtriple/kirillov.hpp"
#include "localtriple/whittaker.hpp"

namespace lt {

enum class RepKind { unramified, special, ps_ramified, one_ramified, supercuspidal };

std::string to_string(RepKind k);

// Irreducible unitary representation of GL2(Q_p) in one of the supported families.
// unramified: pi(chi1, chi2) with Satake values chi1(pi), chi2(pi).
// special: sigma(chi|.|^1/2, chi|.|^-1/2), chi unramified with chi(pi) = chi1.
// ps_ramified / one_ramified: pi(mu1, mu2); one_ramified keeps the unramified character in mu1.
// supercuspidal: synthetic Kirillov datum of level sc_level.
struct RepDescriptor {
  RepKind kind = RepKind::unramified;
  cplx chi1{1.0, 0.0}, chi2{1.0, 0.0};
  MultChar mu1, mu2;
  int sc_level = 0;
  MultChar sc_central;
  std::uint64_t seed = 0;

  static RepDescriptor unramified(cplx chi1, cplx chi2);
  static RepDescriptor special(cplx chi);
  // Puts an unramified character into the first slot; two unramified characters give the
  // unramified kind.
  static RepDescriptor principal_series(const MultChar& mu1, const MultChar& mu2);
  static RepDescriptor supercuspidal(int c, const MultChar& central, std::uint64_t seed);

  int level() const;
  MultChar central(const Characters& X) const;
  bool tempered() const;
  // 1, 2 or 3 in the classification used for the local integral.
  int type() const;
  std::string to_string() const;
};

// Spherical function of pi(chi1, chi2) at diag(pi^n, 1), n >= 0, in polynomial form
// q^{-n/2}/(1+q^{-1}) (h_n - q^{-1} chi1 chi2 h_{n-2}) with h the complete symmetric
// polynomials and h_{-2} = -1/(chi1 chi2). Valid for chi1 = chi2.
cplx macdonald_spherical(int q, cplx chi1, cplx chi2, int n);

// Bi-K-invariant coefficient of pi(chi1, chi2) at any g, through the Cartan invariants.
cplx phi_unramified(const LocalField& F, cplx chi1, cplx chi2, const Mat2& g);

// Bi-Iwahori-invariant coefficient of the special representation with chi(pi) = chi, at any g.
cplx phi_special(const LocalField& F, cplx chi, const Mat2& g);

// Iwahori double coset of g modulo the center: g in pi^s t I with t = diag(pi^n,1) or
// diag(pi^n,1) omega.
struct IwahoriCell {
  std::int64_t s = 0;
  std::int64_t n = 0;
  bool with_omega = false;
};
IwahoriCell iwahori_cell(const Mat2& g);

struct CoefficientOptions {
  // Grid depth R: m runs over pi^-R O / O and v(a) over [-R, R].
  int depth = 0;
  // alpha shells kept for coefficients whose newform Whittaker function has infinite support.
  int alpha_shells = 0;
};

struct CosetPoint {
  FieldElem a, m;
  int i = 0;
};

// Normalized Phi(g) = <pi(g) f, f> / <f, f> for the newform f, or with twist e > 0 the
// coefficient <pi(g) f', f'> of f' = pi(diag(pi^-e, 1)) f. Points are (a m;0 1)(1 0;pi^i 1).
class MatrixCoefficient {
 public:
  MatrixCoefficient(const Characters& X, const RepDescriptor& rep, int twist = 0,
                    CoefficientOptions opts = {});

  const RepDescriptor& rep() const { return rep_; }
  int level() const { return c_; }
  int twist() const { return e_; }
  int depth() const { return depth_; }
  const Characters& characters() const { return *X_; }
  const WhittakerTable* whittaker() const { return table_ ? &*table_ : nullptr; }
  const SupercuspidalData* kirillov() const { return sc_ ? &*sc_ : nullptr; }

  cplx value(const FieldElem& a, const FieldElem& m, int i) const;
  cplx value(const CosetPoint& x) const { return value(x.a, x.m, x.i); }
  // Untwisted coefficient at an arbitrary g.
  cplx plain_at(const Mat2& g) const;

  // Phi(pi^n, t p^-R, i) for t = 0 .. p^R - 1 with R = depth().
  std::vector<cplx> m_profile(int n, int i) const;

 private:
  cplx value_whittaker(const FieldElem& a, const FieldElem& m, int i) const;
  cplx value_kirillov(const FieldElem& a, const FieldElem& m, int i) const;
  std::vector<cplx> profile_whittaker(int n, int i) const;
  std::vector<cplx> profile_kirillov(int n, int i) const;
  std::vector<cplx> profile_pointwise(int n, int i) const;
  // Newform Whittaker function on diag(pi^s u, 1), shells 0 .. alpha_top_.
  cplx newform_w(int s, std::uint64_t u) const;
  const ShellFunction& lower_translate(int i) const;

  const Characters* X_;
  RepDescriptor rep_;
  int c_;
  int e_;
  int depth_;
  int alpha_top_ = 0;
  double norm_ = 1.0;
  std::optional<WhittakerTable> table_;
  std::optional<SupercuspidalData> sc_;
  int sc_res_ = 0;
  std::vector<ShellFunction> lower_;
};

// Values of A and B read off the coefficients.
cplx extract_A(const MatrixCoefficient& phi1, int c3);
cplx extract_B(const MatrixCoefficient& phi2, int c3);
// The same values from the closed tables.
cplx table_A(int q, const RepDescriptor& rep);
inline cplx table_B(int q, const RepDescriptor& rep) { return table_A(q, rep); }

// Squared Fourier mass of u -> Phi(pi^n u, m, i) per character level, units sampled at
// resolution r.
std::map<int, double> level_profile(const MatrixCoefficient& phi, int n, const FieldElem& m,
                                    int i, int r);

}  // namespace lt
