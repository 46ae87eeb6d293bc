#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "localtriple/matrix_coefficients.hpp"

namespace lt {

// Haar volume attached to the coset (1 0;pi^i 1) K1(pi^c) in the Borel decomposition.
double coset_weight(int q, int c, int i);

// Throws DomainError unless c3 >= 2 max(c1, c2, 1), rep3 has level c3 and the central
// characters multiply to the trivial character.
void check_hypotheses(const Characters& X, const RepDescriptor& r1, const RepDescriptor& r2,
                      const RepDescriptor& r3);

// (1 - A)(1 - B) / ((q + 1) q^(c3 - 1)) with A and B from the closed tables.
cplx closed_form_integral(int q, const RepDescriptor& r1, const RepDescriptor& r2,
                          const RepDescriptor& r3);

// Phi(pi^n, t p^-R, i) for n in [-R, R], t mod p^R, i in [0, c3].
class CoefficientGrid {
 public:
  CoefficientGrid(const MatrixCoefficient& phi, int c3, int threads = 1);

  int depth() const { return depth_; }
  int top() const { return c3_; }
  const std::vector<cplx>& profile(int n, int i) const;

 private:
  int depth_;
  int c3_;
  std::vector<std::vector<cplx>> data_;
};

// Memoized grids keyed by representation, twist and level of the integral.
class GridCache {
 public:
  GridCache(const Characters& X, int threads = 1) : X_(&X), threads_(threads) {}
  std::shared_ptr<const CoefficientGrid> get(const RepDescriptor& rep, int twist, int c3);
  std::shared_ptr<const MatrixCoefficient> coefficient(const RepDescriptor& rep, int twist, int c3);

 private:
  const Characters* X_;
  int threads_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const MatrixCoefficient>> coeffs_;
  std::map<std::string, std::shared_ptr<const CoefficientGrid>> grids_;
};

struct ContributionRow {
  int i = 0;
  // Valuation of m; 0 stands for the class v(m) >= 0.
  int vm = 0;
  cplx value;
};

struct TripleIntegralResult {
  int p = 0;
  int c3 = 0;
  std::string reps[3];
  cplx A, B;              // read off the coefficients
  cplx A_table, B_table;  // from the closed tables
  cplx brute_force;
  cplx closed_form;
  double abs_error = 0;
  double boundary_mass = 0;
  std::vector<cplx> per_coset;  // indexed by i
  std::vector<ContributionRow> contributions;
};

struct TripleOptions {
  // Largest weighted m-sum allowed on the outermost a- and m-shells.
  double boundary_tol = 1e-9;
};

TripleIntegralResult brute_force_integral(GridCache& cache, const RepDescriptor& r1,
                                          const RepDescriptor& r2, const RepDescriptor& r3,
                                          const TripleOptions& opts = {});

// Same sum with a running over pi^n u for all units u mod p^unit_res and pointwise values.
cplx brute_force_full(GridCache& cache, const RepDescriptor& r1, const RepDescriptor& r2,
                      const RepDescriptor& r3, int unit_res);

// Nonvanishing of the local integral, which forces the local root number +1.
bool epsilon_sign_assert(const TripleIntegralResult& r);

// (q + 1/q - q^(2 alpha) - q^(-2 alpha)) / (q + 1), the lower bound for |1 - A|.
double one_minus_A_lower_bound(int q, double alpha);

}  // namespace lt
