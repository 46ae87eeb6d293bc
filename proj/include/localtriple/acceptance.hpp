#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "localtriple/triple_integral.hpp"

namespace lt {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::set<int> criteria{1, 2, 3, 4, 5, 6, 7, 8};
  int threads = 1;
  // Progress lines; may be empty.
  std::function<void(const std::string&)> log;
};

// One triple of the oracle grid.
struct GridTriple {
  int p = 0;
  RepDescriptor r1, r2, r3;
};

// pi1, pi2 over the listed families and pi3 over ps(1,1) or supercuspidal, with the central
// character of pi3 adjusted so the product is trivial; triples that cannot be completed or
// violate c3 >= 2 max(c1, c2, 1) are left out.
std::vector<GridTriple> oracle_grid(const Characters& X, std::uint64_t pi3_seed);

// The grid's families for pi1 and pi2 at this prime.
std::vector<RepDescriptor> grid_factors(const Characters& X);

struct PropositionCheck {
  double value_error = 0;
  std::size_t profiles = 0;
  bool profile_ok = true;
  std::string mismatch;
};

// Values 1, -1/(q-1), -1/(q-1), the integral q^k/(q-1) and the support/level profile of
// pi((1 0;pi^i 1)) 1_{1,k} for one supercuspidal datum.
PropositionCheck check_supercuspidal_proposition(const Characters& X, int c, const MultChar& w,
                                                 std::uint64_t seed, int k);

// Characters used for each prime by the suite.
int suite_resolution(int p);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

// "PASS 3 supercuspidal proposition: ..." lines.
std::string format_result(const CriterionResult& r);

}  // namespace lt
