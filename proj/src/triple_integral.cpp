#include "localtriple/triple_integral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace lt {

namespace {

constexpr std::int64_t kExact = 1 << 30;

template <class F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int t; (t = next++) < count;) {
        try {
          body(t);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

int twist_for(int c3, const RepDescriptor& r2) { return c3 - r2.level(); }

}  // namespace

double coset_weight(int q, int c, int i) {
  const double qd = q;
  if (i < 0 || i > c) throw DomainError("coset index out of range");
  if (i == 0) return qd / (qd + 1);
  if (i == c) return 1.0 / ((qd + 1) * std::pow(qd, c - 1));
  return (qd - 1) / ((qd + 1) * std::pow(qd, i));
}

void check_hypotheses(const Characters& X, const RepDescriptor& r1, const RepDescriptor& r2,
                      const RepDescriptor& r3) {
  const int c1 = r1.level(), c2 = r2.level(), c3 = r3.level();
  if (c1 == 0 && c2 == 0 && c3 == 1)
    throw DomainError(
        "levels (0,0,1) lie outside the range c3 >= 2 max(c1, c2, 1); this case is handled by "
        "other methods (see README, Scope)");
  if (c3 < 2 * std::max({c1, c2, 1}))
    throw DomainError("level hypothesis c3 >= 2 max(c1, c2, 1) violated");
  MultChar w = X.multiply(X.multiply(r1.central(X), r2.central(X)), r3.central(X));
  if (w.level != 0 || std::abs(w.at_uniformizer - 1.0) > 1e-10)
    throw DomainError("central characters do not multiply to the trivial character");
}

cplx closed_form_integral(int q, const RepDescriptor& r1, const RepDescriptor& r2,
                          const RepDescriptor& r3) {
  const int c3 = r3.level();
  if (c3 < 2 * std::max({r1.level(), r2.level(), 1}))
    throw DomainError("level hypothesis c3 >= 2 max(c1, c2, 1) violated");
  const cplx A = table_A(q, r1), B = table_B(q, r2);
  return (1.0 - A) * (1.0 - B) / ((q + 1.0) * std::pow(static_cast<double>(q), c3 - 1));
}

CoefficientGrid::CoefficientGrid(const MatrixCoefficient& phi, int c3, int threads)
    : depth_(phi.depth()), c3_(c3) {
  const int nn = 2 * depth_ + 1;
  data_.resize(static_cast<std::size_t>(nn) * (c3 + 1));
  parallel_for(static_cast<int>(data_.size()), threads, [&](int t) {
    const int n = t % nn - depth_, i = t / nn;
    data_[t] = phi.m_profile(n, i);
  });
}

const std::vector<cplx>& CoefficientGrid::profile(int n, int i) const {
  return data_[static_cast<std::size_t>(i) * (2 * depth_ + 1) + (n + depth_)];
}

std::shared_ptr<const MatrixCoefficient> GridCache::coefficient(const RepDescriptor& rep,
                                                                int twist, int c3) {
  const std::string key = rep.to_string() + "|" + std::to_string(twist) + "|" + std::to_string(c3);
  {
    std::lock_guard lock(mu_);
    auto it = coeffs_.find(key);
    if (it != coeffs_.end()) return it->second;
  }
  auto phi = std::make_shared<const MatrixCoefficient>(*X_, rep, twist,
                                                       CoefficientOptions{c3 + 2, 0});
  std::lock_guard lock(mu_);
  return coeffs_.emplace(key, phi).first->second;
}

std::shared_ptr<const CoefficientGrid> GridCache::get(const RepDescriptor& rep, int twist, int c3) {
  const std::string key = rep.to_string() + "|" + std::to_string(twist) + "|" + std::to_string(c3);
  {
    std::lock_guard lock(mu_);
    auto it = grids_.find(key);
    if (it != grids_.end()) return it->second;
  }
  auto phi = coefficient(rep, twist, c3);
  auto grid = std::make_shared<const CoefficientGrid>(*phi, c3, threads_);
  std::lock_guard lock(mu_);
  return grids_.emplace(key, grid).first->second;
}

TripleIntegralResult brute_force_integral(GridCache& cache, const RepDescriptor& r1,
                                          const RepDescriptor& r2, const RepDescriptor& r3,
                                          const TripleOptions& opts) {
  const int c3 = r3.level();
  auto phi1 = cache.coefficient(r1, 0, c3);
  const Characters& X = phi1->characters();
  const LocalField& F = X.field();
  check_hypotheses(X, r1, r2, r3);
  const int e = twist_for(c3, r2);
  auto phi2 = cache.coefficient(r2, e, c3);
  auto g1 = cache.get(r1, 0, c3), g2 = cache.get(r2, e, c3), g3 = cache.get(r3, 0, c3);
  const int R = g1->depth();
  const std::uint64_t M = F.pow(R);
  const double q = F.q();

  // Valuation of each m class t / p^R; 0 for t = 0.
  std::vector<int> vm(M, 0);
  for (std::uint64_t t = 1; t < M; ++t) {
    int v = 0;
    for (std::uint64_t s = t; s % F.p() == 0; s /= F.p()) ++v;
    vm[t] = v - R;
  }

  TripleIntegralResult res;
  res.p = F.p();
  res.c3 = c3;
  res.reps[0] = r1.to_string();
  res.reps[1] = r2.to_string();
  res.reps[2] = r3.to_string();
  res.A = extract_A(*phi1, c3);
  res.B = extract_B(*phi2, c3);
  res.A_table = table_A(F.q(), r1);
  res.B_table = table_B(F.q(), r2);
  res.closed_form = closed_form_integral(F.q(), r1, r2, r3);
  res.per_coset.assign(c3 + 1, 0.0);

  std::map<std::pair<int, int>, cplx> rows;
  double boundary = 0;
  for (int i = 0; i <= c3; ++i) {
    const double Ai = coset_weight(F.q(), c3, i);
    for (int n = -R; n <= R; ++n) {
      const auto& p1 = g1->profile(n, i);
      const auto& p2 = g2->profile(n, i);
      const auto& p3 = g3->profile(n, i);
      const double wn = Ai * std::pow(q, n);  // weight times |a|^-1
      cplx shell = 0, outer = 0;
      for (std::uint64_t t = 0; t < M; ++t) {
        const cplx v = p1[t] * p2[t] * p3[t] * wn;
        shell += v;
        if (vm[t] == -R) outer += v;
        rows[{i, vm[t]}] += v;
      }
      // The m-sums on the outermost shells stand in for the omitted tail.
      boundary = std::max(boundary, std::abs(outer));
      if (n == -R || n == R) boundary = std::max(boundary, std::abs(shell));
    }
  }
  res.boundary_mass = boundary;
  if (boundary > opts.boundary_tol)
    throw TruncationError("integrand does not vanish on the outermost shells (max " +
                          std::to_string(boundary) + ")");
  for (const auto& [key, v] : rows) {
    res.contributions.push_back(ContributionRow{key.first, key.second, v});
    res.per_coset[key.first] += v;
    res.brute_force += v;
  }
  res.abs_error = std::abs(res.brute_force - res.closed_form);
  return res;
}

cplx brute_force_full(GridCache& cache, const RepDescriptor& r1, const RepDescriptor& r2,
                      const RepDescriptor& r3, int unit_res) {
  const int c3 = r3.level();
  auto phi1 = cache.coefficient(r1, 0, c3);
  const Characters& X = phi1->characters();
  const LocalField& F = X.field();
  check_hypotheses(X, r1, r2, r3);
  auto phi2 = cache.coefficient(r2, twist_for(c3, r2), c3);
  auto phi3 = cache.coefficient(r3, 0, c3);
  const int R = phi1->depth();
  const std::uint64_t M = F.pow(R);
  const auto units = F.unit_classes(unit_res);
  cplx total = 0;
  for (int i = 0; i <= c3; ++i) {
    const double Ai = coset_weight(F.q(), c3, i);
    for (int n = -R; n <= R; ++n) {
      cplx shell = 0;
      for (auto u : units) {
        const FieldElem a = F.make(n, static_cast<std::int64_t>(u));
        for (std::uint64_t t = 0; t < M; ++t) {
          const FieldElem m = t == 0 ? F.zero(kExact) : F.make(-R, static_cast<std::int64_t>(t));
          const cplx v3 = phi3->value(a, m, i);
          if (v3 == 0.0) continue;
          const cplx v1 = phi1->value(a, m, i);
          if (v1 == 0.0) continue;
          shell += v1 * phi2->value(a, m, i) * v3;
        }
      }
      total += Ai * std::pow(static_cast<double>(F.q()), n) * shell /
               static_cast<double>(units.size());
    }
  }
  return total;
}

bool epsilon_sign_assert(const TripleIntegralResult& r) { return std::abs(r.closed_form) > 0; }

double one_minus_A_lower_bound(int q, double alpha) {
  const double qd = q;
  return (qd + 1.0 / qd - std::pow(qd, 2 * alpha) - std::pow(qd, -2 * alpha)) / (qd + 1);
}

}  // namespace lt
