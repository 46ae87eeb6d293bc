#include <memory>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "localtriple/acceptance.hpp"
#include "localtriple/descriptor.hpp"
#include "localtriple/hecke_amplifier.hpp"
#include "localtriple/triple_integral.hpp"
#include "localtriple/version.hpp"

namespace py = pybind11;
using namespace lt;

namespace {

// Field, character tables and a grid cache for one prime.
class Context {
 public:
  Context(int p, int resolution, int threads)
      : F_(std::make_unique<LocalField>(p)),
        X_(std::make_unique<Characters>(*F_, resolution > 0 ? resolution : suite_resolution(p))),
        cache_(std::make_unique<GridCache>(*X_, threads)) {}

  int p() const { return F_->p(); }
  int resolution() const { return X_->resolution(); }

  RepDescriptor parse(const std::string& text) const { return parse_descriptor(*X_, text); }

  py::dict local_integral(const std::string& a, const std::string& b, const std::string& c) {
    const auto r1 = parse(a), r2 = parse(b), r3 = parse(c);
    check_hypotheses(*X_, r1, r2, r3);
    TripleIntegralResult res;
    {
      py::gil_scoped_release release;
      res = brute_force_integral(*cache_, r1, r2, r3);
    }
    py::list contributions;
    for (const auto& row : res.contributions)
      contributions.append(py::make_tuple(row.i, row.vm, row.value));
    py::dict d;
    d["p"] = res.p;
    d["c3"] = res.c3;
    d["reps"] = py::make_tuple(res.reps[0], res.reps[1], res.reps[2]);
    d["A"] = res.A;
    d["B"] = res.B;
    d["A_table"] = res.A_table;
    d["B_table"] = res.B_table;
    d["closed_form"] = res.closed_form;
    d["brute_force"] = res.brute_force;
    d["abs_error"] = res.abs_error;
    d["boundary_mass"] = res.boundary_mass;
    d["per_coset"] = res.per_coset;
    d["contributions"] = contributions;
    return d;
  }

  cplx closed_form(const std::string& a, const std::string& b, const std::string& c) const {
    const auto r1 = parse(a), r2 = parse(b), r3 = parse(c);
    check_hypotheses(*X_, r1, r2, r3);
    return closed_form_integral(F_->q(), r1, r2, r3);
  }

  std::vector<cplx> m_profile(const std::string& rep, int n, int i, int twist, int depth) const {
    MatrixCoefficient phi(*X_, parse(rep), twist, CoefficientOptions{depth, 0});
    return phi.m_profile(n, i);
  }

 private:
  std::unique_ptr<LocalField> F_;
  std::unique_ptr<Characters> X_;
  std::unique_ptr<GridCache> cache_;
};

py::dict hecke_check(int q, cplx chi1, cplx chi2, double tol) {
  const SphericalEigendata e(q, chi1, chi2);
  const auto r = verify_hecke_identities(e, tol);
  std::vector<cplx> star, normalized;
  for (int k = 0; k <= 4; ++k) {
    star.push_back(hecke_star_eigenvalue(e, k));
    normalized.push_back(normalized_eigenvalue(e, k));
  }
  py::dict d;
  d["lambda_star"] = star;
  d["normalized"] = normalized;
  d["dual_l"] = dual_eigenvalue_l(e);
  d["dual_l2"] = dual_eigenvalue_l2(e);
  d["tempered"] = e.tempered();
  d["max_residual"] = r.max_residual();
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_localtriple, m) {
  m.doc() = "Local triple product integrals and Hecke amplifier checks for GL2 over Q_p";

  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<ParseError> parse_error(m, "ParseError", domain_error.ptr());
  static py::exception<PrecisionError> precision_error(m, "PrecisionError", PyExc_ArithmeticError);
  static py::exception<TruncationError> truncation_error(m, "TruncationError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr ep) {
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain_error, e.what());
    } catch (const PrecisionError& e) {
      py::set_error(precision_error, e.what());
    } catch (const TruncationError& e) {
      py::set_error(truncation_error, e.what());
    }
  });

  m.def("version", [] { return std::string(version()); });

  py::class_<Context>(m, "Context")
      .def(py::init<int, int, int>(), py::arg("p"), py::arg("resolution") = 0, py::arg("threads") = 1)
      .def_property_readonly("p", &Context::p)
      .def_property_readonly("resolution", &Context::resolution)
      .def("normalize", [](const Context& c, const std::string& s) { return c.parse(s).to_string(); },
           "Canonical form of a representation descriptor")
      .def("level", [](const Context& c, const std::string& s) { return c.parse(s).level(); })
      .def("local_integral", &Context::local_integral, py::arg("rep1"), py::arg("rep2"), py::arg("rep3"))
      .def("closed_form", &Context::closed_form, py::arg("rep1"), py::arg("rep2"), py::arg("rep3"))
      .def("m_profile", &Context::m_profile, py::arg("rep"), py::arg("n"), py::arg("i"), py::arg("twist") = 0,
           py::arg("depth") = 0, "Phi(diag(pi^n,1)(1 m;0 1)(1 0;pi^i 1)) for m = t/p^R, t mod p^R");

  m.def("parse_value", &parse_value, py::arg("text"), py::arg("q"));

  m.def(
      "amplifier_exponents",
      [](const std::string& alpha) {
        const auto x = amplifier_exponents(parse_rational(alpha));
        return py::make_tuple(to_string(x.b), to_string(x.delta));
      },
      py::arg("alpha"), "Exact (b, delta) as fraction strings");

  m.def(
      "prime_window",
      [](double N, const std::string& b) { return prime_window(N, parse_rational(b)); },
      py::arg("N"), py::arg("b"), "Primes l with N^b <= l <= 2 N^b");

  m.def("hecke_check", &hecke_check, py::arg("q"), py::arg("chi1"), py::arg("chi2"), py::arg("tol") = 1e-12);

  m.def(
      "corollary_scan",
      [](int q, double alpha) {
        const auto s = corollary_bound_scan(q, alpha);
        py::dict d;
        d["minimum"] = s.minimum;
        d["points"] = s.points;
        d["lambda_at_min"] = s.lambda_at_min;
        d["w_at_min"] = s.w_at_min;
        return d;
      },
      py::arg("q"), py::arg("alpha"));

  m.def(
      "run_acceptance",
      [](std::vector<int> criteria, int threads) {
        AcceptanceOptions opts;
        opts.threads = threads;
        if (!criteria.empty()) opts.criteria = std::set<int>(criteria.begin(), criteria.end());
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_acceptance(opts);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("criteria") = std::vector<int>{}, py::arg("threads") = 1);
}
