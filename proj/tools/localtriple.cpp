#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "localtriple/acceptance.hpp"
#include "localtriple/descriptor.hpp"
#include "localtriple/hecke_amplifier.hpp"
#include "localtriple/triple_integral.hpp"
#include "localtriple/version.hpp"

using json = nlohmann::ordered_json;
using namespace lt;

namespace {

enum Exit { kOk = 0, kAssertion = 1, kParse = 2, kDomain = 3, kNumeric = 4, kInternal = 5 };

struct RunConfig {
  std::string subcommand;
  int p = 3;
  int precision = 0;  // character table resolution; 0 picks a default per prime
  std::string rep1, rep2, rep3;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string format;
  int threads = 1;
  std::string out;
  // matcoef / whittaker
  int twist = 0;
  int depth = 0;
  std::vector<int> indices;
  std::optional<int> nmin, nmax;
  int unit_res = 0;
  bool nonzero = false;
  // hecke-check / amplifier
  std::string chi1 = "exp(0)", chi2 = "exp(0)";
  std::string alpha = "7/64";
  double N = 1e16;
  int sets = 50;
  std::string suite = "all";
};

json cjson(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

int default_resolution(int p) {
  if (p == 3 || p == 5) return suite_resolution(p);
  int r = 1;
  while (std::pow(static_cast<double>(p), r + 1) <= 2e6) ++r;
  return r;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string csv_header() { return std::string("# localtriple ") + version(); }

json header(const RunConfig& cfg) {
  return json{{"version", version()}, {"command", cfg.subcommand}};
}

void need_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (cfg.format == a) return;
  throw DomainError("format '" + cfg.format + "' is not available for " + cfg.subcommand);
}

struct Field {
  LocalField F;
  Characters X;
  explicit Field(const RunConfig& cfg)
      : F(cfg.p), X(F, cfg.precision > 0 ? cfg.precision : default_resolution(cfg.p)) {}
};

RepDescriptor need_rep(const Characters& X, const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing ") + flag);
  return parse_descriptor(X, text);
}

int run_local_integral(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "json";
  need_format(cfg, {"json", "csv"});
  Field fd(cfg);
  const RepDescriptor r1 = need_rep(fd.X, cfg.rep1, "--rep1");
  const RepDescriptor r2 = need_rep(fd.X, cfg.rep2, "--rep2");
  const RepDescriptor r3 = need_rep(fd.X, cfg.rep3, "--rep3");
  check_hypotheses(fd.X, r1, r2, r3);
  GridCache cache(fd.X, cfg.threads);
  const auto res = brute_force_integral(cache, r1, r2, r3);
  const double tol = cfg.tol.value_or(1e-8);
  const bool pass = res.abs_error <= tol;
  Output out(cfg.out);
  if (cfg.format == "json") {
    json j = header(cfg);
    j["p"] = res.p;
    j["reps"] = {res.reps[0], res.reps[1], res.reps[2]};
    j["c3"] = res.c3;
    j["A"] = cjson(res.A);
    j["B"] = cjson(res.B);
    j["A_table"] = cjson(res.A_table);
    j["B_table"] = cjson(res.B_table);
    j["closed_form"] = cjson(res.closed_form);
    j["brute_force"] = cjson(res.brute_force);
    j["abs_error"] = res.abs_error;
    j["tol"] = tol;
    j["pass"] = pass;
    j["boundary_mass"] = res.boundary_mass;
    j["per_coset"] = json::array();
    for (cplx v : res.per_coset) j["per_coset"].push_back(cjson(v));
    j["contributions"] = json::array();
    for (const auto& row : res.contributions)
      j["contributions"].push_back({{"i", row.i}, {"vm", row.vm}, {"value", cjson(row.value)}});
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << csv_header() << "\n# p=" << res.p << " closed_form=" << res.closed_form.real()
             << " brute_force=" << res.brute_force.real() << " abs_error=" << res.abs_error << "\n";
    out.os() << "i,vm,re,im\n";
    out.os().precision(17);
    for (const auto& row : res.contributions)
      out.os() << row.i << "," << row.vm << "," << row.value.real() << "," << row.value.imag() << "\n";
  }
  return pass ? kOk : kAssertion;
}

int run_matcoef(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "csv";
  need_format(cfg, {"json", "csv"});
  Field fd(cfg);
  const RepDescriptor rep = need_rep(fd.X, cfg.rep1, "--rep1");
  MatrixCoefficient phi(fd.X, rep, cfg.twist, CoefficientOptions{cfg.depth, 0});
  const int R = phi.depth();
  std::vector<int> idx = cfg.indices;
  if (idx.empty())
    for (int i = 0; i <= phi.level() + cfg.twist; ++i) idx.push_back(i);
  const int lo = cfg.nmin.value_or(-R), hi = cfg.nmax.value_or(R);
  Output out(cfg.out);
  json rows = json::array();
  if (cfg.format == "csv") {
    out.os() << csv_header() << "\n# rep=" << rep.to_string() << " twist=" << cfg.twist << " m=t/p^R\n";
    out.os() << "n,i,t,R,re,im\n";
    out.os().precision(17);
  }
  for (int i : idx)
    for (int n = lo; n <= hi; ++n) {
      const auto prof = phi.m_profile(n, i);
      for (std::size_t t = 0; t < prof.size(); ++t) {
        if (cfg.nonzero && std::abs(prof[t]) < 1e-14) continue;
        if (cfg.format == "csv")
          out.os() << n << "," << i << "," << t << "," << R << "," << prof[t].real() << "," << prof[t].imag() << "\n";
        else
          rows.push_back({{"n", n}, {"i", i}, {"t", t}, {"R", R}, {"value", cjson(prof[t])}});
      }
    }
  if (cfg.format == "json") {
    json j = header(cfg);
    j["p"] = cfg.p;
    j["rep"] = rep.to_string();
    j["twist"] = cfg.twist;
    j["depth"] = R;
    j["rows"] = rows;
    out.os() << j.dump(2) << "\n";
  }
  return kOk;
}

int run_whittaker(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "csv";
  need_format(cfg, {"json", "csv"});
  Field fd(cfg);
  const RepDescriptor rep = need_rep(fd.X, cfg.rep1, "--rep1");
  const int c = rep.level();
  const int hi = cfg.nmax.value_or(4), lo = cfg.nmin.value_or(-c);
  std::optional<WhittakerTable> W;
  if (rep.kind == RepKind::ps_ramified) W = WhittakerTable::ps_ramified(fd.X, rep.mu1, rep.mu2, std::max(hi, 1));
  else if (rep.kind == RepKind::one_ramified) W = WhittakerTable::one_ramified(fd.X, rep.mu1, rep.mu2, std::max(hi, 1));
  else throw DomainError("whittaker needs a ps(...) or one(...) representation");
  std::vector<int> idx = cfg.indices;
  if (idx.empty())
    for (int i = 0; i <= c; ++i) idx.push_back(i);
  const int res = cfg.unit_res > 0 ? cfg.unit_res : std::max(c, 1);
  const auto units = fd.F.unit_classes(res);
  Output out(cfg.out);
  json rows = json::array();
  if (cfg.format == "csv") {
    out.os() << csv_header() << "\n# rep=" << rep.to_string() << " normalized=" << W->normalized() << "\n";
    out.os() << "i,n,u,re,im\n";
    out.os().precision(17);
  }
  for (int i : idx)
    for (int n = lo; n <= hi; ++n)
      for (auto u : units) {
        const cplx v = W->value(i, fd.F.make(n, static_cast<std::int64_t>(u)));
        if (cfg.nonzero && std::abs(v) < 1e-14) continue;
        if (cfg.format == "csv")
          out.os() << i << "," << n << "," << u << "," << v.real() << "," << v.imag() << "\n";
        else
          rows.push_back({{"i", i}, {"n", n}, {"u", u}, {"value", cjson(v)}});
      }
  if (cfg.format == "json") {
    json j = header(cfg);
    j["p"] = cfg.p;
    j["rep"] = rep.to_string();
    j["normalized"] = W->normalized();
    j["rows"] = rows;
    out.os() << j.dump(2) << "\n";
  }
  return kOk;
}

ShellFunction random_shell_function(const Characters& X, int R, std::mt19937_64& rng) {
  ShellFunction f(R);
  std::normal_distribution<double> g;
  const std::uint64_t n = X.group_order(R);
  for (int t = 0; t < 6; ++t) f.add(static_cast<int>(rng() % 7) - 3, rng() % n, {g(rng), g(rng)});
  return f;
}

int run_kirillov_check(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "json";
  need_format(cfg, {"json"});
  Field fd(cfg);
  const RepDescriptor rep = need_rep(fd.X, cfg.rep1, "--rep1");
  if (rep.kind != RepKind::supercuspidal) throw DomainError("kirillov-check needs an sc(...) representation");
  const double tol = cfg.tol.value_or(1e-10);
  const int c = rep.sc_level;
  SupercuspidalData D(fd.X, c, rep.sc_central, rep.seed);
  std::mt19937_64 rng(cfg.seed);
  const int R = std::min(c + 2, fd.X.resolution());
  double omega2 = 0, unitary = 0;
  for (int t = 0; t < 20; ++t) {
    const ShellFunction f = random_shell_function(fd.X, R, rng);
    ShellFunction expect = f;
    expect *= D.w0_minus_one();
    omega2 = std::max(omega2, distance(act_omega(D, act_omega(D, f)), expect));
    const double n0 = f.norm_squared();
    unitary = std::max(unitary, std::abs(act_omega(D, f).norm_squared() - n0));
    unitary = std::max(unitary, std::abs(act_lower(D, f, fd.F.make(2 * R + 4, 1)).norm_squared() - n0));
  }
  json j = header(cfg);
  j["p"] = cfg.p;
  j["rep"] = rep.to_string();
  j["omega_square_residual"] = omega2;
  j["unitarity_residual"] = unitary;
  bool pass = omega2 <= tol && unitary <= tol;
  j["proposition"] = json::array();
  for (int k : {0, 1, 2}) {
    if (c + k + 1 > fd.X.resolution()) continue;
    const auto chk = check_supercuspidal_proposition(fd.X, c, rep.sc_central, rep.seed, k);
    const bool ok = chk.value_error <= tol && chk.profile_ok;
    pass = pass && ok;
    j["proposition"].push_back({{"k", k}, {"value_error", chk.value_error}, {"profiles", chk.profiles},
                                {"profile_ok", chk.profile_ok}, {"mismatch", chk.mismatch}, {"pass", ok}});
  }
  j["tol"] = tol;
  j["pass"] = pass;
  Output out(cfg.out);
  out.os() << j.dump(2) << "\n";
  return pass ? kOk : kAssertion;
}

int run_hecke_check(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "json";
  need_format(cfg, {"json"});
  const double tol = cfg.tol.value_or(1e-12);
  const SphericalEigendata e(cfg.p, parse_value(cfg.chi1, cfg.p), parse_value(cfg.chi2, cfg.p));
  const auto rep = verify_hecke_identities(e, tol);
  const double alpha = to_double(parse_rational(cfg.alpha));
  const auto scan = corollary_bound_scan(cfg.p, alpha);
  json j = header(cfg);
  j["q"] = cfg.p;
  j["chi1"] = cjson(e.chi1);
  j["chi2"] = cjson(e.chi2);
  j["tempered"] = e.tempered();
  j["lambda_star"] = json::array();
  j["normalized"] = json::array();
  for (int r = 0; r <= 4; ++r) {
    j["lambda_star"].push_back(cjson(hecke_star_eigenvalue(e, r)));
    j["normalized"].push_back(cjson(normalized_eigenvalue(e, r)));
  }
  j["dual_l"] = cjson(dual_eigenvalue_l(e));
  j["dual_l2"] = cjson(dual_eigenvalue_l2(e));
  j["dual_sum"] = std::abs(dual_eigenvalue_l(e)) + std::abs(dual_eigenvalue_l2(e));
  j["residuals"] = {{"convolution", rep.convolution}, {"dual_l", rep.dual_l}, {"dual_l2", rep.dual_l2},
                    {"relation", rep.relation}, {"product_rule", rep.lemma}};
  j["corollary_scan"] = {{"alpha", cfg.alpha}, {"points", scan.points}, {"minimum", scan.minimum},
                         {"lambda_at_min", cjson(scan.lambda_at_min)}, {"w_at_min", cjson(scan.w_at_min)}};
  const bool pass = rep.pass && scan.minimum >= 1 - 1e-9;
  j["tol"] = tol;
  j["pass"] = pass;
  Output out(cfg.out);
  out.os() << j.dump(2) << "\n";
  return pass ? kOk : kAssertion;
}

int run_amplifier(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "json";
  need_format(cfg, {"json", "csv"});
  const Rational alpha = parse_rational(cfg.alpha);
  const auto x = amplifier_exponents(alpha);
  const Rational gap = x.delta - Rational(1, 24);
  const auto primes = prime_window(cfg.N, x.b);
  std::mt19937_64 rng(cfg.seed);
  const double a = to_double(alpha);
  std::size_t exact_ok = 0;
  double margin = 1e300, c1 = 0, c2 = 0, c3 = 0;
  for (int k = 0; k < cfg.sets; ++k) {
    AmplifierSpec spec{alpha, cfg.N, x.b, {}};
    for (auto l : primes) spec.T.push_back({l, random_exact_eigendata(rng, l, a, k % 2 == 0)});
    const auto rep = synthetic_amplifier_check(spec);
    if (rep.exact_lower_bound) ++exact_ok;
    margin = std::min(margin, rep.amplified_sum - static_cast<double>(rep.size));
    c1 = std::max(c1, rep.c_amplified);
    c2 = std::max(c2, rep.c_norm);
    c3 = std::max(c3, rep.c_pair);
  }
  const bool pass = exact_ok == static_cast<std::size_t>(cfg.sets);
  std::cerr << "b=" << to_string(x.b) << " delta=" << to_string(x.delta) << "\n";
  Output out(cfg.out);
  if (cfg.format == "json") {
    json j = header(cfg);
    j["alpha"] = to_string(alpha);
    j["b"] = to_string(x.b);
    j["b_decimal"] = to_double(x.b);
    j["delta"] = to_string(x.delta);
    j["delta_decimal"] = to_double(x.delta);
    j["delta_minus_1_24"] = to_string(gap);
    j["delta_exceeds_1_24"] = gap > 0;
    j["N"] = cfg.N;
    j["window"] = {std::pow(cfg.N, to_double(x.b)), 2 * std::pow(cfg.N, to_double(x.b))};
    j["primes"] = primes;
    j["synthetic"] = {{"sets", cfg.sets}, {"exact_lower_bound", exact_ok}, {"min_sum_minus_T", cfg.sets ? margin : 0.0},
                      {"c_amplified_max", c1}, {"c_norm_max", c2}, {"c_pair_max", c3}};
    j["pass"] = pass;
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << csv_header() << "\nquantity,exact,decimal\n";
    out.os().precision(17);
    out.os() << "alpha," << to_string(alpha) << "," << a << "\n";
    out.os() << "b," << to_string(x.b) << "," << to_double(x.b) << "\n";
    out.os() << "delta," << to_string(x.delta) << "," << to_double(x.delta) << "\n";
    out.os() << "delta_minus_1_24," << to_string(gap) << "," << to_double(gap) << "\n";
  }
  return pass ? kOk : kAssertion;
}

int run_verify(RunConfig cfg) {
  if (cfg.format.empty()) cfg.format = "csv";
  need_format(cfg, {"json", "csv"});
  AcceptanceOptions opts;
  opts.threads = cfg.threads;
  if (cfg.suite != "all") {
    opts.criteria.clear();
    std::stringstream ss(cfg.suite);
    for (std::string tok; std::getline(ss, tok, ',');) {
      int id = 0;
      try {
        id = std::stoi(tok);
      } catch (const std::exception&) {
        throw DomainError("suite must be 'all' or a comma list of criteria 1-8");
      }
      if (id < 1 || id > 8) throw DomainError("criterion " + tok + " is outside 1-8");
      opts.criteria.insert(id);
    }
  }
  const auto results = run_acceptance(opts);
  bool pass = true;
  for (const auto& r : results) pass = pass && r.pass;
  Output out(cfg.out);
  if (cfg.format == "json") {
    json j = header(cfg);
    j["criteria"] = json::array();
    for (const auto& r : results)
      j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    j["pass"] = pass;
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << csv_header() << "\n";
    for (const auto& r : results) out.os() << format_result(r) << "\n";
  }
  return pass ? kOk : kAssertion;
}

void diagnostic(const char* kind, const std::exception& e, std::optional<std::size_t> pos = {}) {
  json j{{"version", version()}, {"error", kind}, {"message", e.what()}};
  if (pos) j["position"] = *pos;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local triple product integrals on GL2 over Q_p"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s, bool reps) {
    s->add_option("--p", cfg.p, "Residue characteristic")->check(CLI::PositiveNumber);
    s->add_option("--precision", cfg.precision, "Character table resolution (default per prime)");
    if (reps) {
      s->add_option("--rep1", cfg.rep1, "First representation descriptor");
      s->add_option("--rep2", cfg.rep2, "Second representation descriptor");
      s->add_option("--rep3", cfg.rep3, "Third representation descriptor");
    }
    s->add_option("--seed", cfg.seed, "Seed for sampled data");
    s->add_option("--tol", cfg.tol, "Assertion tolerance");
    s->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    s->add_option("--out", cfg.out, "Output file (default stdout)");
  };

  auto* li = app.add_subcommand("local-integral", "Brute-force local integral against the closed form");
  common(li, true);
  auto* mc = app.add_subcommand("matcoef", "Matrix coefficient on coset representatives");
  common(mc, true);
  mc->add_option("--twist", cfg.twist, "Conjugation exponent e");
  mc->add_option("--depth", cfg.depth, "m-resolution R (default 2max(c,1)+e+2)");
  mc->add_option("--i", cfg.indices, "Coset indices");
  mc->add_option("--nmin", cfg.nmin, "Smallest v(a)");
  mc->add_option("--nmax", cfg.nmax, "Largest v(a)");
  mc->add_flag("--nonzero", cfg.nonzero, "Drop zero rows");
  auto* wh = app.add_subcommand("whittaker", "Whittaker newform translates W^(i)");
  common(wh, true);
  wh->add_option("--i", cfg.indices, "Translate indices");
  wh->add_option("--nmin", cfg.nmin, "Smallest valuation");
  wh->add_option("--nmax", cfg.nmax, "Largest valuation");
  wh->add_option("--res", cfg.unit_res, "Unit resolution");
  wh->add_flag("--nonzero", cfg.nonzero, "Drop zero rows");
  auto* kc = app.add_subcommand("kirillov-check", "Kirillov model checks for a supercuspidal datum");
  common(kc, true);
  auto* hc = app.add_subcommand("hecke-check", "Hecke eigenvalue identities at one place");
  common(hc, false);
  hc->add_option("--chi1", cfg.chi1, "Satake value chi1(pi)");
  hc->add_option("--chi2", cfg.chi2, "Satake value chi2(pi)");
  hc->add_option("--alpha", cfg.alpha, "Ramanujan exponent for the corollary scan");
  auto* am = app.add_subcommand("amplifier", "Amplifier exponents and synthetic inequality checks");
  common(am, false);
  am->add_option("--alpha", cfg.alpha, "Ramanujan exponent as a fraction");
  am->add_option("--N", cfg.N, "Conductor norm for the prime window");
  am->add_option("--sets", cfg.sets, "Random eigendata sets")->check(CLI::NonNegativeNumber);
  auto* vf = app.add_subcommand("verify", "Run the acceptance suite");
  common(vf, false);
  vf->add_option("--suite", cfg.suite, "'all' or a comma list of criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (cfg.subcommand == "local-integral") return run_local_integral(cfg);
    if (cfg.subcommand == "matcoef") return run_matcoef(cfg);
    if (cfg.subcommand == "whittaker") return run_whittaker(cfg);
    if (cfg.subcommand == "kirillov-check") return run_kirillov_check(cfg);
    if (cfg.subcommand == "hecke-check") return run_hecke_check(cfg);
    if (cfg.subcommand == "amplifier") return run_amplifier(cfg);
    if (cfg.subcommand == "verify") return run_verify(cfg);
  } catch (const ParseError& e) {
    diagnostic("parse", e, e.position());
    return kParse;
  } catch (const DomainError& e) {
    diagnostic("domain", e);
    return kDomain;
  } catch (const TruncationError& e) {
    diagnostic("truncation", e);
    return kNumeric;
  } catch (const PrecisionError& e) {
    diagnostic("precision", e);
    return kNumeric;
  } catch (const std::exception& e) {
    diagnostic("internal", e);
    return kInternal;
  }
  return kInternal;
}
