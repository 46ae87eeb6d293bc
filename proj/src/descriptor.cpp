#include "localtriple/descriptor.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace lt {

ParseError::ParseError(std::size_t position, const std::string& what)
    : DomainError("parse error at column " + std::to_string(position + 1) + ": " + what),
      pos_(position) {}

namespace {

class Parser {
 public:
  Parser(std::string_view s, int q) : s_(s), q_(q) {}

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(std::string_view t) {
    skip();
    return s_.substr(i_, t.size()) == t;
  }
  bool accept(std::string_view t) {
    if (!peek(t)) return false;
    i_ += t.size();
    return true;
  }
  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(i_, what); }
  std::size_t pos() const { return i_; }
  void finish() {
    skip();
    if (i_ != s_.size()) fail("unexpected trailing text");
  }

  std::string ident() {
    skip();
    const std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (b == i_) fail("expected a name");
    return std::string(s_.substr(b, i_ - b));
  }

  double number() {
    skip();
    double v = 0;
    const char* b = s_.data() + i_;
    auto [end, ec] = std::from_chars(b, s_.data() + s_.size(), v);
    if (ec != std::errc() || end == b) fail("expected a number");
    i_ += static_cast<std::size_t>(end - b);
    return v;
  }

  std::int64_t integer() {
    skip();
    std::int64_t v = 0;
    const char* b = s_.data() + i_;
    auto [end, ec] = std::from_chars(b, s_.data() + s_.size(), v);
    if (ec != std::errc() || end == b) fail("expected an integer");
    i_ += static_cast<std::size_t>(end - b);
    return v;
  }

  double atom() {
    if (accept("pi")) return std::numbers::pi;
    if (accept("(")) {
      const double v = real();
      expect(")");
      return v;
    }
    return number();
  }

  // Signed product or quotient of atoms.
  double real() {
    double sign = 1;
    if (accept("-")) sign = -1;
    else accept("+");
    double v = atom();
    for (;;) {
      if (accept("*")) v *= atom();
      else if (accept("/")) {
        const std::size_t at = pos();
        const double d = atom();
        if (d == 0) throw ParseError(at, "division by zero");
        v /= d;
      } else break;
    }
    return sign * v;
  }

  // re | imi | i | re+imi | re-imi
  cplx literal() {
    skip();
    if (accept("i")) return {0, 1};
    if (accept("+i")) return {0, 1};
    if (accept("-i")) return {0, -1};
    const double a = real();
    if (accept("i")) return {0, a};
    if (peek("+") || peek("-")) {
      double sign = 1;
      if (accept("-")) sign = -1;
      else accept("+");
      double b = 1;
      if (!peek("i")) b = atom();
      expect("i");
      return {a, sign * b};
    }
    return {a, 0};
  }

  cplx value() {
    const std::size_t at = (skip(), i_);
    const bool escaped = accept("tau=");
    cplx z;
    if (accept("exp(")) {
      z = std::polar(1.0, real());
      expect(")");
    } else if (accept("qpow(")) {
      z = std::pow(static_cast<double>(q_), real());
      expect(")");
    } else {
      z = literal();
    }
    if (!escaped && std::abs(std::abs(z) - 1.0) > 1e-12)
      throw ParseError(at, "value off the unit circle; prefix it with tau= to allow it");
    return z;
  }

 private:
  std::string_view s_;
  int q_;
  std::size_t i_ = 0;
};

MultChar character(Parser& P, const Characters& X, bool ramified) {
  const std::size_t at = (P.skip(), P.pos());
  const std::int64_t k = P.integer();
  P.expect(",");
  const std::size_t at_j = (P.skip(), P.pos());
  const std::int64_t j = P.integer();
  P.expect(",");
  const cplx z = P.value();
  if (k < 0 || j < 0) throw ParseError(at, "character level and index must be nonnegative");
  if (ramified && k < 1) throw ParseError(at, "this slot needs a ramified character (level >= 1)");
  if (k > X.resolution())
    throw ParseError(at, "character level " + std::to_string(k) + " exceeds table resolution " +
                             std::to_string(X.resolution()));
  MultChar m = X.make_char(static_cast<int>(k), static_cast<std::uint64_t>(j), z);
  if (m.level != k)
    throw ParseError(at_j, "index " + std::to_string(j) + " does not give a character of level " +
                               std::to_string(k));
  return m;
}

MultChar central_character(Parser& P, const Characters& X) {
  if (P.accept("w0")) return X.trivial();
  if (P.accept("w(")) {
    MultChar m = character(P, X, false);
    P.expect(")");
    return m;
  }
  return MultChar{0, 0, P.value()};
}

}  // namespace

cplx parse_value(std::string_view text, int q) {
  Parser P(text, q);
  const cplx z = P.value();
  P.finish();
  return z;
}

RepDescriptor parse_descriptor(const Characters& X, std::string_view text) {
  Parser P(text, X.field().q());
  const std::size_t start = (P.skip(), P.pos());
  const std::string head = P.ident();
  P.expect("(");
  RepDescriptor r;
  try {
    if (head == "unram") {
      const cplx z1 = P.value();
      P.expect(",");
      const cplx z2 = P.value();
      P.expect(")");
      r = RepDescriptor::unramified(z1, z2);
    } else if (head == "special") {
      const cplx z = P.value();
      P.expect(")");
      r = RepDescriptor::special(z);
    } else if (head == "ps") {
      const MultChar m1 = character(P, X, true);
      P.expect(";");
      const MultChar m2 = character(P, X, true);
      P.expect(")");
      r = RepDescriptor::principal_series(m1, m2);
    } else if (head == "one") {
      const MultChar m = character(P, X, true);
      P.expect(";");
      const cplx zu = P.value();
      P.expect(")");
      r = RepDescriptor::principal_series(MultChar{0, 0, zu}, m);
    } else if (head == "sc") {
      const std::size_t at = (P.skip(), P.pos());
      const std::int64_t c = P.integer();
      if (c < 2) throw ParseError(at, "supercuspidal level must be at least 2");
      P.expect(",");
      const MultChar w = central_character(P, X);
      P.expect(",");
      const std::size_t at_seed = (P.skip(), P.pos());
      const std::int64_t seed = P.integer();
      if (seed < 0) throw ParseError(at_seed, "seed must be nonnegative");
      P.expect(")");
      r = RepDescriptor::supercuspidal(static_cast<int>(c), w, static_cast<std::uint64_t>(seed));
    } else {
      throw ParseError(start, "unknown representation family '" + head + "'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(start, e.what());
  }
  P.finish();
  return r;
}

}  // namespace lt
