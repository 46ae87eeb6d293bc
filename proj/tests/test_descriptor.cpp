#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "localtriple/descriptor.hpp"

using namespace lt;

namespace {

struct Ctx {
  LocalField F{3};
  Characters X{F, 9};
};

std::size_t error_position(const Characters& X, const std::string& text) {
  try {
    parse_descriptor(X, text);
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string::npos;
}

}  // namespace

TEST(ParseValue, Forms) {
  EXPECT_EQ(parse_value("1", 3), cplx(1, 0));
  EXPECT_EQ(parse_value("-1", 3), cplx(-1, 0));
  EXPECT_EQ(parse_value("i", 3), cplx(0, 1));
  EXPECT_EQ(parse_value("-i", 3), cplx(0, -1));
  EXPECT_EQ(parse_value("0.6+0.8i", 3), cplx(0.6, 0.8));
  EXPECT_EQ(parse_value("0.6-0.8i", 3), cplx(0.6, -0.8));
  EXPECT_NEAR(std::abs(parse_value("exp(pi/3)", 3) - std::polar(1.0, std::numbers::pi / 3)), 0, 1e-15);
  EXPECT_NEAR(std::abs(parse_value("exp(-0.5)", 3) - std::polar(1.0, -0.5)), 0, 1e-15);
  EXPECT_NEAR(std::abs(parse_value("tau=qpow(7/64)", 3) - std::pow(3.0, 7.0 / 64)), 0, 1e-15);
  EXPECT_EQ(parse_value("tau=2", 3), cplx(2, 0));
  EXPECT_THROW(parse_value("2", 3), ParseError);
  EXPECT_THROW(parse_value("qpow(1)", 3), ParseError);
  EXPECT_THROW(parse_value("1+", 3), ParseError);
}

TEST(ParseDescriptor, Examples) {
  Ctx S;
  auto sp = parse_descriptor(S.X, "special(exp(0))");
  EXPECT_EQ(sp.kind, RepKind::special);
  EXPECT_EQ(sp.chi1, cplx(1.0));
  auto ps = parse_descriptor(S.X, "ps(1,1,exp(0.5);1,1,exp(-0.5))");
  EXPECT_EQ(ps.kind, RepKind::ps_ramified);
  EXPECT_EQ(ps.type(), 1);
  EXPECT_EQ(ps.level(), 2);
  auto sc = parse_descriptor(S.X, "sc(3,w0,42)");
  EXPECT_EQ(sc.kind, RepKind::supercuspidal);
  EXPECT_EQ(sc.sc_level, 3);
  EXPECT_EQ(sc.seed, 42u);
  EXPECT_EQ(sc.sc_central.level, 0);
  auto one = parse_descriptor(S.X, "one(1,1,1;exp(0.3))");
  EXPECT_EQ(one.kind, RepKind::one_ramified);
  EXPECT_EQ(one.level(), 1);
  EXPECT_EQ(one.type(), 3);
  auto un = parse_descriptor(S.X, " unram( i , -i ) ");
  EXPECT_EQ(un.kind, RepKind::unramified);
  auto nt = parse_descriptor(S.X, "unram(tau=qpow(-7/64),tau=qpow(7/64))");
  EXPECT_FALSE(nt.tempered());
}

TEST(ParseDescriptor, RoundTrip) {
  Ctx S;
  for (const char* t : {"unram(exp(0.3),exp(-0.3))", "special(-1)", "ps(1,1,exp(1);1,1,exp(-1))",
                        "ps(2,1,1;2,5,1)", "one(2,1,i;-i)", "sc(4,w(1,1,1),7)", "sc(2,-1,3)",
                        "unram(tau=qpow(-7/64),tau=qpow(7/64))"}) {
    const auto r = parse_descriptor(S.X, t);
    const auto back = parse_descriptor(S.X, r.to_string());
    EXPECT_EQ(back.to_string(), r.to_string()) << t;
    EXPECT_EQ(back.kind, r.kind);
    EXPECT_EQ(back.level(), r.level());
  }
}

TEST(ParseDescriptor, PositionedErrors) {
  Ctx S;
  EXPECT_EQ(error_position(S.X, "foo(1)"), 0u);
  EXPECT_EQ(error_position(S.X, "special(2)"), 8u);
  EXPECT_EQ(error_position(S.X, "special(1"), 9u);
  EXPECT_EQ(error_position(S.X, "special(1)x"), 10u);
  // Index 3 is divisible by p, so it has level 1 rather than 2.
  EXPECT_EQ(error_position(S.X, "ps(2,3,1;2,1,1)"), 5u);
  EXPECT_EQ(error_position(S.X, "ps(0,0,1;1,1,1)"), 3u);
  EXPECT_EQ(error_position(S.X, "sc(1,w0,1)"), 3u);
  EXPECT_EQ(error_position(S.X, "sc(2,w(2,1,1),1)"), 0u);
  EXPECT_EQ(error_position(S.X, "sc(2,w0,-1)"), 8u);
  EXPECT_EQ(error_position(S.X, "ps(12,1,1;1,1,1)"), 3u);
}
