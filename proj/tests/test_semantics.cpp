#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "linlam/finmodel.hpp"
#include "linlam/parser.hpp"
#include "linlam/semantics.hpp"

using namespace linlam;

namespace {

Signature sig_base() {
  Signature s;
  s["c"] = parse_type("!a");
  s["d"] = parse_type("!b");
  s["k"] = parse_type("!(a -o a)");
  return s;
}

std::set<std::string> const_names(const Signature& sig) {
  std::set<std::string> out;
  for (const auto& [name, ty] : sig) out.insert(name);
  return out;
}

Context to_ctx(const std::vector<ContextEntry>& xs) {
  Context c;
  for (const auto& [name, ty] : xs) c.items.push_back({name, ty});
  return c;
}

// one model/theta pair shared by a test case
struct Den {
  fin::Model m;
  FinTheta theta;
  Signature sig = sig_base();

  DerivRef derive(const std::string& src, SplitPolicy pol = SplitPolicy::CopyAll) {
    ParsedJudgment j = parse_judgment(src, const_names(sig));
    Context c = to_ctx(j.ctx);
    TypingResult r = j.goal ? check(sig, c, j.term, j.goal, pol) : synth(sig, c, j.term, pol);
    REQUIRE_MESSAGE(r, "does not type: " << src);
    return r.deriv;
  }
  fin::Mor comp(const std::string& src, SplitPolicy pol = SplitPolicy::CopyAll) {
    return interpret_comp(m, theta, sig, derive(src, pol));
  }
  fin::Mor val(const std::string& src, SplitPolicy pol = SplitPolicy::CopyAll) {
    return interpret_value(m, theta, sig, derive(src, pol));
  }
  fin::ObjRef den(const std::string& ty) { return denote_type(m, theta, parse_type(ty)); }
};

} // namespace

TEST_SUITE("semantics") {

TEST_CASE("distribution equality merges repeated support") {
  auto b2 = fin::Obj::base(2);
  auto x = fin::El::pt(0);
  auto y = fin::El::pt(1);
  auto twice = fin::El::distribution({{mpq_class(1, 2), x}, {mpq_class(1, 2), x}});
  CHECK(fin::el_equal(fin::Obj::dist(b2), twice, fin::El::point_mass(x)));
  CHECK_FALSE(fin::el_equal(fin::Obj::dist(b2), twice, fin::El::point_mass(y)));
}

TEST_CASE("join flattens with exact weights") {
  fin::Model m;
  auto b2 = fin::Obj::base(2);
  auto inner = fin::El::distribution(
      {{mpq_class(1, 2), fin::El::pt(0)}, {mpq_class(1, 2), fin::El::pt(1)}});
  auto outer = fin::El::distribution(
      {{mpq_class(1, 3), fin::El::point_mass(fin::El::pt(0))}, {mpq_class(2, 3), inner}});
  auto flat = m.mu(b2).f(outer);
  auto want = fin::El::distribution(
      {{mpq_class(2, 3), fin::El::pt(0)}, {mpq_class(1, 3), fin::El::pt(1)}});
  CHECK(fin::el_equal(fin::Obj::dist(b2), flat, want));
}

TEST_CASE("a variable denotes a projection") {
  Den dn;
  auto a = dn.den("a");
  CHECK(dn.m.mor_eq(dn.val("x:a |- x:a : a"), dn.m.id(a)));
  auto b = dn.den("b");
  fin::Mor dropFirst = dn.m.compose(dn.m.tensor_mor(dn.m.drop(b), dn.m.id(a)), dn.m.lunit(a));
  CHECK(dn.m.mor_eq(dn.val("w:!b, x:a |- x:a : a"), dropFirst));
}

TEST_CASE("a lambda curries its body") {
  Den dn;
  auto a = dn.den("a");
  fin::Mor manual = dn.m.Phi_inv(dn.m.compose(dn.m.lunit(a), dn.m.eta(a)));
  CHECK(dn.m.mor_eq(dn.val("|- lam^0 x:a. x:a : a -o a"), manual));
}

TEST_CASE("application runs both sides then applies") {
  Den dn;
  auto a = dn.den("a");
  auto fo = dn.m.lolli_obj(a, a);
  fin::Mor manual = dn.m.compose(
      dn.m.compose(dn.m.tensor_mor(dn.m.eta(fo), dn.m.eta(a)), Psi1(dn.m, fo, a)),
      kstar(dn.m, dn.m.app_map(a, a), a));
  CHECK(dn.m.mor_eq(dn.comp("f : a -o a, x : a |- (f:(a -o a)) (x:a) : a"), manual));
}

TEST_CASE("pair elimination at a banged index swaps through the splitting") {
  Den dn;
  auto a = dn.den("a");
  fin::Mor got = dn.comp(
      "p : !(a * a) |- let <u:a, v:a>^1 = p:!(a * a) in <v:!a, u:!a>^1 : !(a * a)");
  fin::Mor manual = dn.m.compose(dn.m.swap_(a, a), dn.m.eta(dn.m.tensor_obj(a, a)));
  CHECK(dn.m.mor_eq(got, manual));
}

TEST_CASE("reduced and unreduced programs denote the same map") {
  Den dn;
  struct Row {
    const char* lhs;
    const char* rhs;
  };
  std::vector<Row> rows = {
      {"|- (lam^0 x:a. x:a) c:a : a", "|- c:a : a"},
      {"x:a |- let * = unit in x:a : a", "x:a |- x:a : a"},
      {"x:a, y:b |- let <u:a, v:b>^0 = <x:a, y:b>^0 in <v:b, u:a>^0 : b * a",
       "x:a, y:b |- <y:b, x:a>^0 : b * a"},
      {"|- let <u:a, v:a>^1 = <c:!a, c:!a>^1 in <u:!a, v:!a>^1 : !(a * a)",
       "|- <c:!a, c:!a>^1 : !(a * a)"},
      {"x:a, y:b |- let u:a = x:a in (let v:b = y:b in <u:a, v:b>^0) : a * b",
       "x:a, y:b |- let v:b = y:b in (let u:a = x:a in <u:a, v:b>^0) : a * b"},
      {"|- let f : !(a -o a) = lam^1 x:a. x:a in (f:(a -o a)) (c:a) : a",
       "|- (lam^0 x:a. x:a) (c:a) : a"},
  };
  for (const auto& row : rows) {
    CAPTURE(row.lhs);
    CAPTURE(row.rhs);
    CHECK(dn.m.mor_eq(dn.comp(row.lhs), dn.comp(row.rhs)));
  }
}

TEST_CASE("unused banged entries denote the same wherever they are routed") {
  Den dn;
  std::vector<std::string> srcs = {
      "w:!b |- <c:a, c:a>^0 : a * a",
      "w:!b, z:!a |- (k:(a -o a)) (z:a) : a",
      "w:!b, z:!a |- <z:a, z:a>^0 : a * a",
  };
  for (const auto& src : srcs) {
    CAPTURE(src);
    fin::Mor all = dn.comp(src, SplitPolicy::CopyAll);
    fin::Mor left = dn.comp(src, SplitPolicy::DummiesLeft);
    fin::Mor right = dn.comp(src, SplitPolicy::DummiesRight);
    CHECK(dn.m.mor_eq(all, left));
    CHECK(dn.m.mor_eq(all, right));
  }
}

TEST_CASE("substituting a value then interpreting matches composing") {
  Den dn;
  DerivRef dV = dn.derive("|- c:a : a");
  DerivRef dM = dn.derive("x:a |- <x:a, unit>^0 : a * top");
  TypingResult sub = substitute_derivation(dn.sig, dV, "x", dM);
  REQUIRE(sub);
  fin::Mor direct = interpret_comp(dn.m, dn.theta, dn.sig, sub.deriv);
  fin::Mor composite = dn.m.compose(interpret_value(dn.m, dn.theta, dn.sig, dV),
                                    interpret_comp(dn.m, dn.theta, dn.sig, dM));
  CHECK(dn.m.mor_eq(direct, composite));
}

TEST_CASE("recasting a derivation composes with the coercion") {
  Den dn;
  DerivRef d = dn.derive("x:!a |- <x:a, unit>^0 : a * top");
  Context wider;
  wider.items.push_back({"x", parse_type("!!a")});
  std::string why;
  DerivRef cast = cast_derivation(dn.sig, d, wider, d->type, &why);
  REQUIRE_MESSAGE(cast, why);
  auto den = type_denoter(dn.m, dn.theta);
  fin::Mor coer = canonical_coercion(dn.m, den, parse_type("!!a"), parse_type("!a"));
  fin::Mor lhs = interpret_comp(dn.m, dn.theta, dn.sig, cast);
  fin::Mor rhs = dn.m.compose(coer, interpret_comp(dn.m, dn.theta, dn.sig, d));
  CHECK(dn.m.mor_eq(lhs, rhs));
}

TEST_CASE("conditionals are rejected by the interpreter") {
  Den dn;
  Signature s = dn.sig;
  s["0"] = parse_type("!bit");
  s["1"] = parse_type("!bit");
  ParsedJudgment j = parse_judgment("|- if 0:bit then 1:bit else 0:bit : bit", const_names(s));
  TypingResult r = check(s, to_ctx(j.ctx), j.term, j.goal);
  REQUIRE(r);
  CHECK_THROWS_AS(interpret_comp(dn.m, dn.theta, s, r.deriv), std::logic_error);
}

} // TEST_SUITE
