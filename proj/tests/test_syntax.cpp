#include <string>
#include <vector>

#include "doctest.h"
#include "linlam/parser.hpp"

using namespace linlam;

namespace {

TypeRef ty(const std::string& s) { return parse_type(s); }

void roundtrip_type(const std::string& s) {
  TypeRef t = parse_type(s);
  std::string p = print_type(t);
  CAPTURE(s);
  CAPTURE(p);
  CHECK(type_equal(parse_type(p), t));
}

// s must already be in printed form
void fixpoint_term(const std::string& s, const std::set<std::string>& consts = {}) {
  TermRef t = parse_term(s, consts);
  CAPTURE(s);
  CHECK_EQ(print_term(t), s);
  CHECK(term_equal(parse_term(print_term(t), consts), t));
}

void fixpoint_pterm(const std::string& s, const std::set<std::string>& consts = {}) {
  PTermRef t = parse_pterm(s, consts);
  CAPTURE(s);
  CHECK_EQ(print_pterm(t), s);
  CHECK(pterm_equal(parse_pterm(print_pterm(t), consts), t));
}

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("type printing settles precedence and spacing") {
  CHECK_EQ(print_type(ty("a -o b -o c")), "a -o b -o c");
  CHECK_EQ(print_type(ty("(a -o b) -o c")), "(a -o b) -o c");
  CHECK_EQ(print_type(ty("a * b * c")), "a * b * c");
  CHECK_EQ(print_type(ty("a * (b * c)")), "a * (b * c)");
  CHECK_EQ(print_type(ty("a * b -o c")), "a * b -o c");
  CHECK_EQ(print_type(ty("a -o b * c")), "a -o b * c");
  CHECK_EQ(print_type(ty("!^3 a")), "!!!a");
  CHECK_EQ(print_type(ty("! ! top")), "!!top");
  CHECK_EQ(print_type(ty("!(a -o b)")), "!(a -o b)");
  CHECK_EQ(print_type(ty("!a * !b")), "!a * !b");
  CHECK_EQ(print_type(ty("!(a * b) -o !top")), "!(a * b) -o !top");
}

TEST_CASE("type parsing round trips") {
  for (const char* s : {"a", "top", "!a", "!^4 top", "a -o b -o c", "(a -o b) -o c",
                        "a * (b * c) * d", "!(a * !b) -o !(!c -o top)", "!!!(a -o b) * top"}) {
    roundtrip_type(s);
  }
}

TEST_CASE("type equality is structural") {
  CHECK(type_equal(ty("!^2 a"), ty("!!a")));
  CHECK_EQ(ty("!^2 a")->hash, ty("!!a")->hash);
  CHECK_FALSE(type_equal(ty("a -o b"), ty("b -o a")));
  CHECK_FALSE(type_equal(ty("a * b"), ty("a -o b")));
  CHECK(type_equal(Type::bangN(ty("a"), 0), ty("a")));
}

TEST_CASE("stripping counts leading bangs") {
  StrippedType s = strip(ty("!!!(a * b)"));
  CHECK_EQ(s.bangs, 3);
  CHECK(type_equal(s.core, ty("a * b")));
  CHECK_EQ(leading_bangs(ty("a")), 0);
  CHECK_EQ(leading_bangs(ty("!(!a -o b)")), 1);
  CHECK(is_banged(ty("!top")));
  CHECK_FALSE(is_banged(ty("a * !b")));
  CHECK(type_equal(Type::bangN(ty("a"), 2), ty("!!a")));
}

TEST_CASE("lambdas bind locally nameless") {
  TermRef t = parse_term("lam x:a. x:a");
  REQUIRE_EQ(t->kind, TermKind::Lam);
  CHECK_EQ(t->n, 0);
  CHECK(type_equal(t->ann, ty("a")));
  REQUIRE_EQ(t->a->kind, TermKind::BoundVar);
  CHECK_EQ(t->a->n, 0);
  CHECK(type_equal(t->a->ann, ty("a")));

  CHECK_EQ(parse_term("lam^2 x:!a. x:!a")->n, 2);

  // hints are not part of the term
  CHECK(term_equal(parse_term("lam x:a. x:a"), parse_term("lam y:a. y:a")));
  CHECK_EQ(parse_term("lam x:a. x:a")->hash, parse_term("lam y:a. y:a")->hash);

  // unbound names stay free
  CHECK_EQ(parse_term("lam x:a. y:b")->a->kind, TermKind::FreeVar);
}

TEST_CASE("identifier occurrences resolve innermost first") {
  TermRef t = parse_term("lam x:a. lam x:b. x:b");
  CHECK_EQ(t->a->a->kind, TermKind::BoundVar);
  CHECK_EQ(t->a->a->n, 0);
  CHECK_EQ(print_term(t), "lam x:a. lam x_1:b. x_1:b");

  // constants only when declared, digits always
  CHECK_EQ(parse_term("c:a", {"c"})->kind, TermKind::ConstTerm);
  CHECK_EQ(parse_term("c:a")->kind, TermKind::FreeVar);
  CHECK_EQ(parse_term("0:bit")->kind, TermKind::ConstTerm);

  // a binder shadows a constant of the same name
  TermRef s = parse_term("lam c:a. c:a", {"c"});
  CHECK_EQ(s->a->kind, TermKind::BoundVar);
}

TEST_CASE("plain let is application of a lambda") {
  TermRef t = parse_term("let x:a = y:a in x:a");
  REQUIRE_EQ(t->kind, TermKind::App);
  REQUIRE_EQ(t->a->kind, TermKind::Lam);
  CHECK_EQ(t->b->kind, TermKind::FreeVar);
  auto pl = as_plain_let(t);
  REQUIRE(pl.has_value());
  CHECK_EQ(pl->hint, "x");
  CHECK(type_equal(pl->ann, ty("a")));
  CHECK_EQ(print_term(t), "let x:a = y:a in x:a");
}

TEST_CASE("star lambdas expand to unit elimination") {
  TermRef t = parse_term("lam *. y:b");
  REQUIRE_EQ(t->kind, TermKind::Lam);
  CHECK_EQ(t->n, 0);
  CHECK(type_equal(t->ann, ty("top")));
  REQUIRE_EQ(t->a->kind, TermKind::LetUnit);
  CHECK_EQ(t->a->a->kind, TermKind::BoundVar);
  CHECK_EQ(print_term(t), "lam *. y:b");

  TermRef u = parse_term("lam^1 *^2. y:b");
  CHECK_EQ(u->n, 1);
  CHECK(type_equal(u->ann, ty("!!top")));
  CHECK_EQ(print_term(u), "lam^1 *^2. y:b");

  // the binder stays addressable from under the unit elimination
  TermRef v = parse_term("lam x:a. lam *. x:a");
  const TermRef& occ = v->a->a->b;
  REQUIRE_EQ(occ->kind, TermKind::BoundVar);
  CHECK_EQ(occ->n, 1);
  CHECK_EQ(print_term(v), "lam x:a. lam *. x:a");

  // once the bound unit is used, the sugar does not apply
  CHECK_EQ(print_term(parse_term("lam x:top. let * = x:top in x:top")),
           "lam x:top. let * = x:top in x:top");
}

TEST_CASE("pair eliminations bind two names") {
  TermRef t = parse_term("let <x:a, y:b> = p:(a * b) in <y:b, x:a>");
  REQUIRE_EQ(t->kind, TermKind::LetPair);
  CHECK_EQ(t->n, 0);
  CHECK(type_equal(t->ann, ty("a")));
  CHECK(type_equal(t->ann2, ty("b")));
  REQUIRE_EQ(t->b->kind, TermKind::Pair);
  CHECK_EQ(t->b->a->n, 0);  // y is the right binder
  CHECK_EQ(t->b->b->n, 1);
  CHECK_EQ(print_term(t), "let <x:a, y:b> = p:(a * b) in <y:b, x:a>");
}

TEST_CASE("indexed terms print back to themselves") {
  for (const char* s :
       {"x:a", "unit", "unit^3", "lam x:a. x:a", "lam^2 x:!a. x:!a", "lam *. unit",
        "lam^1 *^2. unit", "f:(a -o b) x:a", "f:(a -o b -o c) x:a y:b",
        "x:(a -o a) (lam y:a. y:a)", "<x:a, y:b>", "<x:!a, y:!b>^1",
        "<<z:!!c, y:!!b>^2, x:!a>^1", "let x:a = y:a in x:a",
        "let x:a = let y:a = z:a in y:a in x:a",
        "(let f:a -o b = g:(a -o b) in f:(a -o b)) x:a",
        "let <x:a, y:b> = p:(a * b) in <y:b, x:a>", "let <x:a, y:b>^2 = p:!!(a * b) in unit",
        "let * = u:top in unit", "lam x:top. let * = x:top in x:top"}) {
    fixpoint_term(s);
  }
  fixpoint_term("if b:bit then 0:bit else 1:bit", {"0", "1"});
}

TEST_CASE("pure terms print back to themselves") {
  for (const char* s : {"x", "unit", "lam x. x", "lam *. y", "f x y", "f (g y)", "<x, y>",
                        "let x = y in x", "let x = lam y. y in x",
                        "let <x, y> = p in <y, x>", "let * = u in unit",
                        "lam x. lam x_1. x_1"}) {
    fixpoint_pterm(s);
  }
  fixpoint_pterm("if b then 0 else 1", {"0", "1"});
}

TEST_CASE("pure application of a lambda reads as a let") {
  CHECK(pterm_equal(parse_pterm("(lam x. x) y"), parse_pterm("let x = y in x")));
  CHECK_EQ(print_pterm(parse_pterm("(lam x. x) y")), "let x = y in x");
}

TEST_CASE("classification separates values from computations") {
  CHECK_EQ(classify(parse_term("x:a")), Classification::CoreValue);
  CHECK_EQ(classify(parse_term("lam x:a. x:a")), Classification::CoreValue);
  CHECK(is_value(parse_term("unit^2")));
  CHECK(is_value(parse_term("<x:a, lam y:b. y:b>")));
  CHECK(is_value(parse_term("let <x:a, y:b> = p:(a * b) in <x:a, y:b>")));
  CHECK(is_value(parse_term("let * = u:top in unit")));
  CHECK_FALSE(is_value(parse_term("f:(a -o b) x:a")));
  CHECK_FALSE(is_value(parse_term("<x:a, f:(a -o b) y:a>")));
  CHECK_FALSE(is_value(parse_term("let <x:a, y:b> = p:(a * b) in f:(a -o b) x:a")));
  CHECK_FALSE(is_value(parse_term("if b:bit then unit else unit")));
  CHECK_FALSE(is_value(parse_term("let x:a = y:a in x:a")));

  CHECK(is_value(parse_pterm("<x, lam y. y>")));
  CHECK_FALSE(is_value(parse_pterm("f x")));
}

TEST_CASE("free occurrences are listed in order with their annotations") {
  TermRef t = parse_term("<f:(a -o b) x:a, f:(a -o c) y:c>");
  auto fv = free_vars(t);
  REQUIRE_EQ(fv.size(), 3);
  CHECK_EQ(fv[0].name, "f");
  CHECK_EQ(fv[1].name, "x");
  CHECK_EQ(fv[2].name, "y");
  REQUIRE_EQ(fv[0].anns.size(), 2);
  CHECK(type_equal(fv[0].anns[0], ty("a -o b")));
  CHECK(type_equal(fv[0].anns[1], ty("a -o c")));
  CHECK(occurs_free(t, "x"));
  CHECK_FALSE(occurs_free(t, "z"));
  CHECK_FALSE(occurs_free(parse_term("lam x:a. x:a"), "x"));

  auto pv = free_vars(parse_pterm("<f x, g y>"));
  REQUIRE_EQ(pv.size(), 4);
  CHECK_EQ(pv[0], "f");
  CHECK_EQ(pv[3], "y");
}

TEST_CASE("opening and closing are inverse") {
  TermRef t = parse_term("lam x:a. <x:a, y:b>");
  TermRef opened = open_term(t->a, {"z"});
  CHECK(occurs_free(opened, "z"));
  CHECK(term_equal(opened, parse_term("<z:a, y:b>")));
  CHECK(term_equal(close_term(opened, {"z"}), t->a));

  TermRef lp = parse_term("let <x:a, y:b> = p:(a * b) in <y:b, x:a>");
  TermRef body = open_term(lp->b, {"l", "r"});
  CHECK(term_equal(body, parse_term("<r:b, l:a>")));
  CHECK(term_equal(close_term(body, {"l", "r"}), lp->b));
}

TEST_CASE("substitution follows occurrence annotations") {
  TermRef t = parse_term("<x:a, x:!a>");
  TermRef r = subst_free(t, "x", [](const TypeRef& ann) { return Term::free_var("y", ann); });
  CHECK(term_equal(r, parse_term("<y:a, y:!a>")));
  // no capture: the replacement lands under the binder untouched
  TermRef u = parse_term("lam w:a. x:b");
  TermRef s = subst_free(u, "x", [](const TypeRef& ann) { return Term::free_var("w", ann); });
  CHECK_EQ(print_term(s), "lam w_1:a. w:b");
}

TEST_CASE("erasure drops indices and annotations but keeps hints") {
  TermRef t = parse_term("lam^1 x:!a. <x:!a, unit^2>^1");
  PTermRef p = erase(t);
  CHECK(pterm_equal(p, parse_pterm("lam x. <x, unit>")));
  CHECK_EQ(print_pterm(p), "lam x. <x, unit>");
  CHECK_EQ(print_pterm(erase(parse_term("let q:a = y:a in q:a"))), "let q = y in q");
  CHECK_EQ(print_pterm(erase(parse_term("lam *. y:b"))), "lam *. y");
}

TEST_CASE("judgments carry context and optional stated type") {
  auto j = parse_judgment("x : !a, y : b |- <x:a, y:b> : a * b");
  REQUIRE_EQ(j.ctx.size(), 2);
  CHECK_EQ(j.ctx[0].first, "x");
  CHECK(type_equal(j.ctx[0].second, ty("!a")));
  CHECK_EQ(j.term->kind, TermKind::Pair);
  CHECK(type_equal(j.goal, ty("a * b")));

  CHECK_EQ(parse_judgment("x:a |- x:a").goal, nullptr);
  CHECK(parse_judgment("|- unit : top").ctx.empty());
  CHECK(parse_judgment("unit").ctx.empty());

  auto pj = parse_pjudgment("f : !(a -o b), y : !a |- f y : b");
  REQUIRE_EQ(pj.ctx.size(), 2);
  CHECK_EQ(pj.term->kind, TermKind::App);
  CHECK(type_equal(pj.goal, ty("b")));
}

TEST_CASE("comments run to end of line") {
  auto j = parse_judgment("x:a |- x:a -- the identity occurrence\n: a");
  CHECK(type_equal(j.goal, ty("a")));
  CHECK(type_equal(parse_type("-- note\n a -o b -- more\n"), ty("a -o b")));
}

TEST_CASE("malformed input is rejected with a position") {
  CHECK_THROWS_AS(parse_type("a -o"), ParseError);
  CHECK_THROWS_AS(parse_type("a - b"), ParseError);
  CHECK_THROWS_AS(parse_type("a | b"), ParseError);
  CHECK_THROWS_AS(parse_term("x:a -o b"), ParseError);
  CHECK_THROWS_AS(parse_term("x"), ParseError);  // occurrences need annotations
  CHECK_THROWS_AS(parse_term("lam x:a."), ParseError);
  CHECK_THROWS_AS(parse_term("<x:a, y:b"), ParseError);
  CHECK_THROWS_AS(parse_judgment("x:a, x:b |- x:a"), ParseError);
  CHECK_THROWS_AS(parse_pterm("let <x, y> = p"), ParseError);

  try {
    parse_term("x:a\n@");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_EQ(e.line, 2);
    CHECK_EQ(e.col, 1);
  }
}

TEST_CASE("printer avoids capturing free names") {
  // the binder hint collides with a free variable and is renamed
  TermRef t = Term::lam(0, "y", ty("a"), Term::pair(0, Term::bound_var(0, ty("a")),
                                                    Term::free_var("y", ty("b"))));
  CHECK_EQ(print_term(t), "lam y_1:a. <y_1:a, y:b>");
  CHECK(term_equal(parse_term(print_term(t)), t));
}

}  // TEST_SUITE
