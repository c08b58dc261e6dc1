#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "linlam/parser.hpp"
#include "linlam/typing.hpp"

using namespace linlam;

namespace {

TypeRef ty(const std::string& s) { return parse_type(s); }

Signature sig_basic() {
  return {{"c", ty("!a")}, {"0", ty("!bit")}, {"1", ty("!bit")}};
}

std::set<std::string> const_names(const Signature& sig) {
  std::set<std::string> out;
  for (const auto& [k, v] : sig) {
    (void)v;
    out.insert(k);
  }
  return out;
}

Context to_ctx(const std::vector<ContextEntry>& xs) {
  Context c;
  for (const auto& [n, t] : xs) c.items.push_back({n, t});
  return c;
}

TypingResult judge(const Signature& sig, const std::string& src,
                   SplitPolicy policy = SplitPolicy::CopyAll) {
  ParsedJudgment j = parse_judgment(src, const_names(sig));
  Context c = to_ctx(j.ctx);
  if (j.goal) return check(sig, c, j.term, j.goal, policy);
  return synth(sig, c, j.term, policy);
}

// derives under every split policy, demands agreement, replays each
DerivRef ok(const Signature& sig, const std::string& src) {
  CAPTURE(src);
  DerivRef first;
  for (SplitPolicy p : {SplitPolicy::CopyAll, SplitPolicy::DummiesLeft, SplitPolicy::DummiesRight}) {
    TypingResult r = judge(sig, src, p);
    REQUIRE_MESSAGE(r, (r.error ? r.error->message : "no derivation"));
    std::string why;
    REQUIRE_MESSAGE(replay(sig, r.deriv, &why), why);
    if (!first) {
      first = r.deriv;
    } else {
      CHECK(term_equal(first->term, r.deriv->term));
      CHECK(type_equal(first->type, r.deriv->type));
    }
  }
  return first;
}

void expect_err(const Signature& sig, const std::string& src, TypeErrorKind kind) {
  CAPTURE(src);
  TypingResult r = judge(sig, src);
  REQUIRE_FALSE(r);
  REQUIRE(r.error.has_value());
  CHECK_EQ(std::string(type_error_kind_name(r.error->kind)),
           std::string(type_error_kind_name(kind)));
}

std::vector<std::string> ctx_names(const Context& c) {
  std::vector<std::string> out;
  for (const auto& b : c.items) out.push_back(b.name);
  return out;
}

}  // namespace

TEST_SUITE("typing") {

TEST_CASE("variable occurrences may widen their declared type") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "x:a |- x:a : a");
  CHECK_EQ(d->rule, "var");
  REQUIRE(d->coercion);
  CHECK_EQ(d->coercion->rule, "base");

  ok(sig, "x:!!a |- x:a : a");
  ok(sig, "x:!a |- x:!!!a : !!!a");
  expect_err(sig, "x:a |- x:!a : !a", TypeErrorKind::SubtypeFailure);
  expect_err(sig, "|- x:a : a", TypeErrorKind::UnboundVariable);
  expect_err(sig, "x:a, y:b |- x:a : a", TypeErrorKind::LinearVariableDropped);
  ok(sig, "x:a, y:!b |- x:a : a");
}

TEST_CASE("constants come from the signature") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "|- c:a : a");
  CHECK_EQ(d->rule, "const");
  REQUIRE(d->coercion);
  ok(sig, "|- c:!a : !a");
  ok(sig, "|- 0:bit : bit");
  expect_err(sig, "|- c:b : b", TypeErrorKind::SubtypeFailure);

  Signature missing;
  ParsedJudgment j = parse_judgment("|- d:a : a", {"d"});
  TypingResult r = check(missing, to_ctx(j.ctx), j.term, j.goal);
  REQUIRE_FALSE(r);
  CHECK_EQ(r.error->kind, TypeErrorKind::UnknownConstant);

  CHECK(signature_ok(sig));
  CHECK_FALSE(signature_ok({{"c", ty("a")}}));
}

TEST_CASE("the unit value carries its own index") {
  Signature sig = sig_basic();
  CHECK_EQ(ok(sig, "|- unit : top")->rule, "unit");
  ok(sig, "|- unit^3 : !!!top");
  ok(sig, "x:!a |- unit : top");
  expect_err(sig, "x:a |- unit : top", TypeErrorKind::LinearVariableDropped);
}

TEST_CASE("plain lambdas keep index zero") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "|- lam x:a. x:a : a -o a");
  CHECK_EQ(d->rule, "lam");
  REQUIRE_EQ(d->premises.size(), 1);
  CHECK_EQ(d->premises[0]->rule, "var");
  CHECK_EQ(d->premises[0]->ctx.items.back().name, "x");
  CHECK_EQ(print_derivation(d),
           "[lam] |- lam x:a. x:a : a -o a\n"
           "  [var] x : a |- x:a : a\n");
}

TEST_CASE("banged lambdas need fully banged contexts") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "|- lam^2 x:a. x:a : !!(a -o a)");
  CHECK_EQ(d->rule, "lam-bang");
  ok(sig, "y:!b |- lam^1 x:a. <x:a, y:b> : !(a -o a * b)");
  expect_err(sig, "y:b |- lam^1 x:a. <x:a, y:b> : !(a -o a * b)",
             TypeErrorKind::NonBangedContext);
}

TEST_CASE("binder hints that clash with the context are freshened") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "x:!a |- lam x:b. x:b : b -o b");
  CHECK_EQ(d->premises[0]->ctx.items.back().name, "x_1");
}

TEST_CASE("application splits the context by use") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "f:(a -o b), x:a |- f:(a -o b) x:a : b");
  CHECK_EQ(d->rule, "app");
  REQUIRE_EQ(d->premises.size(), 2);
  CHECK_EQ(ctx_names(d->premises[0]->ctx), std::vector<std::string>{"f"});
  CHECK_EQ(ctx_names(d->premises[1]->ctx), std::vector<std::string>{"x"});

  expect_err(sig, "g:(a -o a -o b), x:a |- g:(a -o a -o b) x:a x:a : b",
             TypeErrorKind::LinearVariableReused);
  expect_err(sig, "f:(a -o b), x:a, z:c |- f:(a -o b) x:a : b",
             TypeErrorKind::LinearVariableDropped);
  expect_err(sig, "f:(!a -o b), x:a |- f:(!a -o b) x:a : b", TypeErrorKind::ShapeMismatch);
  expect_err(sig, "p:(a * b), y:a |- p:(a * b) y:a : c", TypeErrorKind::ShapeMismatch);
}

TEST_CASE("a banged function may share its banged argument") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "f:!(a -o a -o b), y:!a |- f:(a -o a -o b) y:a y:a : b");
  CHECK_EQ(d->rule, "app");
  CHECK(type_equal(d->type, ty("b")));
}

TEST_CASE("dummy routing is the only split freedom") {
  Signature sig = sig_basic();
  const std::string src = "f:!(a -o b), y:!a, z:!c |- f:(a -o b) y:a : b";

  TypingResult all = judge(sig, src, SplitPolicy::CopyAll);
  REQUIRE(all);
  CHECK_EQ(ctx_names(all.deriv->premises[0]->ctx), std::vector<std::string>({"f", "y", "z"}));
  CHECK_EQ(ctx_names(all.deriv->premises[1]->ctx), std::vector<std::string>({"f", "y", "z"}));

  TypingResult left = judge(sig, src, SplitPolicy::DummiesLeft);
  REQUIRE(left);
  CHECK_EQ(ctx_names(left.deriv->premises[0]->ctx), std::vector<std::string>({"f", "z"}));
  CHECK_EQ(ctx_names(left.deriv->premises[1]->ctx), std::vector<std::string>({"y"}));

  TypingResult right = judge(sig, src, SplitPolicy::DummiesRight);
  REQUIRE(right);
  CHECK_EQ(ctx_names(right.deriv->premises[0]->ctx), std::vector<std::string>({"f"}));
  CHECK_EQ(ctx_names(right.deriv->premises[1]->ctx), std::vector<std::string>({"y", "z"}));
}

TEST_CASE("pair indices peel component bangs") {
  Signature sig = sig_basic();
  CHECK_EQ(ok(sig, "x:a, y:b |- <x:a, y:b> : a * b")->rule, "pair");
  ok(sig, "x:!a, y:!b |- <x:!a, y:!b>^1 : !(a * b)");
  ok(sig, "x:!!!a, y:!!b |- <x:!!!a, y:!!b>^2 : !!(!a * b)");
  expect_err(sig, "x:a, y:!b |- <x:a, y:!b>^1 : !(a * b)", TypeErrorKind::ShapeMismatch);
}

TEST_CASE("pair elimination requires the exact subject index") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "p:(a * b) |- let <x:a, y:b> = p:(a * b) in <y:b, x:a> : b * a");
  CHECK_EQ(d->rule, "pair-elim");
  // the binders enter the body context at the eliminated index
  DerivRef swap = ok(sig, "p:!(a * b) |- let <x:a, y:b>^1 = p:!(a * b) in <y:!b, x:!a>^1 : !(b * a)");
  REQUIRE_EQ(swap->premises.size(), 2);
  const Context& inner = swap->premises[1]->ctx;
  REQUIRE_EQ(inner.items.size(), 3);
  CHECK(type_equal(inner.items[1].type, ty("!a")));
  CHECK(type_equal(inner.items[2].type, ty("!b")));

  expect_err(sig, "p:!(a * b) |- let <x:a, y:b> = p:!(a * b) in <x:a, y:b> : a * b",
             TypeErrorKind::ShapeMismatch);
  expect_err(sig, "p:!(a * b) |- let <x:b, y:a>^1 = p:!(a * b) in <y:!a, x:!b>^1 : !(a * b)",
             TypeErrorKind::AnnotationMismatch);
  expect_err(sig, "p:(a * b) |- let <x:a, y:b> = p:(a * b) in x:a : a",
             TypeErrorKind::LinearVariableDropped);
}

TEST_CASE("unit elimination takes a unit typed subject") {
  Signature sig = sig_basic();
  CHECK_EQ(ok(sig, "u:top, x:a |- let * = u:top in x:a : a")->rule, "unit-elim");
  ok(sig, "u:!top |- let * = u:top in unit : top");
  expect_err(sig, "u:!top |- let * = u:!top in unit : top", TypeErrorKind::ShapeMismatch);
}

TEST_CASE("conditionals type both branches in one context") {
  Signature sig = sig_basic();
  CHECK_EQ(ok(sig, "b:bit, x:!a |- if b:bit then x:a else x:a : a")->rule, "if");
  // a linear variable may be consumed once in each branch
  ok(sig, "b:bit, x:a |- if b:bit then x:a else x:a : a");
  ok(sig, "b:bit |- if b:bit then 0:bit else 1:bit : bit");
  expect_err(sig, "b:bit, x:!a |- if b:bit then x:a else x:!a : a", TypeErrorKind::ShapeMismatch);
  expect_err(sig, "x:a |- if x:a then unit else unit : top", TypeErrorKind::ShapeMismatch);
}

TEST_CASE("stated types are matched exactly") {
  Signature sig = sig_basic();
  expect_err(sig, "x:a |- x:a : b", TypeErrorKind::AnnotationMismatch);
  expect_err(sig, "x:!a |- x:a : !a", TypeErrorKind::AnnotationMismatch);
}

TEST_CASE("replay rejects tampered derivations") {
  Signature sig = sig_basic();

  DerivRef d = ok(sig, "x:a |- x:a : a");
  auto badType = std::make_shared<Derivation>(*d);
  badType->type = ty("b");
  CHECK_FALSE(replay(sig, badType));

  auto noCoercion = std::make_shared<Derivation>(*d);
  noCoercion->coercion = nullptr;
  CHECK_FALSE(replay(sig, noCoercion));

  DerivRef app = ok(sig, "f:(a -o b), x:a |- f:(a -o b) x:a : b");
  auto swapped = std::make_shared<Derivation>(*app);
  std::swap(swapped->premises[0], swapped->premises[1]);
  CHECK_FALSE(replay(sig, swapped));

  auto renamedArg = std::make_shared<Derivation>(*app);
  auto arg = std::make_shared<Derivation>(*app->premises[1]);
  arg->term = Term::free_var("w", ty("a"));
  renamedArg->premises[1] = arg;
  CHECK_FALSE(replay(sig, renamedArg));

  // a linear variable pushed into both premises
  auto vp = std::make_shared<Derivation>();
  vp->rule = "var";
  vp->ctx = Context({{"x", ty("a")}});
  vp->term = Term::free_var("x", ty("a"));
  vp->type = ty("a");
  vp->coercion = derive_subtype(ty("a"), ty("a"));
  auto badPair = std::make_shared<Derivation>();
  badPair->rule = "pair";
  badPair->ctx = vp->ctx;
  badPair->term = Term::pair(0, vp->term, vp->term);
  badPair->type = ty("a * a");
  badPair->premises = {vp, vp};
  std::string why;
  CHECK_FALSE(replay(sig, badPair, &why));
  CHECK_FALSE(why.empty());

  // premise context order must follow the conclusion context
  DerivRef pair = ok(sig, "x:!a, y:!b |- <x:a, y:b> : a * b");
  auto reordered = std::make_shared<Derivation>(*pair);
  auto left = std::make_shared<Derivation>(*pair->premises[0]);
  std::swap(left->ctx.items[0], left->ctx.items[1]);
  reordered->premises[0] = left;
  CHECK_FALSE(replay(sig, reordered));
}

TEST_CASE("casting narrows the context without touching the term") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "x:!a |- x:a : a");
  Context narrower = Context({{"x", ty("!!a")}});
  std::string why;
  DerivRef c = cast_derivation(sig, d, narrower, d->type, &why);
  REQUIRE_MESSAGE(c, why);
  CHECK(term_equal(c->term, d->term));
  CHECK(context_equal(c->ctx, narrower));
  CHECK(replay(sig, c));
}

TEST_CASE("casting widens the result through the leaves") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "|- lam x:!a. x:!a : !a -o !a");
  std::string why;
  DerivRef c = cast_derivation(sig, d, d->ctx, ty("!a -o a"), &why);
  REQUIRE_MESSAGE(c, why);
  CHECK_EQ(print_term(c->term), "lam x:!a. x:a");
  CHECK(type_equal(c->type, ty("!a -o a")));
  CHECK(replay(sig, c));

  // indices follow the target type
  DerivRef u = ok(sig, "|- unit^2 : !!top");
  CHECK_EQ(print_term(cast_derivation(sig, u, u->ctx, ty("!top"))->term), "unit^1");
  CHECK_EQ(print_term(cast_derivation(sig, u, u->ctx, ty("!^4 top"))->term), "unit^4");
  CHECK_EQ(print_term(cast_derivation(sig, u, u->ctx, ty("top"))->term), "unit");

  DerivRef l = ok(sig, "|- lam^1 x:a. x:a : !(a -o a)");
  DerivRef lc = cast_derivation(sig, l, l->ctx, ty("a -o a"));
  REQUIRE(lc);
  CHECK_EQ(lc->rule, "lam");
  CHECK_EQ(lc->term->n, 0);

  DerivRef p = ok(sig, "x:!a, y:!b |- <x:!a, y:!b>^1 : !(a * b)");
  DerivRef pc = cast_derivation(sig, p, p->ctx, ty("a * b"));
  REQUIRE(pc);
  CHECK_EQ(print_term(pc->term), "<x:a, y:b>");
  CHECK(replay(sig, pc));
}

TEST_CASE("casting to the same type changes nothing") {
  Signature sig = sig_basic();
  for (const char* src : {"x:!a |- x:a : a", "|- lam x:a. x:a : a -o a",
                          "p:!(a * b) |- let <x:a, y:b>^1 = p:!(a * b) in <y:!b, x:!a>^1 : !(b * a)",
                          "f:!(a -o a -o b), y:!a |- f:(a -o a -o b) y:a y:a : b"}) {
    DerivRef d = ok(sig, src);
    DerivRef c = cast_derivation(sig, d, d->ctx, d->type);
    REQUIRE(c);
    CHECK(term_equal(c->term, d->term));
    CHECK(type_equal(c->type, d->type));
  }
}

TEST_CASE("casting refuses non subtype targets") {
  Signature sig = sig_basic();
  DerivRef d = ok(sig, "x:!a |- x:a : a");
  std::string why;
  CHECK_EQ(cast_derivation(sig, d, d->ctx, ty("!a"), &why), nullptr);
  CHECK_FALSE(why.empty());
  Context wider = Context({{"x", ty("a")}});  // a is not below !a
  CHECK_EQ(cast_derivation(sig, d, wider, d->type), nullptr);
}

TEST_CASE("promotion adds one bang to a value over a banged context") {
  Signature sig = sig_basic();

  DerivRef u = ok(sig, "|- unit : top");
  DerivRef pu = promote_derivation(sig, u);
  REQUIRE(pu);
  CHECK(type_equal(pu->type, ty("!top")));
  CHECK_EQ(print_term(pu->term), "unit^1");
  CHECK(replay(sig, pu));

  DerivRef v = ok(sig, "x:!a |- x:a : a");
  DerivRef pv = promote_derivation(sig, v);
  REQUIRE(pv);
  CHECK(type_equal(pv->type, ty("!a")));
  CHECK(type_equal(pv->term->ann, ty("!a")));

  DerivRef l = ok(sig, "|- lam x:a. x:a : a -o a");
  DerivRef pl = promote_derivation(sig, l);
  REQUIRE(pl);
  CHECK_EQ(pl->rule, "lam-bang");
  CHECK(type_equal(pl->type, ty("!(a -o a)")));
  CHECK_EQ(print_term(pl->term), "lam^1 x:a. x:a");
  CHECK(replay(sig, pl));

  DerivRef pr = ok(sig, "x:!a, y:!b |- <x:a, y:b> : a * b");
  DerivRef ppr = promote_derivation(sig, pr);
  REQUIRE(ppr);
  CHECK(type_equal(ppr->type, ty("!(a * b)")));
  CHECK_EQ(print_term(ppr->term), "<x:!a, y:!b>^1");
  CHECK(replay(sig, ppr));

  DerivRef lp = ok(sig, "p:!(a * b) |- let <x:a, y:b> = p:(a * b) in <x:a, y:b> : a * b");
  DerivRef plp = promote_derivation(sig, lp);
  REQUIRE(plp);
  CHECK(type_equal(plp->type, ty("!(a * b)")));
  CHECK_EQ(print_term(plp->term), "let <x:a, y:b>^1 = p:!(a * b) in <x:!a, y:!b>^1");
  CHECK(replay(sig, plp));

  DerivRef lu = ok(sig, "u:!top |- let * = u:top in unit : top");
  DerivRef plu = promote_derivation(sig, lu);
  REQUIRE(plu);
  CHECK(type_equal(plu->type, ty("!top")));
  CHECK_EQ(print_term(plu->term), "let * = u:top in unit^1");
  CHECK(replay(sig, plu));
}

TEST_CASE("promotion rejects computations and linear contexts") {
  Signature sig = sig_basic();
  DerivRef app = ok(sig, "f:!(a -o b), x:!a |- f:(a -o b) x:a : b");
  std::string why;
  CHECK_EQ(promote_derivation(sig, app, &why), nullptr);
  CHECK_FALSE(why.empty());

  DerivRef lin = ok(sig, "x:a |- x:a : a");
  CHECK_EQ(promote_derivation(sig, lin), nullptr);
}

TEST_CASE("substitution splices the value context at the variable") {
  Signature sig = sig_basic();
  DerivRef dV = ok(sig, "y:!a |- y:!a : !a");
  DerivRef dM = ok(sig, "x:!a, z:b |- <x:a, z:b> : a * b");
  TypingResult r = substitute_derivation(sig, dV, "x", dM);
  REQUIRE(r);
  CHECK_EQ(ctx_names(r.deriv->ctx), std::vector<std::string>({"y", "z"}));
  CHECK(type_equal(r.deriv->ctx.items[0].type, ty("!a")));
  CHECK_EQ(print_term(r.deriv->term), "<y:a, z:b>");
  CHECK(type_equal(r.deriv->type, ty("a * b")));
  CHECK(replay(sig, r.deriv));
}

TEST_CASE("substitution casts each occurrence to its annotation") {
  Signature sig = sig_basic();
  DerivRef dV = ok(sig, "y:!a |- y:!a : !a");
  DerivRef dM = ok(sig, "x:!a |- <x:a, x:!a> : a * !a");
  TypingResult r = substitute_derivation(sig, dV, "x", dM);
  REQUIRE(r);
  CHECK_EQ(print_term(r.deriv->term), "<y:a, y:!a>");
  CHECK(replay(sig, r.deriv));
}

TEST_CASE("substitution renames clashing value context entries") {
  Signature sig = sig_basic();
  DerivRef dV = ok(sig, "z:!a |- z:!a : !a");
  DerivRef dM = ok(sig, "x:!a, z:b |- <x:a, z:b> : a * b");
  TypingResult r = substitute_derivation(sig, dV, "x", dM);
  REQUIRE(r);
  CHECK_EQ(ctx_names(r.deriv->ctx), std::vector<std::string>({"z_1", "z"}));
  CHECK_EQ(print_term(r.deriv->term), "<z_1:a, z:b>");
  CHECK(replay(sig, r.deriv));
}

TEST_CASE("substitution splices wider value contexts") {
  Signature sig = sig_basic();
  DerivRef dV = ok(sig, "u:!c, w:!(c -o a) |- <u:c, w:(c -o a)> : c * (c -o a)");
  DerivRef dM = ok(sig, "x:(c * (c -o a)) |- x:(c * (c -o a)) : c * (c -o a)");
  TypingResult r = substitute_derivation(sig, dV, "x", dM);
  REQUIRE(r);
  CHECK_EQ(ctx_names(r.deriv->ctx), std::vector<std::string>({"u", "w"}));
  CHECK_EQ(print_term(r.deriv->term), "<u:c, w:(c -o a)>");
  CHECK(replay(sig, r.deriv));
}

TEST_CASE("substitution demands the declared type") {
  Signature sig = sig_basic();
  DerivRef dV = ok(sig, "y:a |- y:a : a");
  DerivRef dM = ok(sig, "x:!a |- <x:a, x:!a> : a * !a");
  TypingResult r = substitute_derivation(sig, dV, "x", dM);
  REQUIRE_FALSE(r);
  CHECK_EQ(r.error->kind, TypeErrorKind::AnnotationMismatch);

  TypingResult r2 = substitute_derivation(sig, dV, "nosuch", dM);
  REQUIRE_FALSE(r2);
  CHECK_EQ(r2.error->kind, TypeErrorKind::UnboundVariable);
}

TEST_CASE("canonical derivations do not depend on the split policy") {
  Signature sig = sig_basic();
  const std::string src = "f:!(a -o a -o b), y:!a, z:!c |- f:(a -o a -o b) y:a y:a : b";
  TypingResult a = judge(sig, src, SplitPolicy::CopyAll);
  TypingResult b = judge(sig, src, SplitPolicy::DummiesRight);
  REQUIRE(a);
  REQUIRE(b);
  CHECK_NE(print_derivation(a.deriv), print_derivation(b.deriv));
  CHECK_EQ(print_derivation(canonical_derivation(sig, a.deriv)),
           print_derivation(canonical_derivation(sig, b.deriv)));
}

}  // TEST_SUITE
