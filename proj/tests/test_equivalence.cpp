#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "linlam/equivalence.hpp"
#include "linlam/parser.hpp"

using namespace linlam;

namespace {

Signature sig_base() {
  Signature s;
  s["c"] = parse_type("!a");
  s["0"] = parse_type("!bit");
  s["1"] = parse_type("!bit");
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

DerivRef derive(const Signature& sig, const std::string& src) {
  ParsedJudgment j = parse_judgment(src, const_names(sig));
  Context c = to_ctx(j.ctx);
  TypingResult r = j.goal ? check(sig, c, j.term, j.goal) : synth(sig, c, j.term);
  REQUIRE_MESSAGE(r, "does not type: " << src);
  return r.deriv;
}

EqResult eq(const Signature& sig, const std::string& l, const std::string& r,
            const EqOptions& opts = {}) {
  return ax_equal(sig, derive(sig, l), derive(sig, r), opts);
}

void equal_both_ways(const Signature& sig, const std::string& l, const std::string& r) {
  EqResult a = eq(sig, l, r);
  REQUIRE_MESSAGE(a.outcome == EqOutcome::Equal,
                  l << "  vs  " << r << "  ->  " << a.detail << "\n  lhs normal: "
                    << (a.left_normal ? print_term(a.left_normal) : "?")
                    << "\n  rhs normal: " << (a.right_normal ? print_term(a.right_normal) : "?"));
  EqResult b = eq(sig, r, l);
  REQUIRE_MESSAGE(b.outcome == EqOutcome::Equal, "reversed: " << r << "  vs  " << l);
}

}  // namespace

TEST_SUITE("equivalence") {

TEST_CASE("same term under a renamed context is equal") {
  auto sig = sig_base();
  EqResult r = eq(sig, "x:a |- x:a : a", "y:a |- y:a : a");
  CHECK(r.outcome == EqOutcome::Equal);
  // swapped names, same judgment shape
  EqResult s = eq(sig, "x:a, y:b |- <x:a, y:b> : a * b", "y:a, x:b |- <y:a, x:b> : a * b");
  CHECK(s.outcome == EqOutcome::Equal);
}

TEST_CASE("mismatched judgments are rejected") {
  auto sig = sig_base();
  CHECK(eq(sig, "x:a |- x:a : a", "x:!a |- x:a : a").outcome == EqOutcome::DifferentJudgment);
  CHECK(eq(sig, "x:a |- x:a : a", "x:a, y:!b |- x:a : a").outcome ==
        EqOutcome::DifferentJudgment);
  CHECK(eq(sig, "x:!a |- x:a : a", "x:!a |- x:!a : !a").outcome == EqOutcome::DifferentJudgment);
}

TEST_CASE("a value binding inlines") {
  auto sig = sig_base();
  equal_both_ways(sig, "y:a |- let x:a = y:a in x:a : a", "y:a |- y:a : a");
}

TEST_CASE("a banged value copies into both uses") {
  auto sig = sig_base();
  equal_both_ways(sig,
                  "f:(a -o a -o b), v:!a |- let x:!a = v:!a in f:(a -o a -o b) x:a x:a : b",
                  "f:(a -o a -o b), v:!a |- f:(a -o a -o b) v:a v:a : b");
}

TEST_CASE("a literal pair splits into its parts") {
  auto sig = sig_base();
  equal_both_ways(sig,
                  "z:a, w:b |- let <x:a, y:b> = <z:a, w:b> in <y:b, x:a> : b * a",
                  "z:a, w:b |- <w:b, z:a> : b * a");
}

TEST_CASE("the unit eliminator cancels a literal unit") {
  auto sig = sig_base();
  equal_both_ways(sig, "|- let * = unit in unit : top", "|- unit : top");
  equal_both_ways(sig, "y:c |- let * = unit in y:c : c", "y:c |- y:c : c");
}

TEST_CASE("eliminating into the unit is the subject itself") {
  auto sig = sig_base();
  equal_both_ways(sig, "u:top |- let * = u:top in unit : top", "u:top |- u:top : top");
  // banged unit bodies: the subject comes back at the banged type
  equal_both_ways(sig, "u:!top |- let * = u:top in unit^1 : !top", "u:!top |- u:!top : !top");
  equal_both_ways(sig, "|- let * = unit in unit^2 : !!top", "|- unit^2 : !!top");
}

TEST_CASE("repacking a split pair is the identity") {
  auto sig = sig_base();
  equal_both_ways(sig,
                  "p:(a * b) |- let <x:a, y:b> = p:(a * b) in <x:a, y:b> : a * b",
                  "p:(a * b) |- p:(a * b) : a * b");
  equal_both_ways(sig,
                  "q:!(a * b) |- let <x:a, y:b>^1 = q:!(a * b) in <x:!a, y:!b>^1 : !(a * b)",
                  "q:!(a * b) |- q:!(a * b) : !(a * b)");
}

TEST_CASE("expanding a function and reapplying it is the identity") {
  auto sig = sig_base();
  equal_both_ways(sig, "f:(a -o b) |- lam x:a. f:(a -o b) x:a : a -o b",
                  "f:(a -o b) |- f:(a -o b) : a -o b");
  equal_both_ways(sig, "f:!(a -o b) |- lam^1 x:a. f:(a -o b) x:a : !(a -o b)",
                  "f:!(a -o b) |- f:!(a -o b) : !(a -o b)");
}

TEST_CASE("naming a computation and returning it is the computation") {
  auto sig = sig_base();
  equal_both_ways(sig, "g:(a -o b), y:a |- let z:b = g:(a -o b) y:a in z:b : b",
                  "g:(a -o b), y:a |- g:(a -o b) y:a : b");
}

TEST_CASE("nested bindings reassociate") {
  auto sig = sig_base();
  equal_both_ways(
      sig,
      "z:a, f:(a -o a), g:(a -o a) |- "
      "let y:a = (let x:a = f:(a -o a) z:a in g:(a -o a) x:a) in y:a : a",
      "z:a, f:(a -o a), g:(a -o a) |- "
      "let x:a = f:(a -o a) z:a in let y:a = g:(a -o a) x:a in y:a : a");
}

TEST_CASE("unit eliminations reassociate") {
  auto sig = sig_base();
  equal_both_ways(sig,
                  "u:top, y:!c |- let * = (let * = u:top in unit) in y:c : c",
                  "u:top, y:!c |- let * = u:top in let * = unit in y:c : c");
}

TEST_CASE("a binding hoists out of an argument") {
  auto sig = sig_base();
  equal_both_ways(
      sig,
      "g:(a -o b), k:(top -o a), u:top |- "
      "g:(a -o b) (let x:a = k:(top -o a) u:top in x:a) : b",
      "g:(a -o b), k:(top -o a), u:top |- "
      "let x:a = k:(top -o a) u:top in g:(a -o b) x:a : b");
}

TEST_CASE("a binding hoists out of a pair component") {
  auto sig = sig_base();
  equal_both_ways(
      sig,
      "k:(top -o a), u:top, w:b |- <let x:a = k:(top -o a) u:top in x:a, w:b> : a * b",
      "k:(top -o a), u:top, w:b |- let x:a = k:(top -o a) u:top in <x:a, w:b> : a * b");
}

TEST_CASE("a binding hoists out of a condition") {
  auto sig = sig_base();
  equal_both_ways(
      sig,
      "h:(top -o bit), u:top |- "
      "if (let z:bit = h:(top -o bit) u:top in z:bit) then 0:bit else 1:bit : bit",
      "h:(top -o bit), u:top |- "
      "let z:bit = h:(top -o bit) u:top in if z:bit then 0:bit else 1:bit : bit");
}

TEST_CASE("a computed condition is sequenced") {
  auto sig = sig_base();
  equal_both_ways(sig,
                  "h:(top -o bit), u:top |- if h:(top -o bit) u:top then 0:bit else 1:bit : bit",
                  "h:(top -o bit), u:top |- "
                  "let z:bit = h:(top -o bit) u:top in if z:bit then 0:bit else 1:bit : bit");
}

TEST_CASE("applications sequence left to right") {
  auto sig = sig_base();
  equal_both_ways(sig,
                  "f:(a -o a -o b), y:a, z:a |- f:(a -o a -o b) y:a z:a : b",
                  "f:(a -o a -o b), y:a, z:a |- "
                  "let g:(a -o b) = f:(a -o a -o b) y:a in g:(a -o b) z:a : b");
}

TEST_CASE("independent value bindings sort into one order") {
  auto sig = sig_base();
  equal_both_ways(
      sig,
      "p:!(a * b), q:!(b * a) |- let <x:a, y:b>^1 = p:!(a * b) in "
      "let <u:b, v:a>^1 = q:!(b * a) in <x:a, <y:b, <u:b, v:a>>> : a * (b * (b * a))",
      "p:!(a * b), q:!(b * a) |- let <u:b, v:a>^1 = q:!(b * a) in "
      "let <x:a, y:b>^1 = p:!(a * b) in <x:a, <y:b, <u:b, v:a>>> : a * (b * (b * a))");
}

TEST_CASE("suspended units cancel") {
  auto sig = sig_base();
  equal_both_ways(sig, "y:!c |- (lam *. y:c) unit : c", "y:!c |- y:c : c");
}

TEST_CASE("different programs stay unproved without a model") {
  auto sig = sig_base();
  EqOptions opts;
  opts.use_model = false;
  opts.search_depth = 2;
  EqResult r = eq(sig, "x:!a, y:!a |- x:a : a", "x:!a, y:!a |- y:a : a", opts);
  CHECK(r.outcome == EqOutcome::NotProvedEqual);
  EqResult s = eq(sig,
                  "|- lam p:(a * a). let <x:a, y:a> = p:(a * a) in <y:a, x:a> : "
                  "(a * a) -o (a * a)",
                  "|- lam p:(a * a). let <x:a, y:a> = p:(a * a) in <x:a, y:a> : "
                  "(a * a) -o (a * a)",
                  opts);
  CHECK(s.outcome == EqOutcome::NotProvedEqual);
}

TEST_CASE("normalization is checked, replayable and idempotent") {
  auto sig = sig_base();
  DerivRef d = derive(sig, "f:!(a -o a), z:a |- (lam w:a. f:(a -o a) w:a) "
                           "((lam v:a. v:a) z:a) : a");
  NormalizeResult n = normalize(sig, d);
  REQUIRE_MESSAGE(n, n.error);
  CHECK(!n.steps.empty());
  for (const auto& s : n.steps) {
    TypingResult r = check(sig, d->ctx, s.term, d->type);
    CHECK_MESSAGE(r, "step \"" << s.rule << "\" broke the judgment");
  }
  CHECK(print_term(n.deriv->term) == "f:(a -o a) z:a");
  std::string why;
  CHECK_MESSAGE(replay(sig, n.deriv, &why), why);
  NormalizeResult again = normalize(sig, n.deriv);
  REQUIRE(again);
  CHECK(again.steps.empty());
}

TEST_CASE("all indexations of one erasure are equal") {
  auto sig = sig_base();
  ParsedPJudgment pj =
      parse_pjudgment("f:!(a -o a -o b), y:!a |- f y y : b", const_names(sig));
  Context ctx = to_ctx(pj.ctx);
  InferOptions io;
  io.max_solutions = 5;
  InferResult ir = infer(sig, ctx, pj.term, pj.goal, io);
  REQUIRE(ir);
  REQUIRE(ir.solutions.size() >= 2);
  for (std::size_t i = 0; i < ir.solutions.size(); ++i) {
    for (std::size_t j = i + 1; j < ir.solutions.size(); ++j) {
      EqResult r = ax_equal(sig, ir.solutions[i].deriv, ir.solutions[j].deriv);
      CHECK_MESSAGE(r.outcome == EqOutcome::Equal,
                    "solutions " << i << " and " << j << ": " << r.detail);
    }
  }
}

TEST_CASE("rewrite candidates preserve the judgment everywhere") {
  auto sig = sig_base();
  DerivRef d = derive(sig, "f:!(a -o a), z:a |- (lam w:a. f:(a -o a) w:a) "
                           "((lam v:a. v:a) z:a) : a");
  auto cands = rewrite_candidates(sig, d);
  CHECK(!cands.empty());
  for (const auto& c : cands) {
    TypingResult r = check(sig, d->ctx, c.term, d->type);
    CHECK_MESSAGE(r, "candidate \"" << c.rule << "\" broke the judgment: " << print_term(c.term));
  }
}

}  // TEST_SUITE
