#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "linlam/infer.hpp"
#include "linlam/parser.hpp"

using namespace linlam;

namespace {

TypeRef ty(const std::string& s) { return parse_type(s); }

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

// src is a judgment over erased syntax, the goal part optional
InferResult inf(const std::string& src, const Signature& sig = {}, InferOptions opts = {}) {
  ParsedPJudgment j = parse_pjudgment(src, const_names(sig));
  InferResult r = infer(sig, to_ctx(j.ctx), j.term, j.goal, opts);
  // every reported solution must stand on its own and erase back to the input
  for (const auto& s : r.solutions) {
    std::string why;
    CHECK_MESSAGE(replay(sig, s.deriv, &why), why);
    CHECK(pterm_equal(erase(s.deriv->term), j.term));
  }
  return r;
}

DerivRef first(const std::string& src, const Signature& sig = {}, InferOptions opts = {}) {
  CAPTURE(src);
  InferResult r = inf(src, sig, opts);
  REQUIRE_MESSAGE(r.status == InferStatus::Ok, infer_status_name(r.status) << ": " << r.detail);
  REQUIRE_FALSE(r.solutions.empty());
  return r.solutions[0].deriv;
}

}  // namespace

TEST_SUITE("infer") {

TEST_CASE("an unconstrained binder leaves the result open") {
  InferResult r = inf("|- lam x. x");
  CHECK_EQ(std::string(infer_status_name(r.status)), "ambiguous");
  REQUIRE_EQ(r.candidates.size(), 1);
  CHECK(type_equal(r.candidates[0], ty("top -o top")));

  InferResult s = inf("y:a |- lam x. y");
  CHECK_EQ(std::string(infer_status_name(s.status)), "ambiguous");
  REQUIRE_EQ(s.candidates.size(), 1);
  CHECK(type_equal(s.candidates[0], ty("top -o a")));
}

TEST_CASE("the goal fixes lambda indices and binder types") {
  CHECK_EQ(print_term(first("|- lam x. x : a -o a")->term), "lam x:a. x:a");
  CHECK_EQ(print_term(first("|- lam x. x : !(!a -o !a)")->term), "lam^1 x:!a. x:!a");
  CHECK_EQ(first("|- lam x. x : !!(a -o a)")->term->n, 2);
  CHECK_EQ(print_term(first("|- lam x. x : !a -o !a")->term), "lam x:!a. x:!a");
}

TEST_CASE("argument types take the fewest bangs that fit") {
  const std::string src = "f : !(a -o b), y : !a |- f y : b";
  DerivRef d = first(src);
  CHECK_EQ(print_term(d->term), "f:(a -o b) y:a");

  InferOptions opts;
  opts.max_solutions = 4;
  InferResult r = inf(src, {}, opts);
  REQUIRE_EQ(r.solutions.size(), 4);
  for (int i = 0; i < 4; ++i) CHECK_EQ(r.solutions[static_cast<std::size_t>(i)].cost, i);
  CHECK_EQ(print_term(r.solutions[1].deriv->term), "f:(!a -o b) y:!a");
  CHECK_EQ(print_term(r.solutions[3].deriv->term), "f:(!!!a -o b) y:!!!a");
}

TEST_CASE("a shared argument is consumed at its plain type") {
  DerivRef d = first("f : !(a -o a -o b), y : !a |- f y y : b");
  CHECK_EQ(print_term(d->term), "f:(a -o a -o b) y:a y:a");
  CHECK(type_equal(d->type, ty("b")));
}

TEST_CASE("banged domains push bangs onto the arguments") {
  const std::string src = "f : !(!a -o !a -o b), y : !a |- f y y : b";
  InferResult r = inf(src);
  REQUIRE(r.status == InferStatus::Ok);
  CHECK_EQ(r.solutions[0].cost, 2);
  CHECK_EQ(print_term(r.solutions[0].deriv->term), "f:(!a -o !a -o b) y:!a y:!a");

  InferOptions tight;
  tight.bang_budget = 1;
  InferResult t = inf(src, {}, tight);
  CHECK_EQ(std::string(infer_status_name(t.status)), "no-solution");
  CHECK(t.budget_exhausted);
}

TEST_CASE("nested pairs meet a deeply banged goal") {
  const std::string src = "x : !a, y : !b, z : !c |- <<z, y>, x> : !(!(c * b) * a)";
  InferOptions opts;
  opts.max_solutions = 5;
  InferResult r = inf(src, {}, opts);
  REQUIRE_MESSAGE(r.status == InferStatus::Ok, r.detail);
  REQUIRE_EQ(r.solutions.size(), 1);  // no free positions at all
  CHECK_EQ(r.solutions[0].cost, 0);
  CHECK_EQ(print_term(r.solutions[0].deriv->term), "<<z:!!c, y:!!b>^2, x:!a>^1");
  CHECK(type_equal(r.solutions[0].deriv->type, ty("!(!(c * b) * a)")));
}

TEST_CASE("shape clashes are definitive") {
  CHECK_EQ(std::string(infer_status_name(inf("x : a |- x x").status)), "untypeable");
  CHECK_EQ(std::string(infer_status_name(inf("|- lam x. x : a -o b").status)), "untypeable");
  CHECK_EQ(std::string(infer_status_name(inf("|- unit : a").status)), "untypeable");
  CHECK_EQ(std::string(infer_status_name(inf("f : !(a -o b), y : c |- f y : b").status)),
           "untypeable");
}

TEST_CASE("missing bangs cannot be conjured") {
  InferResult r = inf("y : a |- y : !a");
  CHECK_EQ(std::string(infer_status_name(r.status)), "no-solution");
  CHECK(r.budget_exhausted);

  // linear reuse also surfaces as exhaustion, not as a shape clash
  InferResult s = inf("x : a |- <x, x> : a * a");
  CHECK_EQ(std::string(infer_status_name(s.status)), "no-solution");
}

TEST_CASE("without a goal the cheapest result type wins") {
  DerivRef d = first("y : !a |- y");
  CHECK(type_equal(d->type, ty("a")));
  CHECK_EQ(print_term(d->term), "y:a");

  CHECK(type_equal(first("p : !(!a * !b) |- p")->type, ty("a * b")));
  CHECK(type_equal(first("y : !c |- lam *. y")->type, ty("top -o c")));
}

TEST_CASE("plain lets infer like their expansion") {
  DerivRef d = first("y : a, z : b |- let w = <y, z> in w : a * b");
  CHECK_EQ(print_term(d->term), "let w:a * b = <y:a, z:b> in w:(a * b)");
}

TEST_CASE("unit eliminations force unit subjects") {
  DerivRef d = first("u : top |- let * = u in unit");
  CHECK(type_equal(d->type, ty("top")));
  CHECK_EQ(print_term(d->term), "let * = u:top in unit");
}

TEST_CASE("conditionals need a bit and equal branches") {
  Signature sig = {{"0", ty("!bit")}, {"1", ty("!bit")}};
  DerivRef d = first("b : bit, x : !a |- if b then x else x : a", sig);
  CHECK_EQ(print_term(d->term), "if b:bit then x:a else x:a");
  CHECK(type_equal(first("b : bit |- if b then 0 else 1", sig)->type, ty("bit")));
}

TEST_CASE("star lambdas follow the goal index") {
  CHECK_EQ(print_term(first("y : !c |- lam *. y : top -o c")->term), "lam *. y:c");
  CHECK_EQ(print_term(first("y : !c |- lam *. y : !(top -o c)")->term), "lam^1 *. y:c");
  CHECK_EQ(print_term(first("y : !c |- lam *. y : !(!top -o c)")->term), "lam^1 *^1. y:c");
}

TEST_CASE("application sites are indexed independently") {
  DerivRef d = first("f : !(b -o c), g : !(a -o b), y : !a |- f (g y) : c");
  CHECK_EQ(print_term(d->term), "f:(b -o c) (g:(a -o b) y:a)");
}

TEST_CASE("repeated queries come from the cache unchanged") {
  clear_infer_cache();
  const std::string src = "f : !(a -o b), y : !a |- f y : b";
  DerivRef d1 = first(src);
  DerivRef d2 = first(src);
  CHECK(term_equal(d1->term, d2->term));
  clear_infer_cache();
  DerivRef d3 = first(src);
  CHECK(term_equal(d1->term, d3->term));
}

}  // TEST_SUITE
