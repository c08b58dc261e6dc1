#include "linlam/rewrite.hpp"

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace linlam {

namespace {

using Rebuild = std::function<TermRef(const TermRef&)>;

// one view over the three let forms: plain let (App of a Lam^0), let-pair, let-unit
struct LetView {
  int arity;  // binders introduced: plain 1, pair 2, unit 0
  TermRef subject;
  TermRef body;  // closed with respect to this let's own binders
  std::vector<std::string> hints;
  std::function<TermRef(const TermRef&, const TermRef&)> make;  // (subject, closed body)
};

std::optional<LetView> as_let(const TermRef& t) {
  if (auto pl = as_plain_let(t)) {
    TermRef lam = t->a;
    return LetView{1,
                   t->b,
                   lam->a,
                   {lam->hint},
                   [lam](const TermRef& s, const TermRef& b) {
                     return Term::app(Term::lam(0, lam->hint, lam->ann, b), s);
                   }};
  }
  if (t->kind == TermKind::LetPair)
    return LetView{2,
                   t->a,
                   t->b,
                   {t->hint, t->hint2.empty() ? "y" : t->hint2},
                   [t](const TermRef& s, const TermRef& b) {
                     return Term::let_pair(t->n, t->hint, t->ann, t->hint2, t->ann2, s, b);
                   }};
  if (t->kind == TermKind::LetUnit)
    return LetView{0, t->a, t->b, {}, [](const TermRef& s, const TermRef& b) {
                     return Term::let_unit(s, b);
                   }};
  return std::nullopt;
}

bool is_let(const TermRef& t) { return as_let(t).has_value(); }

std::unordered_set<std::string> names_in_scope(const DerivRef& d) {
  std::unordered_set<std::string> s;
  for (const auto& b : d->ctx.items) s.insert(b.name);
  for (const auto& f : free_vars(d->term)) s.insert(f.name);
  return s;
}

std::string fresh_in(const std::string& hint, std::unordered_set<std::string>& used) {
  std::string base = hint.empty() ? "x" : hint;
  std::string cand = base;
  for (int i = 1; used.count(cand); ++i) cand = base + "_" + std::to_string(i);
  used.insert(cand);
  return cand;
}

std::vector<std::string> fresh_names(const std::vector<std::string>& hints,
                                     std::unordered_set<std::string>& used) {
  std::vector<std::string> out;
  out.reserve(hints.size());
  for (const auto& h : hints) out.push_back(fresh_in(h, used));
  return out;
}

// binder hints are not part of alpha equality, so the exchange order must not
// see them either
TermRef scrub_hints(const TermRef& t) {
  switch (t->kind) {
    case TermKind::FreeVar:
    case TermKind::BoundVar:
    case TermKind::ConstTerm:
    case TermKind::Star:
      return t;
    case TermKind::Lam:
      return Term::lam(t->n, "", t->ann, scrub_hints(t->a));
    case TermKind::App:
      return Term::app(scrub_hints(t->a), scrub_hints(t->b));
    case TermKind::Pair:
      return Term::pair(t->n, scrub_hints(t->a), scrub_hints(t->b));
    case TermKind::LetPair:
      return Term::let_pair(t->n, "", t->ann, "", t->ann2, scrub_hints(t->a), scrub_hints(t->b));
    case TermKind::LetUnit:
      return Term::let_unit(scrub_hints(t->a), scrub_hints(t->b));
    case TermKind::If:
      return Term::if_(scrub_hints(t->a), scrub_hints(t->b), scrub_hints(t->c));
  }
  return t;
}

std::string sort_key(const TermRef& t) { return print_term(scrub_hints(t)); }

// (lam^0 x. B) V  ->  B[V/x], every occurrence of x cast to its annotation
TermRef beta_let_term(const Signature& sig, const DerivRef& d) {
  const DerivRef& lamD = d->premises[0];
  const DerivRef& argD = d->premises[1];
  const DerivRef& bodyD = lamD->premises[0];
  const std::string& x = bodyD->ctx.items.back().name;
  bool ok = true;
  TermRef out = subst_free(bodyD->term, x, [&](const TypeRef& ann) -> TermRef {
    DerivRef c = cast_derivation(sig, argD, argD->ctx, ann);
    if (!c) {
      ok = false;
      return argD->term;
    }
    return c->term;
  });
  return ok ? out : nullptr;
}

// let <x, y>^n = <V, W>^n in B  ->  B[V/x][W/y]
TermRef beta_pair_term(const Signature& sig, const DerivRef& d) {
  const DerivRef& subjD = d->premises[0];
  const DerivRef& bodyD = d->premises[1];
  const TermRef& s = subjD->term;
  if (s->kind != TermKind::Pair || s->n != d->term->n) return nullptr;
  if (!is_value(s->a) || !is_value(s->b)) return nullptr;
  const DerivRef& dV = subjD->premises[0];
  const DerivRef& dW = subjD->premises[1];
  std::size_t m = bodyD->ctx.items.size();
  const std::string& x = bodyD->ctx.items[m - 2].name;
  const std::string& y = bodyD->ctx.items[m - 1].name;
  bool ok = true;
  auto sub = [&](const TermRef& t, const std::string& v, const DerivRef& dv) {
    return subst_free(t, v, [&](const TypeRef& ann) -> TermRef {
      DerivRef c = cast_derivation(sig, dv, dv->ctx, ann);
      if (!c) {
        ok = false;
        return dv->term;
      }
      return c->term;
    });
  };
  TermRef out = sub(sub(bodyD->term, x, dV), y, dW);
  return ok ? out : nullptr;
}

// lam^n x:A. W x  ->  W lifted n steps, for a value W not using x
TermRef eta_lam_term(const Signature& sig, const DerivRef& d) {
  if (d->rule != "lam" && d->rule != "lam-bang") return nullptr;
  const DerivRef& p = d->premises[0];
  if (p->rule != "app") return nullptr;
  const DerivRef& fnD = p->premises[0];
  const DerivRef& argD = p->premises[1];
  const std::string& x = p->ctx.items.back().name;
  if (argD->term->kind != TermKind::FreeVar || argD->term->name != x) return nullptr;
  if (!type_equal(argD->term->ann, d->term->ann)) return nullptr;
  if (!is_value(fnD->term) || occurs_free(fnD->term, x)) return nullptr;
  int n = d->term->n;
  if (n == 0) return fnD->term;
  Context cw;
  for (const auto& b : fnD->ctx.items)
    if (b.name != x) cw.items.push_back(b);
  TypingResult r = synth(sig, cw, fnD->term);
  if (!r) return nullptr;
  DerivRef cur = r.deriv;
  for (int i = 0; i < n; ++i) {
    cur = promote_derivation(sig, cur);
    if (!cur) return nullptr;
  }
  return cur->term;
}

// let. y = (let* x = N in M) in K  ->  let* x = N in (let. y = M in K)
TermRef assoc_term(const DerivRef& d) {
  auto outer = as_let(d->term);
  if (!outer) return nullptr;
  auto inner = as_let(outer->subject);
  if (!inner) return nullptr;
  auto used = names_in_scope(d);
  std::vector<std::string> names = fresh_names(inner->hints, used);
  TermRef m = open_term(inner->body, names);
  TermRef pushed = outer->make(m, outer->body);
  return inner->make(inner->subject, close_term(pushed, names));
}

// two adjacent lets over values, the inner one independent of the outer
// binders: swap them when that lowers the sort key
TermRef exchange_term(const DerivRef& d) {
  auto l1 = as_let(d->term);
  if (!l1 || !is_value(l1->subject)) return nullptr;
  auto used = names_in_scope(d);
  std::vector<std::string> n1 = fresh_names(l1->hints, used);
  TermRef b1 = open_term(l1->body, n1);
  auto l2 = as_let(b1);
  if (!l2 || !is_value(l2->subject)) return nullptr;
  for (const auto& nm : n1)
    if (occurs_free(l2->subject, nm)) return nullptr;
  if (!(sort_key(l2->subject) < sort_key(l1->subject))) return nullptr;
  std::vector<std::string> n2 = fresh_names(l2->hints, used);
  TermRef b2 = open_term(l2->body, n2);
  TermRef innerLet = l1->make(l1->subject, close_term(b2, n1));
  return l2->make(l2->subject, close_term(innerLet, n2));
}

// a let of a value binds no effect, so it may move ahead of an unrelated
// computation binding; value bindings drift frontward
TermRef exchange_pure_term(const DerivRef& d) {
  auto l1 = as_let(d->term);
  if (!l1 || is_value(l1->subject)) return nullptr;
  auto used = names_in_scope(d);
  std::vector<std::string> n1 = fresh_names(l1->hints, used);
  TermRef b1 = open_term(l1->body, n1);
  auto l2 = as_let(b1);
  if (!l2 || !is_value(l2->subject)) return nullptr;
  for (const auto& nm : n1)
    if (occurs_free(l2->subject, nm)) return nullptr;
  std::vector<std::string> n2 = fresh_names(l2->hints, used);
  TermRef b2 = open_term(l2->body, n2);
  TermRef innerLet = l1->make(l1->subject, close_term(b2, n1));
  return l2->make(l2->subject, close_term(innerLet, n2));
}

bool pair_eta_pattern(const TermRef& t, const TermRef& b, int depth) {
  return b->kind == TermKind::Pair && b->n == t->n && b->a->kind == TermKind::BoundVar &&
         b->a->n == depth + 1 && b->b->kind == TermKind::BoundVar && b->b->n == depth &&
         type_equal(b->a->ann, Type::bangN(t->ann, t->n)) &&
         type_equal(b->b->ann, Type::bangN(t->ann2, t->n));
}

// occurrences of the bound variable idx levels out
int count_refs(const TermRef& t, int idx) {
  switch (t->kind) {
    case TermKind::BoundVar:
      return t->n == idx ? 1 : 0;
    case TermKind::FreeVar:
    case TermKind::ConstTerm:
    case TermKind::Star:
      return 0;
    case TermKind::Lam:
      return count_refs(t->a, idx + 1);
    case TermKind::App:
    case TermKind::Pair:
      return count_refs(t->a, idx) + count_refs(t->b, idx);
    case TermKind::LetPair:
      return count_refs(t->a, idx) + count_refs(t->b, idx + 2);
    case TermKind::LetUnit:
      return count_refs(t->a, idx) + count_refs(t->b, idx);
    case TermKind::If:
      return count_refs(t->a, idx) + count_refs(t->b, idx) + count_refs(t->c, idx);
  }
  return 0;
}

// positions in a let body its subject may lawfully sink to: across a value
// sibling, into an inner let subject, and under a binder only when the
// subject is a value and so carries no effect to delay
void sink_rec(const TermRef& t, bool subjVal, int depth,
              const std::function<TermRef(const TermRef&, int)>& match,
              const std::function<void(const TermRef&)>& emit) {
  if (TermRef r = match(t, depth)) emit(r);
  auto walk = [&](const TermRef& c, int extra, const std::function<TermRef(const TermRef&)>& put) {
    sink_rec(c, subjVal, depth + extra, match,
             [&](const TermRef& nc) { emit(put(nc)); });
  };
  switch (t->kind) {
    case TermKind::Pair:
      if (is_value(t->b))
        walk(t->a, 0, [&](const TermRef& nc) { return Term::pair(t->n, nc, t->b); });
      if (is_value(t->a))
        walk(t->b, 0, [&](const TermRef& nc) { return Term::pair(t->n, t->a, nc); });
      break;
    case TermKind::App: {
      const TermRef& fn = t->a;
      if (fn->kind == TermKind::Lam && fn->n == 0) {
        walk(t->b, 0, [&](const TermRef& nc) { return Term::app(fn, nc); });
        if (subjVal)
          walk(fn->a, 1, [&](const TermRef& nc) {
            return Term::app(Term::lam(0, fn->hint, fn->ann, nc), t->b);
          });
      } else {
        if (is_value(t->b))
          walk(t->a, 0, [&](const TermRef& nc) { return Term::app(nc, t->b); });
        if (is_value(t->a))
          walk(t->b, 0, [&](const TermRef& nc) { return Term::app(t->a, nc); });
      }
      break;
    }
    case TermKind::LetPair:
      walk(t->a, 0, [&](const TermRef& nc) {
        return Term::let_pair(t->n, t->hint, t->ann, t->hint2, t->ann2, nc, t->b);
      });
      if (subjVal)
        walk(t->b, 2, [&](const TermRef& nc) {
          return Term::let_pair(t->n, t->hint, t->ann, t->hint2, t->ann2, t->a, nc);
        });
      break;
    case TermKind::LetUnit:
      walk(t->a, 0, [&](const TermRef& nc) { return Term::let_unit(nc, t->b); });
      if (subjVal)
        walk(t->b, 0, [&](const TermRef& nc) { return Term::let_unit(t->a, nc); });
      break;
    case TermKind::Lam:
      if (subjVal)
        walk(t->a, 1, [&](const TermRef& nc) { return Term::lam(t->n, t->hint, t->ann, nc); });
      break;
    default:
      break;
  }
}

// let * = N in B  ->  B with one reachable *^0 swapped for N
std::vector<TermRef> unit_sink_candidates(const TermRef& t) {
  std::vector<TermRef> out;
  if (t->b->kind == TermKind::Star) return out;  // the root occurrence is handled directly
  sink_rec(
      t->b, is_value(t->a), 0,
      [&](const TermRef& n, int) -> TermRef {
        return (n->kind == TermKind::Star && n->n == 0) ? t->a : nullptr;
      },
      [&](const TermRef& r) { out.push_back(r); });
  return out;
}

// let <x, y>^n = N in B  ->  B with its only <x, y>^n swapped for N
std::vector<TermRef> pair_sink_candidates(const TermRef& t) {
  std::vector<TermRef> out;
  if (pair_eta_pattern(t, t->b, 0)) return out;  // the root occurrence is handled directly
  if (count_refs(t->b, 0) != 1 || count_refs(t->b, 1) != 1) return out;
  sink_rec(
      t->b, is_value(t->a), 0,
      [&](const TermRef& n, int depth) -> TermRef {
        return pair_eta_pattern(t, n, depth) ? t->a : nullptr;
      },
      [&](const TermRef& r) { out.push_back(r); });
  return out;
}

struct Collector {
  const Signature& sig;
  std::vector<RewriteStep>& out;
  bool firstOnly;
  bool done = false;

  // candidates must keep the node judgment; reject anything that does not
  bool offer(const DerivRef& node, const Rebuild& rb, const char* rule, const TermRef& cand) {
    if (done || !cand || term_equal(cand, node->term)) return false;
    if (!check(sig, node->ctx, cand, node->type)) return false;
    out.push_back({rule, rb(cand)});
    if (firstOnly) done = true;
    return done;
  }

  // (let ... in M) plugged into a one hole context  ->  let ... in (plugged M)
  TermRef hoist(const DerivRef& d, const TermRef& letChild,
                const std::function<TermRef(const TermRef&)>& plug) {
    auto lv = as_let(letChild);
    if (!lv) return nullptr;
    auto used = names_in_scope(d);
    std::vector<std::string> names = fresh_names(lv->hints, used);
    TermRef m = open_term(lv->body, names);
    return lv->make(lv->subject, close_term(plug(m), names));
  }

  // a computation in a value position gets a name first
  TermRef seq(const DerivRef& d, const TermRef& sub, const TypeRef& subType, const char* hint,
              const std::function<TermRef(const TermRef&)>& plug) {
    if (classify(sub) != Classification::Computation || is_let(sub)) return nullptr;
    auto used = names_in_scope(d);
    std::string z = fresh_in(hint, used);
    return Term::let_named(z, subType, sub, plug(Term::free_var(z, subType)));
  }

  void try_rules(const DerivRef& d, const Rebuild& rb) {
    const TermRef& t = d->term;
    if (auto lv = as_let(t)) {
      if (lv->arity == 1 && is_value(lv->subject)) {
        if (offer(d, rb, "beta-lam", beta_let_term(sig, d))) return;
      }
      if (t->kind == TermKind::LetPair) {
        if (offer(d, rb, "beta-pair", beta_pair_term(sig, d))) return;
      }
      if (t->kind == TermKind::LetUnit && t->a->kind == TermKind::Star && t->a->n == 0) {
        if (offer(d, rb, "beta-unit", t->b)) return;
      }
      if (lv->arity == 1) {
        const TermRef& lam = t->a;
        if (lam->a->kind == TermKind::BoundVar && lam->a->n == 0 &&
            type_equal(lam->a->ann, lam->ann)) {
          if (offer(d, rb, "eta-let", t->b)) return;
        }
      }
      if (t->kind == TermKind::LetPair) {
        if (pair_eta_pattern(t, t->b, 0)) {
          if (offer(d, rb, "eta-pair", t->a)) return;
        }
        for (const TermRef& cand : pair_sink_candidates(t))
          if (offer(d, rb, "eta-pair-deep", cand)) return;
      }
      if (t->kind == TermKind::LetUnit && t->b->kind == TermKind::Star) {
        // body star index 0: the subject already has the node type; banged
        // body: the subject erasure re-indexed at the banged unit type
        TermRef cand = t->a;
        if (t->b->n != 0) {
          InferResult ir = infer(sig, d->ctx, erase(t->a), d->type);
          cand = ir ? ir.solutions[0].deriv->term : nullptr;
        }
        if (offer(d, rb, "eta-unit", cand)) return;
      }
      if (t->kind == TermKind::LetUnit) {
        for (const TermRef& cand : unit_sink_candidates(t))
          if (offer(d, rb, "eta-unit-deep", cand)) return;
      }
      if (is_let(lv->subject)) {
        if (offer(d, rb, "assoc", assoc_term(d))) return;
      }
      if (offer(d, rb, "exchange", exchange_term(d))) return;
      offer(d, rb, "exchange-pure", exchange_pure_term(d));
      return;
    }
    switch (t->kind) {
      case TermKind::Lam: {
        if (offer(d, rb, "eta-lam", eta_lam_term(sig, d))) return;
        // a value binding carries no effect to delay, so it may leave the
        // body of a lambda that it does not mention
        const DerivRef& p = d->premises[0];
        const TermRef& bt = p->term;
        if (bt->kind == TermKind::LetPair || bt->kind == TermKind::LetUnit) {
          auto lv = as_let(bt);
          const std::string& x = p->ctx.items.back().name;
          if (is_value(lv->subject) && !occurs_free(lv->subject, x)) {
            auto used = names_in_scope(d);
            used.insert(x);
            std::vector<std::string> names = fresh_names(lv->hints, used);
            TermRef inner = open_term(lv->body, names);
            TermRef wrapped = Term::lam(t->n, t->hint, t->ann, close_term(inner, {x}));
            offer(d, rb, "hoist-lam", lv->make(lv->subject, close_term(wrapped, names)));
          }
        }
        return;
      }
      case TermKind::App: {
        if (offer(d, rb, "hoist-app-left",
                  hoist(d, t->a, [t](const TermRef& m) { return Term::app(m, t->b); })))
          return;
        if (is_value(t->a) &&
            offer(d, rb, "hoist-app-right",
                  hoist(d, t->b, [t](const TermRef& m) { return Term::app(t->a, m); })))
          return;
        if (offer(d, rb, "seq-app-left",
                  seq(d, t->a, d->premises[0]->type, "f",
                      [t](const TermRef& v) { return Term::app(v, t->b); })))
          return;
        if (is_value(t->a))
          offer(d, rb, "seq-app-right",
                seq(d, t->b, d->premises[1]->type, "z",
                    [t](const TermRef& v) { return Term::app(t->a, v); }));
        return;
      }
      case TermKind::Pair: {
        if (offer(d, rb, "hoist-pair-left",
                  hoist(d, t->a, [t](const TermRef& m) { return Term::pair(t->n, m, t->b); })))
          return;
        if (is_value(t->a) &&
            offer(d, rb, "hoist-pair-right",
                  hoist(d, t->b, [t](const TermRef& m) { return Term::pair(t->n, t->a, m); })))
          return;
        if (offer(d, rb, "seq-pair-left",
                  seq(d, t->a, d->premises[0]->type, "z",
                      [t](const TermRef& v) { return Term::pair(t->n, v, t->b); })))
          return;
        if (is_value(t->a))
          offer(d, rb, "seq-pair-right",
                seq(d, t->b, d->premises[1]->type, "z",
                    [t](const TermRef& v) { return Term::pair(t->n, t->a, v); }));
        return;
      }
      case TermKind::If: {
        if (offer(d, rb, "hoist-if",
                  hoist(d, t->a, [t](const TermRef& m) { return Term::if_(m, t->b, t->c); })))
          return;
        offer(d, rb, "seq-if",
              seq(d, t->a, d->premises[0]->type, "z",
                  [t](const TermRef& v) { return Term::if_(v, t->b, t->c); }));
        return;
      }
      default:
        return;
    }
  }

  void visit(const DerivRef& d, const Rebuild& rb) {
    if (done) return;
    try_rules(d, rb);
    if (done) return;
    const TermRef& t = d->term;
    const std::string& rule = d->rule;
    if (rule == "lam" || rule == "lam-bang") {
      const DerivRef& p = d->premises[0];
      std::string x = p->ctx.items.back().name;
      visit(p, [rb, t, x](const TermRef& nb) {
        return rb(Term::lam(t->n, t->hint, t->ann, close_term(nb, {x})));
      });
    } else if (rule == "app") {
      const DerivRef& fnD = d->premises[0];
      const DerivRef& argD = d->premises[1];
      if (as_plain_let(t)) {
        // the lambda of a plain let is binding structure, not a function
        // position of its own; walk the subject, then the body
        visit(argD, [rb, t](const TermRef& ns) { return rb(Term::app(t->a, ns)); });
        if (done) return;
        const DerivRef& bodyD = fnD->premises[0];
        std::string x = bodyD->ctx.items.back().name;
        TermRef lam = t->a;
        visit(bodyD, [rb, t, lam, x](const TermRef& nb) {
          return rb(Term::app(Term::lam(0, lam->hint, lam->ann, close_term(nb, {x})), t->b));
        });
      } else {
        visit(fnD, [rb, t](const TermRef& nf) { return rb(Term::app(nf, t->b)); });
        if (done) return;
        visit(argD, [rb, t](const TermRef& na) { return rb(Term::app(t->a, na)); });
      }
    } else if (rule == "pair") {
      visit(d->premises[0], [rb, t](const TermRef& nl) { return rb(Term::pair(t->n, nl, t->b)); });
      if (done) return;
      visit(d->premises[1], [rb, t](const TermRef& nr) { return rb(Term::pair(t->n, t->a, nr)); });
    } else if (rule == "pair-elim") {
      const DerivRef& subjD = d->premises[0];
      const DerivRef& bodyD = d->premises[1];
      visit(subjD, [rb, t](const TermRef& ns) {
        return rb(Term::let_pair(t->n, t->hint, t->ann, t->hint2, t->ann2, ns, t->b));
      });
      if (done) return;
      std::size_t m = bodyD->ctx.items.size();
      std::string x = bodyD->ctx.items[m - 2].name;
      std::string y = bodyD->ctx.items[m - 1].name;
      visit(bodyD, [rb, t, x, y](const TermRef& nb) {
        return rb(
            Term::let_pair(t->n, t->hint, t->ann, t->hint2, t->ann2, t->a, close_term(nb, {x, y})));
      });
    } else if (rule == "unit-elim") {
      visit(d->premises[0], [rb, t](const TermRef& ns) { return rb(Term::let_unit(ns, t->b)); });
      if (done) return;
      visit(d->premises[1], [rb, t](const TermRef& nb) { return rb(Term::let_unit(t->a, nb)); });
    } else if (rule == "if") {
      visit(d->premises[0], [rb, t](const TermRef& nc) { return rb(Term::if_(nc, t->b, t->c)); });
      if (done) return;
      visit(d->premises[1], [rb, t](const TermRef& nb) { return rb(Term::if_(t->a, nb, t->c)); });
      if (done) return;
      visit(d->premises[2], [rb, t](const TermRef& nc) { return rb(Term::if_(t->a, t->b, nc)); });
    }
  }
};

}  // namespace

NormalizeResult normalize(const Signature& sig, const DerivRef& d, const NormalizeOptions& opts) {
  NormalizeResult res;
  if (!d) {
    res.error = "no derivation";
    return res;
  }
  DerivRef cur = d;
  std::unordered_set<TermRef, TermHash, TermEq> seen;
  seen.insert(cur->term);
  int steps = 0;
  bool stopped = false;
  auto apply = [&](const std::string& rule, const TermRef& t) -> bool {
    TypingResult r = check(sig, d->ctx, t, d->type);
    if (!r) {
      res.error = "step \"" + rule + "\" left the judgment: " +
                  (r.error ? r.error->message : std::string("unknown"));
      return false;
    }
    res.steps.push_back({rule, t});
    cur = r.deriv;
    ++steps;
    if (!seen.insert(t).second) {
      stopped = true;  // revisited an earlier form; give up rather than cycle
      return false;
    }
    return true;
  };
  while (steps < opts.max_steps) {
    if (opts.canon) {
      InferResult ir = infer(sig, d->ctx, erase(cur->term), d->type);
      if (ir && !term_equal(ir.solutions[0].deriv->term, cur->term)) {
        if (!apply("canon", ir.solutions[0].deriv->term)) break;
        continue;
      }
    }
    std::vector<RewriteStep> cand;
    Collector col{sig, cand, true};
    col.visit(cur, [](const TermRef& t) { return t; });
    if (cand.empty()) break;
    if (!apply(cand[0].rule, cand[0].term)) break;
  }
  res.hit_step_limit = stopped || steps >= opts.max_steps;
  res.deriv = cur;
  return res;
}

std::vector<RewriteStep> rewrite_candidates(const Signature& sig, const DerivRef& d) {
  std::vector<RewriteStep> out;
  if (!d) return out;
  Collector col{sig, out, false};
  col.visit(d, [](const TermRef& t) { return t; });
  return out;
}

}  // namespace linlam
