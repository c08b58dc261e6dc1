#include "linlam/yaq.hpp"

#include <stdexcept>

#include "linlam/parser.hpp"
#include "linlam/rewrite.hpp"

namespace linlam::yaq {

namespace {

const std::string kVar = "x";

// replace a free variable by a pure term; internal binders are indices, so
// plain recursion cannot capture
PTermRef psubst(const PTermRef& t, const std::string& from, const PTermRef& to) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::FreeVar:
      return t->name == from ? to : t;
    case TermKind::BoundVar:
    case TermKind::ConstTerm:
    case TermKind::Star:
      return t;
    case TermKind::Lam:
      return PTerm::lam(t->hint, psubst(t->a, from, to));
    case TermKind::App:
      return PTerm::app(psubst(t->a, from, to), psubst(t->b, from, to));
    case TermKind::Pair:
      return PTerm::pair(psubst(t->a, from, to), psubst(t->b, from, to));
    case TermKind::LetPair:
      return PTerm::let_pair(t->hint, t->hint2, psubst(t->a, from, to), psubst(t->b, from, to));
    case TermKind::LetUnit:
      return PTerm::let_unit(psubst(t->a, from, to), psubst(t->b, from, to));
    case TermKind::If:
      return PTerm::if_(psubst(t->a, from, to), psubst(t->b, from, to), psubst(t->c, from, to));
  }
  throw std::logic_error("unreachable term kind");
}

// erased subject of a map, with its context variable renamed
PTermRef body_as(const Morphism& f, const std::string& var) {
  PTermRef p = erase(f.rep->term);
  if (var == kVar) return p;
  return psubst(p, kVar, PTerm::free_var(var));
}

PTermRef zvar() { return PTerm::free_var("z"); }

}  // namespace

std::string print_mor(const Morphism& f) {
  return print_judgment({f.rep->ctx, f.rep->term, f.rep->type});
}

Morphism Model::from_deriv(const DerivRef& d0) const {
  DerivRef d = d0;
  if (!d || d->ctx.size() != 1) throw std::logic_error("a map needs a one-entry context");
  if (d->ctx.items[0].name != kVar) {
    TermRef t = subst_free(d->term, d->ctx.items[0].name,
                           [&](const TypeRef& ann) { return Term::free_var(kVar, ann); });
    Context c;
    c.items.push_back({kVar, d->ctx.items[0].type});
    TypingResult r = check(sig, c, t, d->type);
    if (!r) {
      throw std::logic_error("context variable rename failed: " + r.error->message);
    }
    d = r.deriv;
  }
  NormalizeResult n = normalize(sig, d);
  if (n.deriv) d = n.deriv;
  return {d->ctx.items[0].type, d->type, d};
}

Morphism Model::from_pure_tree(const TypeRef& dom, const PTermRef& p, const TypeRef& cod) const {
  Context ctx;
  ctx.items.push_back({"z", dom});
  InferResult r = infer(sig, ctx, p, cod, iopts);
  if (!r) {
    throw std::logic_error("template has no indexation from " + print_type(dom) + " to " +
                           print_type(cod) + ": " + print_pterm(p) + " (" + r.detail + ")");
  }
  return from_deriv(r.solutions.front().deriv);
}

Morphism Model::from_pure(const TypeRef& dom, const std::string& src, const TypeRef& cod) const {
  std::set<std::string> consts;
  for (const auto& [name, ty] : sig) consts.insert(name);
  return from_pure_tree(dom, parse_pterm(src, consts), cod);
}

TypeRef Model::unit_obj() const { return Type::unit(); }
TypeRef Model::tensor_obj(const TypeRef& a, const TypeRef& b) const { return Type::tensor(a, b); }
TypeRef Model::L_obj(const TypeRef& a) const { return Type::bang(a); }
TypeRef Model::T_obj(const TypeRef& a) const { return Type::arrow(Type::unit(), a); }
TypeRef Model::lolli_obj(const TypeRef& a, const TypeRef& b) const { return Type::arrow(a, b); }
bool Model::obj_eq(const TypeRef& a, const TypeRef& b) const { return type_equal(a, b); }
std::string Model::show_obj(const TypeRef& a) const { return print_type(a); }

Morphism Model::id(const TypeRef& a) const { return from_pure(a, "z", a); }

Morphism Model::compose(const Morphism& f, const Morphism& g) const {
  if (!type_equal(f.cod, g.dom)) {
    throw std::logic_error("compose endpoint mismatch: " + print_type(f.cod) + " vs " +
                           print_type(g.dom));
  }
  // a let is always typeable even when direct substitution would break a
  // split; normalization performs the substitution wherever it is legal
  TermRef t = Term::app(Term::lam_named(0, kVar, g.dom, g.rep->term), f.rep->term);
  TypingResult r = check(sig, f.rep->ctx, t, g.cod);
  if (!r) throw std::logic_error("composition failed: " + r.error->message);
  return from_deriv(r.deriv);
}

Morphism Model::tensor_mor(const Morphism& f, const Morphism& g) const {
  PTermRef body = PTerm::pair(body_as(f, kVar), body_as(g, "y1"));
  PTermRef t = PTerm::let_pair_named(kVar, "y1", zvar(), body);
  return from_pure_tree(Type::tensor(f.dom, g.dom), t, Type::tensor(f.cod, g.cod));
}

Morphism Model::alpha(const TypeRef& a, const TypeRef& b, const TypeRef& c) const {
  return from_pure(Type::tensor(a, Type::tensor(b, c)),
                   "let <x1, w1> = z in let <y1, u1> = w1 in <<x1, y1>, u1>",
                   Type::tensor(Type::tensor(a, b), c));
}

Morphism Model::alpha_inv(const TypeRef& a, const TypeRef& b, const TypeRef& c) const {
  return from_pure(Type::tensor(Type::tensor(a, b), c),
                   "let <w1, u1> = z in let <x1, y1> = w1 in <x1, <y1, u1>>",
                   Type::tensor(a, Type::tensor(b, c)));
}

Morphism Model::lunit(const TypeRef& a) const {
  return from_pure(Type::tensor(Type::unit(), a), "let <u1, x1> = z in let * = u1 in x1", a);
}

Morphism Model::lunit_inv(const TypeRef& a) const {
  return from_pure(a, "<unit, z>", Type::tensor(Type::unit(), a));
}

Morphism Model::runit(const TypeRef& a) const {
  return from_pure(Type::tensor(a, Type::unit()), "let <x1, u1> = z in let * = u1 in x1", a);
}

Morphism Model::runit_inv(const TypeRef& a) const {
  return from_pure(a, "<z, unit>", Type::tensor(a, Type::unit()));
}

Morphism Model::swap_(const TypeRef& a, const TypeRef& b) const {
  return from_pure(Type::tensor(a, b), "let <x1, y1> = z in <y1, x1>", Type::tensor(b, a));
}

Morphism Model::L_mor(const Morphism& f) const {
  Context bc;
  bc.items.push_back({kVar, Type::bang(f.dom)});
  DerivRef c = cast_derivation(sig, f.rep, bc, f.cod);
  DerivRef p = c ? promote_derivation(sig, c) : nullptr;
  if (p) return from_deriv(p);
  // the normal form resisted an index bump; re-elaborate its erasure instead
  return from_pure_tree(Type::bang(f.dom), body_as(f, "z"), Type::bang(f.cod));
}

Morphism Model::eps(const TypeRef& a) const { return from_pure(Type::bang(a), "z", a); }

Morphism Model::delta(const TypeRef& a) const {
  return from_pure(Type::bang(a), "z", Type::bang(Type::bang(a)));
}

Morphism Model::dL(const TypeRef& a, const TypeRef& b) const {
  return from_pure(Type::tensor(Type::bang(a), Type::bang(b)),
                   "let <x1, y1> = z in <x1, y1>", Type::bang(Type::tensor(a, b)));
}

Morphism Model::dL_inv(const TypeRef& a, const TypeRef& b) const {
  return from_pure(Type::bang(Type::tensor(a, b)), "let <x1, y1> = z in <x1, y1>",
                   Type::tensor(Type::bang(a), Type::bang(b)));
}

Morphism Model::dL_unit() const {
  return from_pure(Type::unit(), "let * = z in unit", Type::bang(Type::unit()));
}

Morphism Model::dL_unit_inv() const {
  return from_pure(Type::bang(Type::unit()), "z", Type::unit());
}

Morphism Model::dup(const TypeRef& a) const {
  return from_pure(Type::bang(a), "<z, z>", Type::tensor(Type::bang(a), Type::bang(a)));
}

Morphism Model::drop(const TypeRef& a) const {
  return from_pure(Type::bang(a), "unit", Type::unit());
}

Morphism Model::T_mor(const Morphism& f) const {
  PTermRef inner =
      PTerm::let_named(kVar, PTerm::app(zvar(), PTerm::star()), erase(f.rep->term));
  PTermRef t = PTerm::lam("_", PTerm::let_unit(PTerm::bound_var(0), inner));
  return from_pure_tree(T_obj(f.dom), t, T_obj(f.cod));
}

Morphism Model::eta(const TypeRef& a) const { return from_pure(a, "lam *. z", T_obj(a)); }

Morphism Model::mu(const TypeRef& a) const {
  return from_pure(T_obj(T_obj(a)), "lam *. (z unit) unit", T_obj(a));
}

Morphism Model::strength(const TypeRef& a, const TypeRef& b) const {
  return from_pure(Type::tensor(a, T_obj(b)), "let <x1, y1> = z in lam *. <x1, y1 unit>",
                   T_obj(Type::tensor(a, b)));
}

Morphism Model::lolli_mor(const Morphism& f, const Morphism& g) const {
  PTermRef applied = PTerm::app(zvar(), body_as(f, "x1"));
  PTermRef t = PTerm::lam_named("x1", PTerm::let_named("y1", applied, body_as(g, "y1")));
  return from_pure_tree(Type::arrow(f.cod, g.dom), t, Type::arrow(f.dom, g.cod));
}

Morphism Model::app_map(const TypeRef& a, const TypeRef& b) const {
  return from_pure(Type::tensor(Type::arrow(a, b), a), "lam *. let <f1, x1> = z in f1 x1",
                   T_obj(b));
}

Morphism Model::Phi(const Morphism& f) const {
  if (f.cod->kind != TypeKind::Arrow) {
    throw std::logic_error("currying needs an arrow endpoint: " + print_type(f.cod));
  }
  const TypeRef& a = f.cod->left;
  const TypeRef& b = f.cod->right;
  PTermRef body = PTerm::let_pair_named(kVar, "y1", zvar(),
                                        PTerm::app(erase(f.rep->term), PTerm::free_var("y1")));
  PTermRef t = PTerm::lam("_", PTerm::let_unit(PTerm::bound_var(0), body));
  return from_pure_tree(Type::tensor(f.dom, a), t, T_obj(b));
}

Morphism Model::Phi_inv(const Morphism& g) const {
  if (g.dom->kind != TypeKind::Tensor || g.cod->kind != TypeKind::Arrow) {
    throw std::logic_error("uncurrying needs a pair domain and an arrow codomain");
  }
  const TypeRef& x_ = g.dom->left;
  const TypeRef& a = g.dom->right;
  const TypeRef& b = g.cod->right;
  PTermRef paired = psubst(erase(g.rep->term), kVar,
                           PTerm::pair(zvar(), PTerm::free_var("y1")));
  PTermRef t = PTerm::lam_named("y1", PTerm::app(paired, PTerm::star()));
  return from_pure_tree(x_, t, Type::arrow(a, b));
}

bool Model::mor_eq(const Morphism& f, const Morphism& g) const {
  if (!type_equal(f.dom, g.dom) || !type_equal(f.cod, g.cod)) return false;
  return ax_equal(sig, f.rep, g.rep, eqopts).outcome == EqOutcome::Equal;
}

TypeRef Theta::obj(const Model&, const std::string& name) const { return Type::constant(name); }

Morphism Theta::constant_mor(const Model& m, const std::string& name,
                             const TypeRef& sigType) const {
  TermRef t = Term::let_unit(Term::free_var("z", Type::unit()), Term::constant(name, sigType));
  Context ctx;
  ctx.items.push_back({"z", Type::unit()});
  TypingResult r = check(m.sig, ctx, t, sigType);
  if (!r) throw std::logic_error("constant map failed: " + r.error->message);
  return m.from_deriv(r.deriv);
}

}  // namespace linlam::yaq
