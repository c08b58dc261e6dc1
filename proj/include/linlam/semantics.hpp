#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linlam/category.hpp"
#include "linlam/finmodel.hpp"
#include "linlam/typing.hpp"

namespace linlam {

// Compositional interpretation of typing derivations in any model with the
// structural interface checked by check_laws. Values of type A over context
// Delta denote maps [[Delta]] -> [[A]]; computations denote maps
// [[Delta]] -> T[[A]]. A context denotes the left-nested tensor of its entry
// types, the empty context the unit object. Theta supplies the meaning of
// base types and signature constants.

template <class M, class Th>
typename M::ObjT denote_type(M& m, Th& theta, const TypeRef& t) {
  switch (t->kind) {
    case TypeKind::Const: return theta.obj(m, t->name);
    case TypeKind::Unit: return m.unit_obj();
    case TypeKind::Arrow:
      return m.lolli_obj(denote_type(m, theta, t->left), denote_type(m, theta, t->right));
    case TypeKind::Tensor:
      return m.tensor_obj(denote_type(m, theta, t->left), denote_type(m, theta, t->right));
    case TypeKind::Bang: return m.L_obj(denote_type(m, theta, t->left));
  }
  throw std::logic_error("unhandled type form");
}

template <class M, class Th>
std::function<typename M::ObjT(const TypeRef&)> type_denoter(M& m, Th& theta) {
  return [&m, &theta](const TypeRef& t) { return denote_type(m, theta, t); };
}

namespace wiring {

inline TypeRef peel_bangs(TypeRef t, int n) {
  for (int i = 0; i < n; ++i) {
    if (t->kind != TypeKind::Bang) throw std::logic_error("peel on " + print_type(t));
    t = t->left;
  }
  return t;
}

// A context slice under construction: slot i holds one context entry, the
// whole spine is the left-nested tensor of the slots (unit when empty).
// Every mutation extends the accumulated morphism from the original context
// object to the current spine.
template <class M>
struct Spine {
  using Mor = typename M::MorT;
  using Obj = typename M::ObjT;

  M& m;
  std::function<Obj(const TypeRef&)> den;
  std::vector<std::string> names;
  std::vector<TypeRef> types;
  std::vector<Obj> slots;
  Mor acc;

  Spine(M& mm, std::function<Obj(const TypeRef&)> d, const Context& ctx)
      : m(mm), den(std::move(d)), acc(mm.id(mm.unit_obj())) {
    for (const auto& b : ctx.items) {
      names.push_back(b.name);
      types.push_back(b.type);
      slots.push_back(den(b.type));
    }
    acc = m.id(obj_upto(slots.size()));
  }

  Obj obj_upto(std::size_t k) const {
    if (k == 0) return m.unit_obj();
    Obj o = slots[0];
    for (std::size_t i = 1; i < k; ++i) o = m.tensor_obj(o, slots[i]);
    return o;
  }
  Obj obj() const { return obj_upto(slots.size()); }

  // g consumes the spine of the first j slots; everything after rides along
  Mor prefix_map(std::size_t j, const Mor& g) const {
    Mor f = g;
    for (std::size_t t = j; t < slots.size(); ++t) f = m.tensor_mor(f, m.id(slots[t]));
    return f;
  }
  // g consumes slot i alone
  Mor slot_map(std::size_t i, const Mor& g) const {
    Mor at = (i == 0) ? g : m.tensor_mor(m.id(obj_upto(i)), g);
    return prefix_map(i + 1, at);
  }

  void step(const Mor& f) { acc = m.compose(acc, f); }

  void swap_adjacent(std::size_t i) {
    if (i == 0) {
      step(prefix_map(2, m.swap_(slots[0], slots[1])));
    } else {
      Obj p = obj_upto(i);
      Mor core = m.compose(m.compose(m.alpha_inv(p, slots[i], slots[i + 1]),
                                     m.tensor_mor(m.id(p), m.swap_(slots[i], slots[i + 1]))),
                           m.alpha(p, slots[i + 1], slots[i]));
      step(prefix_map(i + 2, core));
    }
    std::swap(names[i], names[i + 1]);
    std::swap(types[i], types[i + 1]);
    std::swap(slots[i], slots[i + 1]);
  }

  // duplicate the banged entry at i; the copy lands at i+1
  void duplicate(std::size_t i) {
    if (types[i]->kind != TypeKind::Bang) throw std::logic_error("duplicating a linear entry");
    Mor d = m.dup(den(types[i]->left));
    if (i == 0) {
      step(prefix_map(1, d));
    } else {
      Obj p = obj_upto(i);
      step(prefix_map(i + 1, m.compose(m.tensor_mor(m.id(p), d), m.alpha(p, slots[i], slots[i]))));
    }
    names.insert(names.begin() + static_cast<std::ptrdiff_t>(i) + 1, names[i]);
    types.insert(types.begin() + static_cast<std::ptrdiff_t>(i) + 1, types[i]);
    slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(i) + 1, slots[i]);
  }

  // discard the banged entry at i
  void discard(std::size_t i) {
    if (types[i]->kind != TypeKind::Bang) throw std::logic_error("discarding a linear entry");
    Mor d = m.drop(den(types[i]->left));
    if (slots.size() == 1) {
      step(d);
    } else if (i == 0) {
      step(prefix_map(1, d));
      slots[0] = m.unit_obj();
      step(prefix_map(2, m.lunit(slots[1])));
    } else {
      step(prefix_map(i + 1, m.compose(m.tensor_mor(m.id(obj_upto(i)), d), m.runit(obj_upto(i)))));
    }
    names.erase(names.begin() + static_cast<std::ptrdiff_t>(i));
    types.erase(types.begin() + static_cast<std::ptrdiff_t>(i));
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(i));
  }

  std::size_t index_of(const std::string& x, std::size_t from = 0) const {
    for (std::size_t i = from; i < names.size(); ++i)
      if (names[i] == x) return i;
    throw std::logic_error("no slot named " + x);
  }

  // reorder to match `want`, then reassociate into two context objects
  Mor finish_split(const std::vector<std::string>& want, std::size_t nl) {
    if (want.size() != names.size()) throw std::logic_error("split arity mismatch");
    for (std::size_t p = 0; p < want.size(); ++p) {
      std::size_t q = index_of(want[p], p);
      while (q > p) {
        swap_adjacent(q - 1);
        --q;
      }
    }
    std::size_t k = slots.size();
    std::size_t nr = k - nl;
    std::function<typename M::MorT(std::size_t)> fold = [&](std::size_t upto) -> Mor {
      // spine of first `upto` slots -> obj_upto(nl) (x) fold of slots nl..upto
      std::size_t rcount = upto - nl;
      if (rcount == 0) return m.runit_inv(obj_upto(nl));
      if (nl == 0 && rcount == upto) {
        // left side empty
        Obj right = slots[0];
        for (std::size_t i = 1; i < upto; ++i) right = m.tensor_obj(right, slots[i]);
        return m.lunit_inv(right);
      }
      if (rcount == 1) return m.id(obj_upto(upto));
      Mor f = fold(upto - 1);
      Obj sl = obj_upto(nl);
      Obj srp = slots[nl];
      for (std::size_t i = nl + 1; i + 1 < upto; ++i) srp = m.tensor_obj(srp, slots[i]);
      return m.compose(m.tensor_mor(f, m.id(slots[upto - 1])),
                       m.alpha_inv(sl, srp, slots[upto - 1]));
    };
    if (nl == 0) {
      step(m.lunit_inv(obj_upto(k)));
    } else if (nr == 0) {
      step(m.runit_inv(obj_upto(k)));
    } else {
      step(fold(k));
    }
    return acc;
  }
};

// shared-name duplication marker; context names never contain it
inline std::string tagged(const std::string& x, bool leftCopy) {
  return x + (leftCopy ? "\x01L" : "\x01R");
}

// [[ctx]] -> [[left]] (x) [[right]]: duplicate shared entries, permute, split
template <class M>
typename M::MorT wire_split(M& m, const std::function<typename M::ObjT(const TypeRef&)>& den,
                            const Context& ctx, const Context& left, const Context& right) {
  Spine<M> sp(m, den, ctx);
  for (std::size_t i = 0; i < sp.names.size(); ++i) {
    bool inL = left.has(sp.names[i]);
    bool inR = right.has(sp.names[i]);
    if (!inL && !inR) throw std::logic_error("entry " + sp.names[i] + " reaches no premise");
    if (inL && inR) {
      std::string x = sp.names[i];
      sp.duplicate(i);
      sp.names[i] = tagged(x, true);
      sp.names[i + 1] = tagged(x, false);
      ++i;
    }
  }
  std::vector<std::string> want;
  for (const auto& b : left.items) want.push_back(right.has(b.name) ? tagged(b.name, true) : b.name);
  for (const auto& b : right.items)
    want.push_back(left.has(b.name) ? tagged(b.name, false) : b.name);
  return sp.finish_split(want, left.items.size());
}

// [[Delta]] -> L[[Delta]] over a fully banged context: dig each entry, then
// merge the spine left to right
template <class M>
typename M::MorT promote_context(M& m, const std::function<typename M::ObjT(const TypeRef&)>& den,
                                 const Context& ctx) {
  using Obj = typename M::ObjT;
  if (ctx.empty()) return m.dL_unit();
  Spine<M> sp(m, den, ctx);
  std::vector<Obj> inner; // slot i is L inner[i] after the digging pass
  for (std::size_t i = 0; i < sp.slots.size(); ++i) {
    if (sp.types[i]->kind != TypeKind::Bang) throw std::logic_error("promoting a linear entry");
    Obj in = den(sp.types[i]->left);
    sp.step(sp.slot_map(i, m.delta(in)));
    sp.slots[i] = m.L_obj(sp.slots[i]);
    inner.push_back(den(sp.types[i]));
  }
  while (sp.slots.size() > 1) {
    typename M::MorT merge = sp.prefix_map(2, m.dL(inner[0], inner[1]));
    sp.step(merge);
    inner[0] = m.tensor_obj(inner[0], inner[1]);
    inner.erase(inner.begin() + 1);
    sp.slots[0] = m.L_obj(inner[0]);
    sp.slots.erase(sp.slots.begin() + 1);
    sp.names.erase(sp.names.begin() + 1);
    sp.types.erase(sp.types.begin() + 1);
  }
  return sp.acc;
}

// L^n A (x) L^n B -> L^n (A (x) B)
template <class M>
typename M::MorT dL_pow(M& m, int n, const typename M::ObjT& a, const typename M::ObjT& b) {
  if (n == 0) return m.id(m.tensor_obj(a, b));
  typename M::ObjT la = a, lb = b;
  for (int i = 1; i < n; ++i) {
    la = m.L_obj(la);
    lb = m.L_obj(lb);
  }
  return m.compose(m.dL(la, lb), m.L_mor(dL_pow(m, n - 1, a, b)));
}

template <class M>
typename M::MorT dL_pow_inv(M& m, int n, const typename M::ObjT& a, const typename M::ObjT& b) {
  if (n == 0) return m.id(m.tensor_obj(a, b));
  typename M::ObjT la = a, lb = b;
  for (int i = 1; i < n; ++i) {
    la = m.L_obj(la);
    lb = m.L_obj(lb);
  }
  return m.compose(m.L_mor(dL_pow_inv(m, n - 1, a, b)), m.dL_inv(la, lb));
}

// unit -> L^n unit
template <class M>
typename M::MorT star_chain(M& m, int n) {
  if (n == 0) return m.id(m.unit_obj());
  return m.compose(m.dL_unit(), m.L_mor(star_chain(m, n - 1)));
}

} // namespace wiring

template <class M, class Th>
typename M::MorT interpret_comp(M& m, Th& theta, const Signature& sig, const DerivRef& d);

namespace wiring {

inline bool value_node(const DerivRef& d) {
  if (d->rule == "var" || d->rule == "const" || d->rule == "unit" || d->rule == "lam" ||
      d->rule == "lam-bang")
    return true;
  if (d->rule == "pair") return value_node(d->premises[0]) && value_node(d->premises[1]);
  return false;
}

} // namespace wiring

template <class M, class Th>
typename M::MorT interpret_value(M& m, Th& theta, const Signature& sig, const DerivRef& d) {
  using wiring::Spine;
  auto den = type_denoter(m, theta);

  if (d->rule == "var") {
    const std::string& x = d->term->name;
    TypeRef declared = *d->ctx.lookup(x);
    Spine<M> sp(m, den, d->ctx);
    while (sp.slots.size() > 1 || (sp.slots.size() == 1 && sp.names[0] != x)) {
      bool dropped = false;
      for (std::size_t i = sp.slots.size(); i-- > 0;) {
        if (sp.names[i] != x) {
          sp.discard(i);
          dropped = true;
          break;
        }
      }
      if (!dropped) throw std::logic_error("variable slot not found");
    }
    return m.compose(sp.acc, canonical_coercion(m, den, declared, d->type));
  }

  if (d->rule == "const") {
    TypeRef sigType = sig.at(d->term->name);
    Spine<M> sp(m, den, d->ctx);
    while (!sp.slots.empty()) sp.discard(sp.slots.size() - 1);
    auto c = theta.constant(m, d->term->name, sigType, den);
    return m.compose(m.compose(sp.acc, c), canonical_coercion(m, den, sigType, d->type));
  }

  if (d->rule == "unit") {
    Spine<M> sp(m, den, d->ctx);
    while (!sp.slots.empty()) sp.discard(sp.slots.size() - 1);
    return m.compose(sp.acc, wiring::star_chain(m, d->term->n));
  }

  if (d->rule == "lam" || d->rule == "lam-bang") {
    const DerivRef& p = d->premises[0];
    typename M::MorT body = interpret_comp(m, theta, sig, p);
    typename M::ObjT a = den(d->term->ann);
    typename M::MorT g = (p->ctx.size() == 1) ? m.compose(m.lunit(a), body) : body;
    typename M::MorT f = m.Phi_inv(g);
    if (d->rule == "lam") return f;
    TypeRef arrow = Type::arrow(d->term->ann, p->type);
    typename M::MorT promoted =
        m.compose(wiring::promote_context(m, den, d->ctx), m.L_mor(f));
    return m.compose(promoted, canonical_coercion(m, den, Type::bang(arrow), d->type));
  }

  if (d->rule == "pair") {
    const DerivRef& pl = d->premises[0];
    const DerivRef& pr = d->premises[1];
    int n = d->term->n;
    typename M::MorT w = wiring::wire_split(m, den, d->ctx, pl->ctx, pr->ctx);
    typename M::MorT both =
        m.tensor_mor(interpret_value(m, theta, sig, pl), interpret_value(m, theta, sig, pr));
    typename M::ObjT al = den(wiring::peel_bangs(pl->type, n));
    typename M::ObjT ar = den(wiring::peel_bangs(pr->type, n));
    return m.compose(m.compose(w, both), wiring::dL_pow(m, n, al, ar));
  }

  throw std::logic_error("not a value derivation: " + d->rule);
}

template <class M, class Th>
typename M::MorT interpret_comp(M& m, Th& theta, const Signature& sig, const DerivRef& d) {
  auto den = type_denoter(m, theta);

  if (wiring::value_node(d)) {
    return m.compose(interpret_value(m, theta, sig, d), m.eta(den(d->type)));
  }

  if (d->rule == "app") {
    const DerivRef& pf = d->premises[0];
    const DerivRef& pa = d->premises[1];
    typename M::MorT w = wiring::wire_split(m, den, d->ctx, pf->ctx, pa->ctx);
    typename M::MorT both =
        m.tensor_mor(interpret_comp(m, theta, sig, pf), interpret_comp(m, theta, sig, pa));
    typename M::ObjT fo = den(pf->type);
    typename M::ObjT ao = den(pf->type->left);
    typename M::ObjT bo = den(pf->type->right);
    typename M::MorT run = kstar(m, m.app_map(ao, bo), bo);
    return m.compose(m.compose(m.compose(w, both), Psi1(m, fo, ao)), run);
  }

  if (d->rule == "pair") {
    const DerivRef& pl = d->premises[0];
    const DerivRef& pr = d->premises[1];
    int n = d->term->n;
    typename M::MorT w = wiring::wire_split(m, den, d->ctx, pl->ctx, pr->ctx);
    typename M::MorT both =
        m.tensor_mor(interpret_comp(m, theta, sig, pl), interpret_comp(m, theta, sig, pr));
    typename M::ObjT tl = den(pl->type);
    typename M::ObjT tr = den(pr->type);
    typename M::ObjT al = den(wiring::peel_bangs(pl->type, n));
    typename M::ObjT ar = den(wiring::peel_bangs(pr->type, n));
    return m.compose(m.compose(m.compose(w, both), Psi1(m, tl, tr)),
                     m.T_mor(wiring::dL_pow(m, n, al, ar)));
  }

  if (d->rule == "pair-elim") {
    const DerivRef& ps = d->premises[0];
    const DerivRef& pb = d->premises[1];
    int n = d->term->n;
    Context base(std::vector<Binding>(pb->ctx.items.begin(), pb->ctx.items.end() - 2));
    typename M::MorT w = wiring::wire_split(m, den, d->ctx, base, ps->ctx);
    wiring::Spine<M> basesp(m, den, base);
    typename M::ObjT baseObj = basesp.obj();
    typename M::MorT carry =
        m.tensor_mor(m.id(baseObj), interpret_comp(m, theta, sig, ps));
    typename M::MorT st = m.strength(baseObj, den(ps->type));
    typename M::ObjT xa = den(Type::bangN(d->term->ann, n));
    typename M::ObjT yb = den(Type::bangN(d->term->ann2, n));
    typename M::MorT sort = m.tensor_mor(
        m.id(baseObj), wiring::dL_pow_inv(m, n, den(d->term->ann), den(d->term->ann2)));
    typename M::MorT shape = base.empty() ? m.lunit(m.tensor_obj(xa, yb))
                                          : m.alpha(baseObj, xa, yb);
    typename M::MorT innerAdjust = m.T_mor(m.compose(sort, shape));
    typename M::MorT body = interpret_comp(m, theta, sig, pb);
    return m.compose(m.compose(m.compose(m.compose(w, carry), st), innerAdjust),
                     kstar(m, body, den(d->type)));
  }

  if (d->rule == "unit-elim") {
    const DerivRef& ps = d->premises[0];
    const DerivRef& pb = d->premises[1];
    typename M::MorT w = wiring::wire_split(m, den, d->ctx, pb->ctx, ps->ctx);
    wiring::Spine<M> basesp(m, den, pb->ctx);
    typename M::ObjT baseObj = basesp.obj();
    typename M::MorT carry = m.tensor_mor(m.id(baseObj), interpret_comp(m, theta, sig, ps));
    typename M::MorT st = m.strength(baseObj, den(ps->type));
    typename M::MorT body = interpret_comp(m, theta, sig, pb);
    return m.compose(m.compose(m.compose(w, carry), m.compose(st, m.T_mor(m.runit(baseObj)))),
                     kstar(m, body, den(d->type)));
  }

  if (d->rule == "if")
    throw std::logic_error("conditionals step operationally and have no map here");
  throw std::logic_error("unhandled derivation rule: " + d->rule);
}

// convenience: type check, then interpret
template <class M, class Th>
typename M::MorT denote_comp(M& m, Th& theta, const Signature& sig, const Judgment& j,
                             SplitPolicy policy = SplitPolicy::CopyAll) {
  TypingResult r = check(sig, j.ctx, j.term, j.type, policy);
  if (!r) {
    throw std::runtime_error("denoting an untypeable judgment: " +
                             (r.error ? r.error->message : std::string("unknown")));
  }
  return interpret_comp(m, theta, sig, r.deriv);
}

template <class M, class Th>
typename M::MorT denote_value(M& m, Th& theta, const Signature& sig, const Judgment& j,
                              SplitPolicy policy = SplitPolicy::CopyAll) {
  TypingResult r = check(sig, j.ctx, j.term, j.type, policy);
  if (!r) {
    throw std::runtime_error("denoting an untypeable judgment: " +
                             (r.error ? r.error->message : std::string("unknown")));
  }
  return interpret_value(m, theta, sig, r.deriv);
}

template <class M, class Th>
typename M::ObjT denote_context(M& m, Th& theta, const Context& ctx) {
  if (ctx.empty()) return m.unit_obj();
  typename M::ObjT o = denote_type(m, theta, ctx.items[0].type);
  for (std::size_t i = 1; i < ctx.items.size(); ++i)
    o = m.tensor_obj(o, denote_type(m, theta, ctx.items[i].type));
  return o;
}

// base types become small carriers, constants become fixed elements chosen by
// a name hash; deterministic across runs
struct FinTheta {
  int default_card = 2;
  std::map<std::string, int> cards;

  fin::ObjRef obj(fin::Model&, const std::string& name) const {
    auto it = cards.find(name);
    return fin::Obj::base(it != cards.end() ? it->second : default_card);
  }
  fin::Mor constant(fin::Model& m, const std::string& name, const TypeRef& sigType,
                    const std::function<fin::ObjRef(const TypeRef&)>& den) const {
    fin::ObjRef cod = den(sigType);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : name) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    fin::ElRef el = fin::seeded_element(cod, h);
    return fin::Mor{m.unit_obj(), cod, [el](const fin::ElRef&) { return el; }};
  }
};

} // namespace linlam
