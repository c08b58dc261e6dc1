#include "linlam/typing.hpp"

#include <algorithm>
#include <set>

namespace linlam {

// ---------------------------------------------------------------------------
// contexts

const TypeRef* Context::lookup(const std::string& x) const {
  for (const auto& b : items) {
    if (b.name == x) return &b.type;
  }
  return nullptr;
}

bool Context::all_banged() const {
  for (const auto& b : items) {
    if (!is_banged(b.type)) return false;
  }
  return true;
}

Context Context::extend(const std::string& x, TypeRef t) const {
  Context c(*this);
  c.items.push_back({x, std::move(t)});
  return c;
}

Context Context::restrict_to(const std::vector<std::string>& names) const {
  Context c;
  for (const auto& b : items) {
    if (std::find(names.begin(), names.end(), b.name) != names.end()) c.items.push_back(b);
  }
  return c;
}

std::string Context::fresh_name(const std::string& hint,
                                const std::vector<std::string>& alsoAvoid) const {
  auto taken = [&](const std::string& s) {
    if (has(s)) return true;
    return std::find(alsoAvoid.begin(), alsoAvoid.end(), s) != alsoAvoid.end();
  };
  std::string base = hint.empty() ? "x" : hint;
  if (!taken(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!taken(cand)) return cand;
  }
}

bool context_equal(const Context& a, const Context& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].name != b.items[i].name) return false;
    if (!type_equal(a.items[i].type, b.items[i].type)) return false;
  }
  return true;
}

bool context_subtype(const Context& a, const Context& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].name != b.items[i].name) return false;
    if (!is_subtype(a.items[i].type, b.items[i].type)) return false;
  }
  return true;
}

std::string print_context(const Context& c) {
  std::string out;
  for (std::size_t i = 0; i < c.items.size(); ++i) {
    if (i) out += ", ";
    out += c.items[i].name + " : " + print_type(c.items[i].type);
  }
  return out;
}

bool signature_ok(const Signature& sig) {
  for (const auto& [name, ty] : sig) {
    (void)name;
    if (!is_banged(ty)) return false;
  }
  return true;
}

std::string print_judgment(const Judgment& j) {
  std::string out = print_context(j.ctx);
  if (!out.empty()) out += " ";
  out += "|- " + print_term(j.term) + " : " + print_type(j.type);
  return out;
}

const char* type_error_kind_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "unbound-variable";
    case TypeErrorKind::UnknownConstant: return "unknown-constant";
    case TypeErrorKind::LinearVariableReused: return "linear-variable-reused";
    case TypeErrorKind::LinearVariableDropped: return "linear-variable-dropped";
    case TypeErrorKind::SubtypeFailure: return "subtype-failure";
    case TypeErrorKind::NonBangedContext: return "non-banged-context";
    case TypeErrorKind::AnnotationMismatch: return "annotation-mismatch";
    case TypeErrorKind::ShapeMismatch: return "shape-mismatch";
    case TypeErrorKind::InternalError: return "internal-error";
  }
  return "?";
}

namespace {

TypeRef drop_bangs(TypeRef t, int k) {
  while (k-- > 0) {
    if (t->kind != TypeKind::Bang) return nullptr;
    t = t->left;
  }
  return t;
}

std::string pick_fresh(const std::string& hint, const std::vector<std::string>& avoid) {
  auto taken = [&](const std::string& s) {
    return std::find(avoid.begin(), avoid.end(), s) != avoid.end();
  };
  std::string base = hint.empty() ? "x" : hint;
  if (!taken(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!taken(cand)) return cand;
  }
}

std::vector<std::string> avoid_names(const Context& ctx, const TermRef& t) {
  std::vector<std::string> v;
  for (const auto& b : ctx.items) v.push_back(b.name);
  for (const auto& fo : free_vars(t)) v.push_back(fo.name);
  return v;
}

DerivRef mk(std::string rule, Context ctx, TermRef term, TypeRef type,
            std::vector<DerivRef> premises = {}, SubDerivRef coercion = nullptr) {
  auto d = std::make_shared<Derivation>();
  d->rule = std::move(rule);
  d->ctx = std::move(ctx);
  d->term = std::move(term);
  d->type = std::move(type);
  d->premises = std::move(premises);
  d->coercion = std::move(coercion);
  return d;
}

std::set<std::string> fv_set(const TermRef& t) {
  std::set<std::string> s;
  for (const auto& fo : free_vars(t)) s.insert(fo.name);
  return s;
}

// ---------------------------------------------------------------------------
// synthesis

struct Synther {
  const Signature& sig;
  SplitPolicy policy;
  std::optional<TypeError> err;

  DerivRef fail(TypeErrorKind k, std::string msg) {
    if (!err) err = TypeError{k, std::move(msg)};
    return nullptr;
  }

  bool split(const Context& ctx, const std::vector<std::set<std::string>>& uses,
             std::vector<Context>& parts) {
    std::size_t k = uses.size();
    parts.assign(k, Context{});
    for (const auto& b : ctx.items) {
      std::vector<std::size_t> in;
      for (std::size_t i = 0; i < k; ++i) {
        if (uses[i].count(b.name)) in.push_back(i);
      }
      if (is_banged(b.type)) {
        if (policy == SplitPolicy::CopyAll) {
          for (std::size_t i = 0; i < k; ++i) parts[i].items.push_back(b);
        } else if (!in.empty()) {
          for (std::size_t i : in) parts[i].items.push_back(b);
        } else {
          parts[policy == SplitPolicy::DummiesLeft ? 0 : k - 1].items.push_back(b);
        }
      } else {
        if (in.empty()) {
          fail(TypeErrorKind::LinearVariableDropped, "linear variable " + b.name + " is not used");
          return false;
        }
        if (in.size() > 1) {
          fail(TypeErrorKind::LinearVariableReused,
               "linear variable " + b.name + " is used on both sides of a split");
          return false;
        }
        parts[in[0]].items.push_back(b);
      }
    }
    return true;
  }

  // leaves absorb any banged remainder; a linear leftover is an error
  bool others_banged(const Context& ctx, const std::string& except) {
    for (const auto& b : ctx.items) {
      if (b.name == except) continue;
      if (!is_banged(b.type)) {
        fail(TypeErrorKind::LinearVariableDropped,
             "linear variable " + b.name + " is not used");
        return false;
      }
    }
    return true;
  }

  DerivRef go(const Context& ctx, const TermRef& t) {
    switch (t->kind) {
      case TermKind::BoundVar:
        return fail(TypeErrorKind::InternalError, "unopened binder index in synthesis");

      case TermKind::FreeVar: {
        const TypeRef* a = ctx.lookup(t->name);
        if (!a) return fail(TypeErrorKind::UnboundVariable, "unbound variable " + t->name);
        if (!others_banged(ctx, t->name)) return nullptr;
        if (!is_subtype(*a, t->ann)) {
          return fail(TypeErrorKind::SubtypeFailure,
                      "variable " + t->name + " : " + print_type(*a) +
                          " cannot be used at " + print_type(t->ann));
        }
        return mk("var", ctx, t, t->ann, {}, derive_subtype(*a, t->ann));
      }

      case TermKind::ConstTerm: {
        auto it = sig.find(t->name);
        if (it == sig.end())
          return fail(TypeErrorKind::UnknownConstant, "unknown constant " + t->name);
        if (!others_banged(ctx, "")) return nullptr;
        if (!is_subtype(it->second, t->ann)) {
          return fail(TypeErrorKind::SubtypeFailure,
                      "constant " + t->name + " : " + print_type(it->second) +
                          " cannot be used at " + print_type(t->ann));
        }
        return mk("const", ctx, t, t->ann, {}, derive_subtype(it->second, t->ann));
      }

      case TermKind::Star: {
        if (!others_banged(ctx, "")) return nullptr;
        return mk("unit", ctx, t, Type::bangN(Type::unit(), t->n));
      }

      case TermKind::Lam: {
        if (t->n >= 1 && !ctx.all_banged()) {
          return fail(TypeErrorKind::NonBangedContext,
                      "banged function body needs a fully banged context");
        }
        std::string x = pick_fresh(t->hint, avoid_names(ctx, t));
        DerivRef p = go(ctx.extend(x, t->ann), open_term(t->a, {x}));
        if (!p) return nullptr;
        TypeRef arrow = Type::arrow(t->ann, p->type);
        if (t->n == 0) return mk("lam", ctx, t, arrow, {p});
        return mk("lam-bang", ctx, t, Type::bangN(arrow, t->n), {p});
      }

      case TermKind::App: {
        std::vector<Context> parts;
        if (!split(ctx, {fv_set(t->a), fv_set(t->b)}, parts)) return nullptr;
        DerivRef pf = go(parts[0], t->a);
        if (!pf) return nullptr;
        if (pf->type->kind != TypeKind::Arrow) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "applied term has type " + print_type(pf->type) + ", not an arrow");
        }
        DerivRef pa = go(parts[1], t->b);
        if (!pa) return nullptr;
        if (!type_equal(pa->type, pf->type->left)) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "argument has type " + print_type(pa->type) + ", expected " +
                          print_type(pf->type->left));
        }
        return mk("app", ctx, t, pf->type->right, {pf, pa});
      }

      case TermKind::Pair: {
        std::vector<Context> parts;
        if (!split(ctx, {fv_set(t->a), fv_set(t->b)}, parts)) return nullptr;
        DerivRef pl = go(parts[0], t->a);
        if (!pl) return nullptr;
        DerivRef pr = go(parts[1], t->b);
        if (!pr) return nullptr;
        TypeRef al = drop_bangs(pl->type, t->n);
        TypeRef ar = drop_bangs(pr->type, t->n);
        if (!al || !ar) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "pair at index " + std::to_string(t->n) +
                          " needs both components banged that deep, got " +
                          print_type(pl->type) + " and " + print_type(pr->type));
        }
        return mk("pair", ctx, t, Type::bangN(Type::tensor(al, ar), t->n), {pl, pr});
      }

      case TermKind::LetPair: {
        std::vector<Context> parts;
        if (!split(ctx, {fv_set(t->a), fv_set(t->b)}, parts)) return nullptr;
        DerivRef ps = go(parts[0], t->a);
        if (!ps) return nullptr;
        StrippedType st = strip(ps->type);
        if (st.core->kind != TypeKind::Tensor || st.bangs != t->n) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "pair elimination at index " + std::to_string(t->n) +
                          " does not fit subject type " + print_type(ps->type));
        }
        if (!type_equal(t->ann, st.core->left) || !type_equal(t->ann2, st.core->right)) {
          return fail(TypeErrorKind::AnnotationMismatch,
                      "pair elimination binders are annotated " + print_type(t->ann) + ", " +
                          print_type(t->ann2) + " but the subject splits as " +
                          print_type(st.core->left) + ", " + print_type(st.core->right));
        }
        std::vector<std::string> avoid = avoid_names(ctx, t);
        std::string x = pick_fresh(t->hint, avoid);
        avoid.push_back(x);
        std::string y = pick_fresh(t->hint2.empty() ? "y" : t->hint2, avoid);
        Context inner = parts[1]
                            .extend(x, Type::bangN(t->ann, t->n))
                            .extend(y, Type::bangN(t->ann2, t->n));
        DerivRef pb = go(inner, open_term(t->b, {x, y}));
        if (!pb) return nullptr;
        return mk("pair-elim", ctx, t, pb->type, {ps, pb});
      }

      case TermKind::LetUnit: {
        std::vector<Context> parts;
        if (!split(ctx, {fv_set(t->a), fv_set(t->b)}, parts)) return nullptr;
        DerivRef ps = go(parts[0], t->a);
        if (!ps) return nullptr;
        if (ps->type->kind != TypeKind::Unit) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "unit elimination subject has type " + print_type(ps->type));
        }
        DerivRef pb = go(parts[1], t->b);
        if (!pb) return nullptr;
        return mk("unit-elim", ctx, t, pb->type, {ps, pb});
      }

      case TermKind::If: {
        std::set<std::string> branchUses = fv_set(t->b);
        for (const auto& s : fv_set(t->c)) branchUses.insert(s);
        std::vector<Context> parts;
        if (!split(ctx, {fv_set(t->a), branchUses}, parts)) return nullptr;
        DerivRef pc = go(parts[0], t->a);
        if (!pc) return nullptr;
        if (!type_equal(pc->type, Type::constant("bit"))) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "branch condition has type " + print_type(pc->type) + ", expected bit");
        }
        DerivRef pt = go(parts[1], t->b);
        if (!pt) return nullptr;
        DerivRef pe = go(parts[1], t->c);
        if (!pe) return nullptr;
        if (!type_equal(pt->type, pe->type)) {
          return fail(TypeErrorKind::ShapeMismatch,
                      "branches have different types " + print_type(pt->type) + " and " +
                          print_type(pe->type));
        }
        return mk("if", ctx, t, pt->type, {pc, pt, pe});
      }
    }
    return fail(TypeErrorKind::InternalError, "unhandled term form");
  }
};

}  // namespace

TypingResult synth(const Signature& sig, const Context& ctx, const TermRef& t,
                   SplitPolicy policy) {
  Synther s{sig, policy, std::nullopt};
  DerivRef d = s.go(ctx, t);
  if (!d) {
    return {nullptr, s.err ? s.err
                           : std::optional<TypeError>(
                                 TypeError{TypeErrorKind::InternalError, "no error recorded"})};
  }
  return {d, std::nullopt};
}

TypingResult check(const Signature& sig, const Context& ctx, const TermRef& t, const TypeRef& goal,
                   SplitPolicy policy) {
  TypingResult r = synth(sig, ctx, t, policy);
  if (!r) return r;
  if (!type_equal(r.deriv->type, goal)) {
    return {nullptr,
            TypeError{TypeErrorKind::AnnotationMismatch,
                      "term has type " + print_type(r.deriv->type) + ", stated type is " +
                          print_type(goal)}};
  }
  return r;
}

// ---------------------------------------------------------------------------
// replay

namespace {

struct Replayer {
  const Signature& sig;
  std::string why;

  bool bad(const std::string& msg) {
    if (why.empty()) why = msg;
    return false;
  }

  bool names_unique(const Context& c) {
    std::set<std::string> seen;
    for (const auto& b : c.items) {
      if (!seen.insert(b.name).second) return false;
    }
    return true;
  }

  // every part binding comes from ctx (same type), order preserved; linear
  // entries in exactly one part, banged entries in at least one
  bool valid_split(const Context& ctx, const std::vector<const Context*>& parts) {
    for (const Context* p : parts) {
      std::size_t at = 0;
      for (const auto& b : p->items) {
        while (at < ctx.items.size() &&
               !(ctx.items[at].name == b.name && type_equal(ctx.items[at].type, b.type))) {
          ++at;
        }
        if (at == ctx.items.size()) return bad("premise context entry " + b.name + " misplaced");
        ++at;
      }
    }
    for (const auto& b : ctx.items) {
      std::size_t cnt = 0;
      for (const Context* p : parts) {
        if (p->lookup(b.name)) ++cnt;
      }
      if (is_banged(b.type)) {
        if (cnt == 0) return bad("banged variable " + b.name + " vanished at a split");
      } else {
        if (cnt != 1) return bad("linear variable " + b.name + " routed to " +
                                 std::to_string(cnt) + " premises");
      }
    }
    return true;
  }

  bool leaf_others_banged(const Context& ctx, const std::string& except) {
    for (const auto& b : ctx.items) {
      if (b.name == except) continue;
      if (!is_banged(b.type)) return bad("linear variable " + b.name + " absorbed at a leaf");
    }
    return true;
  }

  bool coercion_ok(const SubDerivRef& c, const TypeRef& from, const TypeRef& to) {
    if (!c) return bad("missing coercion at a leaf");
    if (!type_equal(c->lhs, from) || !type_equal(c->rhs, to)) return bad("coercion endpoints");
    if (!valid_subtype_derivation(c)) return bad("invalid coercion derivation");
    return true;
  }

  // premise under binders: context must be base ++ given bindings
  bool strip_binders(const Context& full, std::size_t k, Context& base) {
    if (full.items.size() < k) return false;
    base.items.assign(full.items.begin(), full.items.end() - static_cast<long>(k));
    return true;
  }

  bool go(const DerivRef& d) {
    if (!d || !d->term || !d->type) return bad("malformed node");
    if (!names_unique(d->ctx)) return bad("duplicate context names");
    const TermRef& t = d->term;

    if (d->rule == "var") {
      if (t->kind != TermKind::FreeVar || !d->premises.empty()) return bad("var node shape");
      const TypeRef* a = d->ctx.lookup(t->name);
      if (!a) return bad("var not in context");
      if (!type_equal(t->ann, d->type)) return bad("var annotation vs conclusion");
      if (!is_subtype(*a, d->type)) return bad("var coercion unsound");
      if (!coercion_ok(d->coercion, *a, d->type)) return false;
      return leaf_others_banged(d->ctx, t->name);
    }
    if (d->rule == "const") {
      if (t->kind != TermKind::ConstTerm || !d->premises.empty()) return bad("const node shape");
      auto it = sig.find(t->name);
      if (it == sig.end()) return bad("constant not in signature");
      if (!type_equal(t->ann, d->type)) return bad("const annotation vs conclusion");
      if (!is_subtype(it->second, d->type)) return bad("const coercion unsound");
      if (!coercion_ok(d->coercion, it->second, d->type)) return false;
      return leaf_others_banged(d->ctx, "");
    }
    if (d->rule == "unit") {
      if (t->kind != TermKind::Star || !d->premises.empty()) return bad("unit node shape");
      if (!type_equal(d->type, Type::bangN(Type::unit(), t->n))) return bad("unit type");
      return leaf_others_banged(d->ctx, "");
    }
    if (d->rule == "lam" || d->rule == "lam-bang") {
      if (t->kind != TermKind::Lam || d->premises.size() != 1) return bad("lam node shape");
      if (d->rule == "lam") {
        if (t->n != 0) return bad("lam rule with banged index");
      } else {
        if (t->n < 1) return bad("lam-bang rule with index 0");
        if (!d->ctx.all_banged()) return bad("lam-bang over a non-banged context");
      }
      const DerivRef& p = d->premises[0];
      Context base;
      if (!strip_binders(p->ctx, 1, base) || !context_equal(base, d->ctx)) {
        return bad("lam premise context");
      }
      const Binding& bx = p->ctx.items.back();
      if (!type_equal(bx.type, t->ann)) return bad("lam binder type");
      if (d->ctx.has(bx.name)) return bad("lam binder shadows the context");
      if (!alpha_eq(p->term, open_term(t->a, {bx.name}))) return bad("lam premise term");
      TypeRef want = Type::bangN(Type::arrow(t->ann, p->type), t->n);
      if (!type_equal(d->type, want)) return bad("lam conclusion type");
      return go(p);
    }
    if (d->rule == "app") {
      if (t->kind != TermKind::App || d->premises.size() != 2) return bad("app node shape");
      const DerivRef& pf = d->premises[0];
      const DerivRef& pa = d->premises[1];
      if (!alpha_eq(pf->term, t->a) || !alpha_eq(pa->term, t->b)) return bad("app premise terms");
      if (pf->type->kind != TypeKind::Arrow) return bad("app function type");
      if (!type_equal(pa->type, pf->type->left)) return bad("app argument type");
      if (!type_equal(d->type, pf->type->right)) return bad("app conclusion type");
      if (!valid_split(d->ctx, {&pf->ctx, &pa->ctx})) return false;
      return go(pf) && go(pa);
    }
    if (d->rule == "pair") {
      if (t->kind != TermKind::Pair || d->premises.size() != 2) return bad("pair node shape");
      const DerivRef& pl = d->premises[0];
      const DerivRef& pr = d->premises[1];
      if (!alpha_eq(pl->term, t->a) || !alpha_eq(pr->term, t->b)) return bad("pair premise terms");
      TypeRef al = drop_bangs(pl->type, t->n);
      TypeRef ar = drop_bangs(pr->type, t->n);
      if (!al || !ar) return bad("pair component bangs");
      if (!type_equal(d->type, Type::bangN(Type::tensor(al, ar), t->n))) {
        return bad("pair conclusion type");
      }
      if (!valid_split(d->ctx, {&pl->ctx, &pr->ctx})) return false;
      return go(pl) && go(pr);
    }
    if (d->rule == "pair-elim") {
      if (t->kind != TermKind::LetPair || d->premises.size() != 2) return bad("pair-elim shape");
      const DerivRef& ps = d->premises[0];
      const DerivRef& pb = d->premises[1];
      if (!alpha_eq(ps->term, t->a)) return bad("pair-elim subject term");
      StrippedType st = strip(ps->type);
      if (st.core->kind != TypeKind::Tensor || st.bangs != t->n) return bad("pair-elim subject type");
      if (!type_equal(t->ann, st.core->left) || !type_equal(t->ann2, st.core->right)) {
        return bad("pair-elim binder annotations");
      }
      Context base;
      if (!strip_binders(pb->ctx, 2, base)) return bad("pair-elim body context");
      const Binding& bx = pb->ctx.items[pb->ctx.items.size() - 2];
      const Binding& by = pb->ctx.items.back();
      if (!type_equal(bx.type, Type::bangN(t->ann, t->n)) ||
          !type_equal(by.type, Type::bangN(t->ann2, t->n))) {
        return bad("pair-elim binder types");
      }
      if (base.has(bx.name) || base.has(by.name)) return bad("pair-elim binder shadowing");
      if (!alpha_eq(pb->term, open_term(t->b, {bx.name, by.name}))) return bad("pair-elim body");
      if (!type_equal(d->type, pb->type)) return bad("pair-elim conclusion type");
      if (!valid_split(d->ctx, {&ps->ctx, &base})) return false;
      return go(ps) && go(pb);
    }
    if (d->rule == "unit-elim") {
      if (t->kind != TermKind::LetUnit || d->premises.size() != 2) return bad("unit-elim shape");
      const DerivRef& ps = d->premises[0];
      const DerivRef& pb = d->premises[1];
      if (!alpha_eq(ps->term, t->a) || !alpha_eq(pb->term, t->b)) return bad("unit-elim terms");
      if (ps->type->kind != TypeKind::Unit) return bad("unit-elim subject type");
      if (!type_equal(d->type, pb->type)) return bad("unit-elim conclusion type");
      if (!valid_split(d->ctx, {&ps->ctx, &pb->ctx})) return false;
      return go(ps) && go(pb);
    }
    if (d->rule == "if") {
      if (t->kind != TermKind::If || d->premises.size() != 3) return bad("if node shape");
      const DerivRef& pc = d->premises[0];
      const DerivRef& pt = d->premises[1];
      const DerivRef& pe = d->premises[2];
      if (!alpha_eq(pc->term, t->a) || !alpha_eq(pt->term, t->b) || !alpha_eq(pe->term, t->c)) {
        return bad("if premise terms");
      }
      if (!type_equal(pc->type, Type::constant("bit"))) return bad("if condition type");
      if (!context_equal(pt->ctx, pe->ctx)) return bad("if branch contexts differ");
      if (!type_equal(pt->type, pe->type) || !type_equal(d->type, pt->type)) {
        return bad("if branch types");
      }
      if (!valid_split(d->ctx, {&pc->ctx, &pt->ctx})) return false;
      return go(pc) && go(pt) && go(pe);
    }
    return bad("unknown rule " + d->rule);
  }
};

}  // namespace

bool replay(const Signature& sig, const DerivRef& d, std::string* why) {
  Replayer r{sig, {}};
  bool ok = r.go(d);
  if (!ok && why) *why = r.why;
  return ok;
}

// ---------------------------------------------------------------------------
// cast

namespace {

struct Caster {
  const Signature& sig;
  std::string why;

  DerivRef bad(const std::string& msg) {
    if (why.empty()) why = msg;
    return nullptr;
  }

  DerivRef go(const DerivRef& d, const Context& nctx, const TypeRef& nty) {
    if (d->rule == "var") {
      const TypeRef* a = nctx.lookup(d->term->name);
      if (!a) return bad("cast lost a context variable");
      SubDerivRef c = derive_subtype(*a, nty);
      if (!c) return bad("cast broke a leaf coercion");
      return mk("var", nctx, Term::free_var(d->term->name, nty), nty, {}, c);
    }
    if (d->rule == "const") {
      auto it = sig.find(d->term->name);
      if (it == sig.end()) return bad("constant not in signature");
      SubDerivRef c = derive_subtype(it->second, nty);
      if (!c) return bad("cast broke a constant coercion");
      return mk("const", nctx, Term::constant(d->term->name, nty), nty, {}, c);
    }
    if (d->rule == "unit") {
      StrippedType st = strip(nty);
      if (st.core->kind != TypeKind::Unit) return bad("cast target of a unit is not banged unit");
      return mk("unit", nctx, Term::star(st.bangs), nty);
    }
    if (d->rule == "lam" || d->rule == "lam-bang") {
      StrippedType st = strip(nty);
      if (st.core->kind != TypeKind::Arrow) return bad("cast target of a function is not an arrow");
      const TypeRef& na = st.core->left;
      const TypeRef& nb = st.core->right;
      const DerivRef& p = d->premises[0];
      const std::string& x = p->ctx.items.back().name;
      DerivRef np = go(p, nctx.extend(x, na), nb);
      if (!np) return nullptr;
      TermRef body = close_term(np->term, {x});
      TermRef nt = Term::lam(st.bangs, d->term->hint, na, body);
      return mk(st.bangs >= 1 ? "lam-bang" : "lam", nctx, nt, nty, {np});
    }
    if (d->rule == "app") {
      const DerivRef& pf = d->premises[0];
      const DerivRef& pa = d->premises[1];
      DerivRef nf = go(pf, sub_ctx(nctx, pf->ctx), Type::arrow(pf->type->left, nty));
      if (!nf) return nullptr;
      DerivRef na = go(pa, sub_ctx(nctx, pa->ctx), pa->type);
      if (!na) return nullptr;
      return mk("app", nctx, Term::app(nf->term, na->term), nty, {nf, na});
    }
    if (d->rule == "pair") {
      StrippedType st = strip(nty);
      if (st.core->kind != TypeKind::Tensor) return bad("cast target of a pair is not a tensor");
      const DerivRef& pl = d->premises[0];
      const DerivRef& pr = d->premises[1];
      DerivRef nl = go(pl, sub_ctx(nctx, pl->ctx), Type::bangN(st.core->left, st.bangs));
      if (!nl) return nullptr;
      DerivRef nr = go(pr, sub_ctx(nctx, pr->ctx), Type::bangN(st.core->right, st.bangs));
      if (!nr) return nullptr;
      return mk("pair", nctx, Term::pair(st.bangs, nl->term, nr->term), nty, {nl, nr});
    }
    if (d->rule == "pair-elim") {
      const DerivRef& ps = d->premises[0];
      const DerivRef& pb = d->premises[1];
      DerivRef ns = go(ps, sub_ctx(nctx, ps->ctx), ps->type);
      if (!ns) return nullptr;
      Context base;
      base.items.assign(pb->ctx.items.begin(), pb->ctx.items.end() - 2);
      const Binding& bx = pb->ctx.items[pb->ctx.items.size() - 2];
      const Binding& by = pb->ctx.items.back();
      Context nbase = sub_ctx(nctx, base).extend(bx.name, bx.type).extend(by.name, by.type);
      DerivRef nb = go(pb, nbase, nty);
      if (!nb) return nullptr;
      TermRef body = close_term(nb->term, {bx.name, by.name});
      TermRef nt = Term::let_pair(d->term->n, bx.name, d->term->ann, by.name, d->term->ann2,
                                  ns->term, body);
      return mk("pair-elim", nctx, nt, nty, {ns, nb});
    }
    if (d->rule == "unit-elim") {
      const DerivRef& ps = d->premises[0];
      const DerivRef& pb = d->premises[1];
      DerivRef ns = go(ps, sub_ctx(nctx, ps->ctx), ps->type);
      if (!ns) return nullptr;
      DerivRef nb = go(pb, sub_ctx(nctx, pb->ctx), nty);
      if (!nb) return nullptr;
      return mk("unit-elim", nctx, Term::let_unit(ns->term, nb->term), nty, {ns, nb});
    }
    if (d->rule == "if") {
      const DerivRef& pc = d->premises[0];
      const DerivRef& pt = d->premises[1];
      const DerivRef& pe = d->premises[2];
      DerivRef nc = go(pc, sub_ctx(nctx, pc->ctx), pc->type);
      if (!nc) return nullptr;
      Context bctx = sub_ctx(nctx, pt->ctx);
      DerivRef nt = go(pt, bctx, nty);
      if (!nt) return nullptr;
      DerivRef ne = go(pe, bctx, nty);
      if (!ne) return nullptr;
      return mk("if", nctx, Term::if_(nc->term, nt->term, ne->term), nty, {nc, nt, ne});
    }
    return bad("unknown rule " + d->rule);
  }

  // narrow each entry of the old premise context to the new node context's entry
  static Context sub_ctx(const Context& nctx, const Context& oldPart) {
    Context c;
    for (const auto& b : oldPart.items) {
      const TypeRef* t = nctx.lookup(b.name);
      c.items.push_back({b.name, t ? *t : b.type});
    }
    return c;
  }
};

}  // namespace

DerivRef cast_derivation(const Signature& sig, const DerivRef& d, const Context& newCtx,
                         const TypeRef& newType, std::string* why) {
  if (!context_subtype(newCtx, d->ctx)) {
    if (why) *why = "new context is not pointwise narrower";
    return nullptr;
  }
  if (!is_subtype(d->type, newType)) {
    if (why) *why = "new result type is not wider";
    return nullptr;
  }
  Caster c{sig, {}};
  DerivRef r = c.go(d, newCtx, newType);
  if (!r && why) *why = c.why;
  return r;
}

// ---------------------------------------------------------------------------
// promotion

namespace {

struct Promoter {
  const Signature& sig;
  std::string why;

  DerivRef bad(const std::string& msg) {
    if (why.empty()) why = msg;
    return nullptr;
  }

  DerivRef go(const DerivRef& d) {
    const TermRef& t = d->term;
    TypeRef nty = Type::bang(d->type);
    if (d->rule == "var") {
      SubDerivRef c = derive_subtype(*d->ctx.lookup(t->name), nty);
      if (!c) return bad("cannot promote a variable of non-banged declared type");
      return mk("var", d->ctx, Term::free_var(t->name, nty), nty, {}, c);
    }
    if (d->rule == "const") {
      SubDerivRef c = derive_subtype(sig.at(t->name), nty);
      if (!c) return bad("cannot promote a constant of non-banged type");
      return mk("const", d->ctx, Term::constant(t->name, nty), nty, {}, c);
    }
    if (d->rule == "unit") {
      return mk("unit", d->ctx, Term::star(t->n + 1), nty);
    }
    if (d->rule == "lam" || d->rule == "lam-bang") {
      return mk("lam-bang", d->ctx, Term::lam(t->n + 1, t->hint, t->ann, t->a), nty,
                {d->premises[0]});
    }
    if (d->rule == "pair") {
      DerivRef nl = go(d->premises[0]);
      if (!nl) return nullptr;
      DerivRef nr = go(d->premises[1]);
      if (!nr) return nullptr;
      return mk("pair", d->ctx, Term::pair(t->n + 1, nl->term, nr->term), nty, {nl, nr});
    }
    if (d->rule == "pair-elim") {
      DerivRef ns = go(d->premises[0]);
      if (!ns) return nullptr;
      const DerivRef& pb = d->premises[1];
      // binders gain one bang, which narrows the body's context
      Context nbctx = pb->ctx;
      std::size_t k = nbctx.items.size();
      nbctx.items[k - 2].type = Type::bang(nbctx.items[k - 2].type);
      nbctx.items[k - 1].type = Type::bang(nbctx.items[k - 1].type);
      Caster cst{sig, {}};
      DerivRef narrowed = cst.go(pb, nbctx, pb->type);
      if (!narrowed) return bad("promote: " + cst.why);
      DerivRef nb = go(narrowed);
      if (!nb) return nullptr;
      const Binding& bx = pb->ctx.items[k - 2];
      const Binding& by = pb->ctx.items[k - 1];
      TermRef body = close_term(nb->term, {bx.name, by.name});
      TermRef nt =
          Term::let_pair(t->n + 1, bx.name, t->ann, by.name, t->ann2, ns->term, body);
      return mk("pair-elim", d->ctx, nt, nty, {ns, nb});
    }
    if (d->rule == "unit-elim") {
      DerivRef nb = go(d->premises[1]);
      if (!nb) return nullptr;
      return mk("unit-elim", d->ctx, Term::let_unit(t->a, nb->term), nty,
                {d->premises[0], nb});
    }
    if (d->rule == "app" && t->a->kind == TermKind::Lam && t->a->n == 0) {
      // a plain let of a value: promote the subject, bang the binder, then
      // promote the narrowed body
      DerivRef ns = go(d->premises[1]);
      if (!ns) return nullptr;
      const DerivRef& pb = d->premises[0]->premises[0];
      Context nbctx = pb->ctx;
      nbctx.items.back().type = Type::bang(nbctx.items.back().type);
      Caster cst{sig, {}};
      DerivRef narrowed = cst.go(pb, nbctx, pb->type);
      if (!narrowed) return bad("promote: " + cst.why);
      DerivRef nb = go(narrowed);
      if (!nb) return nullptr;
      const std::string& x = pb->ctx.items.back().name;
      TypeRef bty = Type::bang(pb->ctx.items.back().type);
      TermRef lamT = Term::lam(0, t->a->hint, bty, close_term(nb->term, {x}));
      DerivRef nlam = mk("lam", d->ctx, lamT, Type::arrow(bty, nb->type), {nb});
      return mk("app", d->ctx, Term::app(lamT, ns->term), nty, {nlam, ns});
    }
    return bad("only values promote, rule " + d->rule + " does not");
  }
};

}  // namespace

DerivRef promote_derivation(const Signature& sig, const DerivRef& d, std::string* why) {
  if (!d->ctx.all_banged()) {
    if (why) *why = "context is not fully banged";
    return nullptr;
  }
  if (!is_value(d->term)) {
    if (why) *why = "only values promote";
    return nullptr;
  }
  Promoter p{sig, {}};
  DerivRef r = p.go(d);
  if (!r && why) *why = p.why;
  return r;
}

// ---------------------------------------------------------------------------
// substitution

TypingResult substitute_derivation(const Signature& sig, const DerivRef& dV, const std::string& x,
                                   const DerivRef& dM) {
  const TypeRef* declared = dM->ctx.lookup(x);
  if (!declared) {
    return {nullptr, TypeError{TypeErrorKind::UnboundVariable,
                               "substitution target " + x + " is not in the context"}};
  }
  if (!type_equal(*declared, dV->type)) {
    return {nullptr, TypeError{TypeErrorKind::AnnotationMismatch,
                               "substituted value has type " + print_type(dV->type) +
                                   ", the hole is declared " + print_type(*declared)}};
  }

  // rename dV's context apart from dM's
  std::vector<std::string> avoid;
  for (const auto& b : dM->ctx.items) avoid.push_back(b.name);
  for (const auto& fo : free_vars(dM->term)) avoid.push_back(fo.name);
  std::vector<std::pair<std::string, std::string>> renames;
  for (const auto& b : dV->ctx.items) {
    if (std::find(avoid.begin(), avoid.end(), b.name) != avoid.end()) {
      std::string nn = pick_fresh(b.name, avoid);
      renames.emplace_back(b.name, nn);
      avoid.push_back(nn);
    }
  }
  auto rename_term = [&](TermRef v) {
    for (const auto& [from, to] : renames) {
      const std::string& t2 = to;
      v = subst_free(v, from, [&](const TypeRef& ann) { return Term::free_var(t2, ann); });
    }
    return v;
  };

  // merged context: dV's entries take the place of x
  Context merged;
  for (const auto& b : dM->ctx.items) {
    if (b.name == x) {
      for (const auto& vb : dV->ctx.items) {
        std::string nn = vb.name;
        for (const auto& [from, to] : renames) {
          if (from == nn) { nn = to; break; }
        }
        merged.items.push_back({nn, vb.type});
      }
    } else {
      merged.items.push_back(b);
    }
  }

  // each occurrence of x at B takes the value recast to B
  std::string castWhy;
  bool castFailed = false;
  TermRef result = subst_free(dM->term, x, [&](const TypeRef& occAnn) -> TermRef {
    DerivRef c = cast_derivation(sig, dV, dV->ctx, occAnn, &castWhy);
    if (!c) {
      castFailed = true;
      return Term::free_var(x, occAnn);
    }
    return rename_term(c->term);
  });
  if (castFailed) {
    return {nullptr,
            TypeError{TypeErrorKind::InternalError, "occurrence cast failed: " + castWhy}};
  }
  return synth(sig, merged, result);
}

DerivRef canonical_derivation(const Signature& sig, const DerivRef& d) {
  TypingResult r = synth(sig, d->ctx, d->term, SplitPolicy::DummiesLeft);
  return r.deriv;
}

namespace {

void print_deriv_rec(const DerivRef& d, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "[" + d->rule + "] ";
  out += print_judgment({d->ctx, d->term, d->type});
  out += "\n";
  for (const auto& p : d->premises) print_deriv_rec(p, depth + 1, out);
}

}  // namespace

std::string print_derivation(const DerivRef& d) {
  if (!d) return "(no derivation)\n";
  std::string out;
  print_deriv_rec(d, 0, out);
  return out;
}

}  // namespace linlam
