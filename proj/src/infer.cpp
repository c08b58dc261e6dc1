#include "linlam/infer.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace linlam {

const char* infer_status_name(InferStatus s) {
  switch (s) {
    case InferStatus::Ok: return "ok";
    case InferStatus::Untypeable: return "untypeable";
    case InferStatus::NoSolution: return "no-solution";
    case InferStatus::Ambiguous: return "ambiguous";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// bang-erased type skeletons with unification variables

struct Skel;
using SkelRef = std::shared_ptr<const Skel>;

struct Skel {
  enum class K { Var, Base, Unit, Arrow, Tensor } k;
  int var = -1;
  std::string name;
  SkelRef a, b;
};

SkelRef sk(Skel::K k, int var, std::string name, SkelRef a, SkelRef b) {
  auto s = std::make_shared<Skel>();
  s->k = k;
  s->var = var;
  s->name = std::move(name);
  s->a = std::move(a);
  s->b = std::move(b);
  return s;
}
SkelRef sk_var(int id) { return sk(Skel::K::Var, id, "", nullptr, nullptr); }
SkelRef sk_base(std::string n) { return sk(Skel::K::Base, -1, std::move(n), nullptr, nullptr); }
SkelRef sk_unit() { return sk(Skel::K::Unit, -1, "", nullptr, nullptr); }
SkelRef sk_arrow(SkelRef a, SkelRef b) {
  return sk(Skel::K::Arrow, -1, "", std::move(a), std::move(b));
}
SkelRef sk_tensor(SkelRef a, SkelRef b) {
  return sk(Skel::K::Tensor, -1, "", std::move(a), std::move(b));
}

SkelRef skel_of_type(const TypeRef& t) {
  switch (t->kind) {
    case TypeKind::Bang: return skel_of_type(t->left);
    case TypeKind::Const: return sk_base(t->name);
    case TypeKind::Unit: return sk_unit();
    case TypeKind::Arrow: return sk_arrow(skel_of_type(t->left), skel_of_type(t->right));
    case TypeKind::Tensor: return sk_tensor(skel_of_type(t->left), skel_of_type(t->right));
  }
  return nullptr;
}

struct Uf {
  std::vector<SkelRef> bound;  // indexed by var id; null = free

  int fresh() {
    bound.push_back(nullptr);
    return static_cast<int>(bound.size()) - 1;
  }

  SkelRef walk(SkelRef s) const {
    while (s->k == Skel::K::Var && bound[static_cast<std::size_t>(s->var)]) {
      s = bound[static_cast<std::size_t>(s->var)];
    }
    return s;
  }

  bool occurs(int v, const SkelRef& s0) const {
    SkelRef s = walk(s0);
    if (s->k == Skel::K::Var) return s->var == v;
    return (s->a && occurs(v, s->a)) || (s->b && occurs(v, s->b));
  }

  bool unify(SkelRef x, SkelRef y) {
    x = walk(std::move(x));
    y = walk(std::move(y));
    if (x->k == Skel::K::Var && y->k == Skel::K::Var && x->var == y->var) return true;
    if (x->k == Skel::K::Var) {
      if (occurs(x->var, y)) return false;
      bound[static_cast<std::size_t>(x->var)] = y;
      return true;
    }
    if (y->k == Skel::K::Var) return unify(y, x);
    if (x->k != y->k) return false;
    switch (x->k) {
      case Skel::K::Base: return x->name == y->name;
      case Skel::K::Unit: return true;
      case Skel::K::Arrow:
      case Skel::K::Tensor: return unify(x->a, y->a) && unify(x->b, y->b);
      case Skel::K::Var: break;
    }
    return false;
  }

  bool has_free(const SkelRef& s0) const {
    SkelRef s = walk(s0);
    if (s->k == Skel::K::Var) return true;
    return (s->a && has_free(s->a)) || (s->b && has_free(s->b));
  }

  // resolve fully, replacing any remaining free variable by the unit skeleton
  SkelRef ground(const SkelRef& s0) const {
    SkelRef s = walk(s0);
    switch (s->k) {
      case Skel::K::Var: return sk_unit();
      case Skel::K::Base:
      case Skel::K::Unit: return s;
      case Skel::K::Arrow: return sk_arrow(ground(s->a), ground(s->b));
      case Skel::K::Tensor: return sk_tensor(ground(s->a), ground(s->b));
    }
    return s;
  }
};

int skel_size(const SkelRef& s) {
  int n = 1;
  if (s->a) n += skel_size(s->a);
  if (s->b) n += skel_size(s->b);
  return n;
}

TypeRef decorate(const SkelRef& s, const std::vector<int>& counts, std::size_t& i) {
  int n = counts[i++];
  TypeRef core;
  switch (s->k) {
    case Skel::K::Base: core = Type::constant(s->name); break;
    case Skel::K::Unit: core = Type::unit(); break;
    case Skel::K::Arrow: {
      TypeRef l = decorate(s->a, counts, i);
      TypeRef r = decorate(s->b, counts, i);
      core = Type::arrow(l, r);
      break;
    }
    case Skel::K::Tensor: {
      TypeRef l = decorate(s->a, counts, i);
      TypeRef r = decorate(s->b, counts, i);
      core = Type::tensor(l, r);
      break;
    }
    case Skel::K::Var: core = Type::unit(); break;  // grounded before search
  }
  return Type::bangN(core, n);
}

bool enum_exact(std::vector<int>& counts, std::size_t at, int total, int maxIdx,
                const std::function<bool()>& cb) {
  if (at + 1 == counts.size()) {
    if (total > maxIdx) return false;
    counts[at] = total;
    return cb();
  }
  int top = std::min(total, maxIdx);
  for (int c = 0; c <= top; ++c) {
    counts[at] = c;
    if (enum_exact(counts, at + 1, total - c, maxIdx, cb)) return true;
  }
  return false;
}

// all bang placements over s with total count <= maxTotal, each position
// capped at maxIdx, ordered by total then lexicographically
bool enum_decorations(const SkelRef& s, int maxTotal, int maxIdx,
                      const std::function<bool(const TypeRef&, int)>& cb) {
  std::vector<int> counts(static_cast<std::size_t>(skel_size(s)));
  for (int t = 0; t <= maxTotal; ++t) {
    bool stop = enum_exact(counts, 0, t, maxIdx, [&] {
      std::size_t i = 0;
      TypeRef ty = decorate(s, counts, i);
      return cb(ty, t);
    });
    if (stop) return true;
  }
  return false;
}

int site_count(const PTermRef& p) {
  if (!p) return 0;
  int n = (p->kind == TermKind::App || p->kind == TermKind::LetPair) ? 1 : 0;
  return n + site_count(p->a) + site_count(p->b) + site_count(p->c);
}

// ---------------------------------------------------------------------------
// phase 1: shape constraints

struct Phase1 {
  const Signature& sig;
  const Context& ctx;
  Uf uf;
  std::vector<SkelRef> sites;  // one per App / LetPair node, in visit order
  std::vector<SkelRef> stack;
  std::string why;

  SkelRef fresh() { return sk_var(uf.fresh()); }

  bool fail(const std::string& msg) {
    if (why.empty()) why = msg;
    return false;
  }

  bool walk(const PTermRef& p, const SkelRef& g) {
    switch (p->kind) {
      case TermKind::FreeVar: {
        const TypeRef* a = ctx.lookup(p->name);
        if (!a) return fail("unbound variable " + p->name);
        if (!uf.unify(skel_of_type(*a), g)) {
          return fail("variable " + p->name + " does not fit its use");
        }
        return true;
      }
      case TermKind::BoundVar: {
        if (p->n < 0 || static_cast<std::size_t>(p->n) >= stack.size()) {
          return fail("dangling binder index");
        }
        if (!uf.unify(stack[stack.size() - 1 - static_cast<std::size_t>(p->n)], g)) {
          return fail("binder does not fit its use");
        }
        return true;
      }
      case TermKind::ConstTerm: {
        auto it = sig.find(p->name);
        if (it == sig.end()) return fail("unknown constant " + p->name);
        if (!uf.unify(skel_of_type(it->second), g)) {
          return fail("constant " + p->name + " does not fit its use");
        }
        return true;
      }
      case TermKind::Star:
        if (!uf.unify(g, sk_unit())) return fail("unit used at a non-unit shape");
        return true;
      case TermKind::Lam: {
        SkelRef a = fresh(), b = fresh();
        if (!uf.unify(g, sk_arrow(a, b))) return fail("function used at a non-arrow shape");
        stack.push_back(a);
        bool ok = walk(p->a, b);
        stack.pop_back();
        return ok;
      }
      case TermKind::App: {
        SkelRef a = fresh();
        sites.push_back(a);
        return walk(p->a, sk_arrow(a, g)) && walk(p->b, a);
      }
      case TermKind::Pair: {
        SkelRef a = fresh(), b = fresh();
        if (!uf.unify(g, sk_tensor(a, b))) return fail("pair used at a non-tensor shape");
        return walk(p->a, a) && walk(p->b, b);
      }
      case TermKind::LetPair: {
        SkelRef a = fresh(), b = fresh();
        SkelRef subj = sk_tensor(a, b);
        sites.push_back(subj);
        if (!walk(p->a, subj)) return false;
        stack.push_back(a);
        stack.push_back(b);
        bool ok = walk(p->b, g);
        stack.pop_back();
        stack.pop_back();
        return ok;
      }
      case TermKind::LetUnit:
        return walk(p->a, sk_unit()) && walk(p->b, g);
      case TermKind::If:
        return walk(p->a, sk_base("bit")) && walk(p->b, g) && walk(p->c, g);
    }
    return fail("unhandled term form");
  }
};

// ---------------------------------------------------------------------------
// phase 2: goal-directed decoration search

struct Search {
  const Signature& sig;
  const Context& ctx;
  std::vector<SkelRef> sites;  // grounded
  int maxIdx;
  std::vector<TypeRef> stack;
  long work = -1;  // node visits left; negative means no cap
  bool out_of_work = false;

  using Cont = std::function<bool(const TermRef&, int)>;

  // a banged lambda needs every enclosing variable it touches to be banged
  bool banged_support(const PTermRef& p, int depth) const {
    switch (p->kind) {
      case TermKind::FreeVar: {
        const TypeRef* a = ctx.lookup(p->name);
        return !a || is_banged(*a);
      }
      case TermKind::BoundVar: {
        if (p->n < depth) return true;
        std::size_t i = stack.size() - 1 - static_cast<std::size_t>(p->n - depth);
        return i < stack.size() && is_banged(stack[i]);
      }
      case TermKind::Lam:
        return banged_support(p->a, depth + 1);
      case TermKind::LetPair:
        return banged_support(p->a, depth) && banged_support(p->b, depth + 2);
      default: {
        for (const PTermRef* ch : {&p->a, &p->b, &p->c}) {
          if (*ch && !banged_support(*ch, depth)) return false;
        }
        return true;
      }
    }
  }

  bool go(const PTermRef& p, const TypeRef& B, int siteBase, int rem, const Cont& k) {
    if (work >= 0 && --work < 0) {
      out_of_work = true;
      return true;  // unwind the whole search
    }
    switch (p->kind) {
      case TermKind::FreeVar: {
        const TypeRef* a = ctx.lookup(p->name);
        if (!a || !is_subtype(*a, B)) return false;
        return k(Term::free_var(p->name, B), 0);
      }
      case TermKind::BoundVar: {
        if (p->n < 0 || static_cast<std::size_t>(p->n) >= stack.size()) return false;
        const TypeRef& t = stack[stack.size() - 1 - static_cast<std::size_t>(p->n)];
        if (!is_subtype(t, B)) return false;
        return k(Term::bound_var(p->n, B), 0);
      }
      case TermKind::ConstTerm: {
        auto it = sig.find(p->name);
        if (it == sig.end() || !is_subtype(it->second, B)) return false;
        return k(Term::constant(p->name, B), 0);
      }
      case TermKind::Star: {
        StrippedType st = strip(B);
        if (st.core->kind != TypeKind::Unit) return false;
        return k(Term::star(st.bangs), 0);
      }
      case TermKind::Lam: {
        StrippedType st = strip(B);
        if (st.core->kind != TypeKind::Arrow) return false;
        if (st.bangs >= 1 && !banged_support(p, 0)) return false;
        stack.push_back(st.core->left);
        bool stop = go(p->a, st.core->right, siteBase, rem, [&](const TermRef& b, int u) {
          // the continuation may search sibling subterms; their binder
          // indices count from this node's scope, not the body's
          stack.pop_back();
          bool s = k(Term::lam(st.bangs, p->hint, st.core->left, b), u);
          stack.push_back(st.core->left);
          return s;
        });
        stack.pop_back();
        return stop;
      }
      case TermKind::App: {
        int fnSites = site_count(p->a);
        return enum_decorations(
            sites[static_cast<std::size_t>(siteBase)], rem, maxIdx,
            [&](const TypeRef& A, int cA) {
              return go(p->a, Type::arrow(A, B), siteBase + 1, rem - cA,
                        [&](const TermRef& mf, int uf) {
                          return go(p->b, A, siteBase + 1 + fnSites, rem - cA - uf,
                                    [&](const TermRef& ma, int ua) {
                                      return k(Term::app(mf, ma), cA + uf + ua);
                                    });
                        });
            });
      }
      case TermKind::Pair: {
        StrippedType st = strip(B);
        if (st.core->kind != TypeKind::Tensor) return false;
        int lSites = site_count(p->a);
        return go(p->a, Type::bangN(st.core->left, st.bangs), siteBase, rem,
                  [&](const TermRef& ml, int ul) {
                    return go(p->b, Type::bangN(st.core->right, st.bangs), siteBase + lSites,
                              rem - ul, [&](const TermRef& mr, int ur) {
                                return k(Term::pair(st.bangs, ml, mr), ul + ur);
                              });
                  });
      }
      case TermKind::LetPair: {
        int subjSites = site_count(p->a);
        return enum_decorations(
            sites[static_cast<std::size_t>(siteBase)], rem, maxIdx,
            [&](const TypeRef& T, int cT) {
              StrippedType st = strip(T);
              if (st.core->kind != TypeKind::Tensor) return false;
              int n = st.bangs;
              const TypeRef& a1 = st.core->left;
              const TypeRef& a2 = st.core->right;
              return go(p->a, T, siteBase + 1, rem - cT, [&](const TermRef& ms, int us) {
                stack.push_back(Type::bangN(a1, n));
                stack.push_back(Type::bangN(a2, n));
                bool stop = go(p->b, B, siteBase + 1 + subjSites, rem - cT - us,
                               [&](const TermRef& mb, int ub) {
                                 stack.pop_back();
                                 stack.pop_back();
                                 bool s = k(Term::let_pair(n, p->hint, a1, p->hint2, a2, ms, mb),
                                            cT + us + ub);
                                 stack.push_back(Type::bangN(a1, n));
                                 stack.push_back(Type::bangN(a2, n));
                                 return s;
                               });
                stack.pop_back();
                stack.pop_back();
                return stop;
              });
            });
      }
      case TermKind::LetUnit: {
        int sSites = site_count(p->a);
        return go(p->a, Type::unit(), siteBase, rem, [&](const TermRef& ms, int us) {
          return go(p->b, B, siteBase + sSites, rem - us, [&](const TermRef& mb, int ub) {
            return k(Term::let_unit(ms, mb), us + ub);
          });
        });
      }
      case TermKind::If: {
        int cSites = site_count(p->a);
        int tSites = site_count(p->b);
        return go(p->a, Type::constant("bit"), siteBase, rem, [&](const TermRef& mc, int uc) {
          return go(p->b, B, siteBase + cSites, rem - uc, [&](const TermRef& mt, int ut) {
            return go(p->c, B, siteBase + cSites + tSites, rem - uc - ut,
                      [&](const TermRef& me, int ue) {
                        return k(Term::if_(mc, mt, me), uc + ut + ue);
                      });
          });
        });
      }
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// cache

std::unordered_map<std::string, InferResult>& cache() {
  static std::unordered_map<std::string, InferResult> c;
  return c;
}

std::string cache_key(const Signature& sig, const Context& ctx, const PTermRef& p,
                      const TypeRef& goal, const InferOptions& o) {
  std::string k;
  for (const auto& [n, t] : sig) k += n + ":" + print_type(t) + ";";
  k += "|" + print_context(ctx) + "|" + print_pterm(p) + "|";
  k += goal ? print_type(goal) : "?";
  k += "|" + std::to_string(o.bang_budget) + "," + std::to_string(o.max_index) + "," +
       std::to_string(o.max_solutions);
  return k;
}

InferResult infer_impl(const Signature& sig, const Context& ctx, const PTermRef& p,
                       const TypeRef& goal, const InferOptions& opts) {
  InferResult res;
  Phase1 ph{sig, ctx, {}, {}, {}, {}};
  SkelRef g = goal ? skel_of_type(goal) : ph.fresh();
  if (!ph.walk(p, g)) {
    res.status = InferStatus::Untypeable;
    res.detail = ph.why;
    return res;
  }

  Search se{sig, ctx, {}, opts.max_index, {}};
  se.work = opts.work_budget;
  se.sites.reserve(ph.sites.size());
  for (const auto& s : ph.sites) se.sites.push_back(ph.uf.ground(s));

  if (goal) {
    for (int L = 0; L <= opts.bang_budget; ++L) {
      bool stop = se.go(p, goal, 0, L, [&](const TermRef& m, int u) {
        if (u != L) return false;
        TypingResult r = check(sig, ctx, m, goal);
        if (!r) return false;
        res.solutions.push_back({r.deriv, L});
        return static_cast<int>(res.solutions.size()) >= opts.max_solutions;
      });
      if (stop || se.out_of_work) break;
    }
    if (res.solutions.empty()) {
      res.status = InferStatus::NoSolution;
      res.budget_exhausted = true;
      res.detail = se.out_of_work
                       ? "search stopped at the work budget"
                       : "no index assignment within bang budget " + std::to_string(opts.bang_budget);
    } else {
      res.status = InferStatus::Ok;
    }
    return res;
  }

  if (ph.uf.has_free(g)) {
    res.status = InferStatus::Ambiguous;
    std::vector<int> zero(static_cast<std::size_t>(skel_size(ph.uf.ground(g))));
    std::size_t i = 0;
    res.candidates.push_back(decorate(ph.uf.ground(g), zero, i));
    res.detail = "result type is not determined without a goal";
    return res;
  }
  SkelRef rg = ph.uf.ground(g);

  TypeRef fixedGoal;
  int collectCap = std::max(opts.max_solutions, 8);
  for (int L = 0; L <= opts.bang_budget; ++L) {
    std::vector<InferSolution> levelSols;
    std::vector<TypeRef> levelTypes;
    enum_decorations(rg, L, opts.max_index, [&](const TypeRef& btop, int c0) {
      if (fixedGoal && !type_equal(btop, fixedGoal)) return false;
      return se.go(p, btop, 0, L - c0, [&](const TermRef& m, int u) {
        if (c0 + u != L) return false;
        TypingResult r = check(sig, ctx, m, btop);
        if (!r) return false;
        levelSols.push_back({r.deriv, L});
        bool seen = false;
        for (const auto& t : levelTypes) {
          if (type_equal(t, btop)) seen = true;
        }
        if (!seen) levelTypes.push_back(btop);
        if (!fixedGoal) {
          // scan the whole level unless a second result type already showed up
          return levelTypes.size() >= 2 && static_cast<int>(levelSols.size()) >= collectCap;
        }
        return static_cast<int>(res.solutions.size() + levelSols.size()) >= opts.max_solutions;
      });
    });
    if (levelSols.empty()) continue;
    if (!fixedGoal) {
      if (levelTypes.size() >= 2) {
        res.status = InferStatus::Ambiguous;
        res.candidates = levelTypes;
        res.detail = "several result types fit at the same bang count";
        return res;
      }
      fixedGoal = levelTypes[0];
    }
    for (const auto& s : levelSols) {
      if (static_cast<int>(res.solutions.size()) < opts.max_solutions) res.solutions.push_back(s);
    }
    if (static_cast<int>(res.solutions.size()) >= opts.max_solutions) break;
  }
  if (res.solutions.empty()) {
    res.status = InferStatus::NoSolution;
    res.budget_exhausted = true;
    res.detail = "no index assignment within bang budget " + std::to_string(opts.bang_budget);
  } else {
    res.status = InferStatus::Ok;
  }
  return res;
}

}  // namespace

InferResult infer(const Signature& sig, const Context& ctx, const PTermRef& p, const TypeRef& goal,
                  const InferOptions& opts) {
  if (!opts.use_cache) return infer_impl(sig, ctx, p, goal, opts);
  std::string key = cache_key(sig, ctx, p, goal, opts);
  auto& c = cache();
  auto it = c.find(key);
  if (it != c.end()) return it->second;
  InferResult r = infer_impl(sig, ctx, p, goal, opts);
  if (c.size() > 200000) c.clear();
  c.emplace(std::move(key), r);
  return r;
}

void clear_infer_cache() { cache().clear(); }

}  // namespace linlam
