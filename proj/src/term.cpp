#include "linlam/term.hpp"

#include <map>
#include <set>

namespace linlam {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

TermRef make(TermKind k, int n, std::string name, TypeRef ann, TypeRef ann2, std::string hint,
             std::string hint2, TermRef a, TermRef b, TermRef c) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->n = n;
  t->name = std::move(name);
  t->ann = std::move(ann);
  t->ann2 = std::move(ann2);
  t->hint = std::move(hint);
  t->hint2 = std::move(hint2);
  t->a = std::move(a);
  t->b = std::move(b);
  t->c = std::move(c);
  std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b9u;
  h = mix(h, static_cast<std::size_t>(t->n));
  int sz = 1;
  if (!t->name.empty()) h = mix(h, std::hash<std::string>{}(t->name));
  if (t->ann) h = mix(h, t->ann->hash);
  if (t->ann2) h = mix(h, t->ann2->hash);
  for (const TermRef* ch : {&t->a, &t->b, &t->c}) {
    if (*ch) {
      h = mix(h, (*ch)->hash);
      sz += (*ch)->size;
    }
  }
  t->hash = h;
  t->size = sz;
  return t;
}

}  // namespace

TermRef Term::free_var(const std::string& x, TypeRef ann) {
  return make(TermKind::FreeVar, 0, x, std::move(ann), nullptr, "", "", nullptr, nullptr, nullptr);
}
TermRef Term::bound_var(int idx, TypeRef ann) {
  return make(TermKind::BoundVar, idx, "", std::move(ann), nullptr, "", "", nullptr, nullptr,
              nullptr);
}
TermRef Term::constant(const std::string& c, TypeRef ann) {
  return make(TermKind::ConstTerm, 0, c, std::move(ann), nullptr, "", "", nullptr, nullptr,
              nullptr);
}
TermRef Term::star(int n) {
  return make(TermKind::Star, n, "", nullptr, nullptr, "", "", nullptr, nullptr, nullptr);
}
TermRef Term::lam(int n, const std::string& hint, TypeRef binderAnn, TermRef body) {
  return make(TermKind::Lam, n, "", std::move(binderAnn), nullptr, hint, "", std::move(body),
              nullptr, nullptr);
}
TermRef Term::app(TermRef fn, TermRef arg) {
  return make(TermKind::App, 0, "", nullptr, nullptr, "", "", std::move(fn), std::move(arg),
              nullptr);
}
TermRef Term::pair(int n, TermRef l, TermRef r) {
  return make(TermKind::Pair, n, "", nullptr, nullptr, "", "", std::move(l), std::move(r), nullptr);
}
TermRef Term::let_pair(int n, const std::string& hx, TypeRef annx, const std::string& hy,
                       TypeRef anny, TermRef subject, TermRef body) {
  return make(TermKind::LetPair, n, "", std::move(annx), std::move(anny), hx, hy,
              std::move(subject), std::move(body), nullptr);
}
TermRef Term::let_unit(TermRef subject, TermRef body) {
  return make(TermKind::LetUnit, 0, "", nullptr, nullptr, "", "", std::move(subject),
              std::move(body), nullptr);
}
TermRef Term::if_(TermRef cond, TermRef thenB, TermRef elseB) {
  return make(TermKind::If, 0, "", nullptr, nullptr, "", "", std::move(cond), std::move(thenB),
              std::move(elseB));
}

TermRef Term::lam_named(int n, const std::string& x, TypeRef binderAnn, TermRef body) {
  return lam(n, x, std::move(binderAnn), close_term(body, {x}));
}
TermRef Term::let_pair_named(int n, const std::string& x, TypeRef annx, const std::string& y,
                             TypeRef anny, TermRef subject, TermRef body) {
  return let_pair(n, x, std::move(annx), y, std::move(anny), std::move(subject),
                  close_term(body, {x, y}));
}
TermRef Term::let_named(const std::string& x, TypeRef ann, TermRef subject, TermRef body) {
  return app(lam_named(0, x, std::move(ann), std::move(body)), std::move(subject));
}

bool term_equal(const TermRef& a, const TermRef& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind || a->n != b->n || a->size != b->size) return false;
  if (a->name != b->name) return false;
  if (!!a->ann != !!b->ann || (a->ann && !type_equal(a->ann, b->ann))) return false;
  if (!!a->ann2 != !!b->ann2 || (a->ann2 && !type_equal(a->ann2, b->ann2))) return false;
  for (auto [x, y] : {std::pair{&a->a, &b->a}, {&a->b, &b->b}, {&a->c, &b->c}}) {
    if (!!*x != !!*y) return false;
    if (*x && !term_equal(*x, *y)) return false;
  }
  return true;
}

Classification classify(const TermRef& t) {
  switch (t->kind) {
    case TermKind::FreeVar:
    case TermKind::BoundVar:
    case TermKind::ConstTerm:
    case TermKind::Star:
    case TermKind::Lam:
      return Classification::CoreValue;
    case TermKind::Pair:
    case TermKind::LetPair:
    case TermKind::LetUnit:
      return (is_value(t->a) && is_value(t->b)) ? Classification::Value
                                                : Classification::Computation;
    case TermKind::App:
      // a plain let binding a value in a value body is itself a value
      if (t->a->kind == TermKind::Lam && t->a->n == 0)
        return (is_value(t->b) && is_value(t->a->a)) ? Classification::Value
                                                     : Classification::Computation;
      return Classification::Computation;
    case TermKind::If:
      return Classification::Computation;
  }
  return Classification::Computation;
}

std::optional<PlainLet> as_plain_let(const TermRef& t) {
  if (t->kind != TermKind::App || t->a->kind != TermKind::Lam || t->a->n != 0) return std::nullopt;
  return PlainLet{t->a->hint, t->a->ann, t->b, t->a->a};
}

namespace {

void free_vars_rec(const TermRef& t, std::vector<FreeOcc>& out,
                   std::map<std::string, std::size_t>& idx) {
  if (!t) return;
  if (t->kind == TermKind::FreeVar) {
    auto it = idx.find(t->name);
    if (it == idx.end()) {
      idx[t->name] = out.size();
      out.push_back({t->name, {t->ann}});
    } else {
      out[it->second].anns.push_back(t->ann);
    }
    return;
  }
  free_vars_rec(t->a, out, idx);
  free_vars_rec(t->b, out, idx);
  free_vars_rec(t->c, out, idx);
}

}  // namespace

std::vector<FreeOcc> free_vars(const TermRef& t) {
  std::vector<FreeOcc> out;
  std::map<std::string, std::size_t> idx;
  free_vars_rec(t, out, idx);
  return out;
}

bool occurs_free(const TermRef& t, const std::string& x) {
  if (!t) return false;
  if (t->kind == TermKind::FreeVar) return t->name == x;
  return occurs_free(t->a, x) || occurs_free(t->b, x) || occurs_free(t->c, x);
}

namespace {

int binder_arity(TermKind k) {
  switch (k) {
    case TermKind::Lam: return 1;
    case TermKind::LetPair: return 2;
    default: return 0;
  }
}

// LetPair's body is child b; Lam's body is child a. Returns which children are
// under the node's binders.
bool child_under_binders(TermKind k, int child) {
  if (k == TermKind::Lam) return child == 0;
  if (k == TermKind::LetPair) return child == 1;
  return false;
}

template <class F>
TermRef map_vars(const TermRef& t, int depth, const F& f) {
  if (!t) return t;
  if (t->kind == TermKind::FreeVar || t->kind == TermKind::BoundVar) return f(t, depth);
  int ar = binder_arity(t->kind);
  TermRef ch[3] = {t->a, t->b, t->c};
  bool changed = false;
  for (int i = 0; i < 3; ++i) {
    if (!ch[i]) continue;
    int d = depth + (child_under_binders(t->kind, i) ? ar : 0);
    TermRef r = map_vars(ch[i], d, f);
    if (r.get() != ch[i].get()) changed = true;
    ch[i] = r;
  }
  if (!changed) return t;
  return make(t->kind, t->n, t->name, t->ann, t->ann2, t->hint, t->hint2, ch[0], ch[1], ch[2]);
}

}  // namespace

TermRef open_term(const TermRef& body, const std::vector<std::string>& names) {
  int ar = static_cast<int>(names.size());
  return map_vars(body, 0, [&](const TermRef& v, int depth) -> TermRef {
    if (v->kind == TermKind::BoundVar && v->n >= depth && v->n < depth + ar) {
      return Term::free_var(names[ar - 1 - (v->n - depth)], v->ann);
    }
    return v;
  });
}

TermRef close_term(const TermRef& t, const std::vector<std::string>& names) {
  int ar = static_cast<int>(names.size());
  return map_vars(t, 0, [&](const TermRef& v, int depth) -> TermRef {
    if (v->kind == TermKind::FreeVar) {
      for (int i = 0; i < ar; ++i) {
        if (names[i] == v->name) return Term::bound_var(depth + ar - 1 - i, v->ann);
      }
    }
    return v;
  });
}

TermRef subst_free(const TermRef& t, const std::string& x,
                   const std::function<TermRef(const TypeRef&)>& repl) {
  return map_vars(t, 0, [&](const TermRef& v, int) -> TermRef {
    if (v->kind == TermKind::FreeVar && v->name == x) return repl(v->ann);
    return v;
  });
}

// ---------------------------------------------------------------------------
// printing

namespace {

bool uses_bound(const TermRef& t, int idx, int depth) {
  if (!t) return false;
  if (t->kind == TermKind::BoundVar) return t->n == idx + depth;
  int ar = binder_arity(t->kind);
  for (int i = 0; i < 3; ++i) {
    const TermRef& ch = (i == 0 ? t->a : i == 1 ? t->b : t->c);
    if (!ch) continue;
    int d = depth + (child_under_binders(t->kind, i) ? ar : 0);
    if (uses_bound(ch, idx, d)) return true;
  }
  return false;
}

std::string atom_type(const TypeRef& ty) {
  if (ty->kind == TypeKind::Arrow || ty->kind == TypeKind::Tensor) {
    return "(" + print_type(ty) + ")";
  }
  if (ty->kind == TypeKind::Bang) return "!" + atom_type(ty->left);
  return print_type(ty);
}

struct Printer {
  std::set<std::string> taken;            // free names + enclosing binder names
  std::vector<std::string> scope;         // display names, innermost last

  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string cand = base;
    int k = 1;
    while (taken.count(cand)) cand = base + "_" + std::to_string(k++);
    return cand;
  }

  // sugar: Lam(n, x:!^m top, let * = x:top in M), x not free in M
  bool lam_star_sugar(const TermRef& t, int& m, TermRef& inner) {
    if (t->kind != TermKind::Lam) return false;
    const TermRef& body = t->a;
    if (body->kind != TermKind::LetUnit) return false;
    if (body->a->kind != TermKind::BoundVar || body->a->n != 0) return false;
    if (body->a->ann->kind != TypeKind::Unit) return false;
    auto st = strip(t->ann);
    if (st.core->kind != TypeKind::Unit) return false;
    if (uses_bound(body->b, 0, 0)) return false;
    m = st.bangs;
    inner = body->b;
    return true;
  }

  void idx_suffix(int n, std::string& out) {
    if (n != 0) out += "^" + std::to_string(n);
  }

  void print(const TermRef& t, bool atomPos, std::string& out) {
    switch (t->kind) {
      case TermKind::FreeVar:
        out += t->name + ":" + atom_type(t->ann);
        return;
      case TermKind::BoundVar: {
        if (static_cast<std::size_t>(t->n) >= scope.size()) {
          out += "#" + std::to_string(t->n) + ":" + atom_type(t->ann);
          return;
        }
        std::size_t i = scope.size() - 1 - static_cast<std::size_t>(t->n);
        out += scope[i] + ":" + atom_type(t->ann);
        return;
      }
      case TermKind::ConstTerm:
        out += t->name + ":" + atom_type(t->ann);
        return;
      case TermKind::Star:
        out += "unit";
        idx_suffix(t->n, out);
        return;
      case TermKind::Pair: {
        out += "<";
        print(t->a, false, out);
        out += ", ";
        print(t->b, false, out);
        out += ">";
        idx_suffix(t->n, out);
        return;
      }
      case TermKind::Lam: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        int m = 0;
        TermRef inner;
        if (lam_star_sugar(t, m, inner)) {
          out += "lam";
          idx_suffix(t->n, out);
          out += " *";
          if (m != 0) out += "^" + std::to_string(m);
          out += ". ";
          scope.push_back("_");
          print(inner, false, out);
          scope.pop_back();
          return;
        }
        std::string x = fresh(t->hint);
        out += "lam";
        idx_suffix(t->n, out);
        out += " " + x + ":" + print_type(t->ann) + ". ";
        taken.insert(x);
        scope.push_back(x);
        print(t->a, false, out);
        scope.pop_back();
        taken.erase(x);
        return;
      }
      case TermKind::App: {
        if (auto pl = as_plain_let(t)) {
          if (atomPos) {
            out += "(";
            print(t, false, out);
            out += ")";
            return;
          }
          std::string x = fresh(pl->hint);
          out += "let " + x + ":" + print_type(pl->ann) + " = ";
          print(pl->subject, false, out);
          out += " in ";
          taken.insert(x);
          scope.push_back(x);
          print(pl->body, false, out);
          scope.pop_back();
          taken.erase(x);
          return;
        }
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        // left-assoc application chain: atoms separated by spaces
        if (t->a->kind == TermKind::App && !as_plain_let(t->a)) {
          print(t->a, false, out);
        } else {
          print(t->a, true, out);
        }
        out += " ";
        print(t->b, true, out);
        return;
      }
      case TermKind::LetPair: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        std::string x = fresh(t->hint);
        taken.insert(x);
        std::string y = fresh(t->hint2.empty() ? "y" : t->hint2);
        taken.insert(y);
        out += "let <" + x + ":" + print_type(t->ann) + ", " + y + ":" + print_type(t->ann2) + ">";
        idx_suffix(t->n, out);
        out += " = ";
        print(t->a, false, out);
        out += " in ";
        scope.push_back(x);
        scope.push_back(y);
        print(t->b, false, out);
        scope.pop_back();
        scope.pop_back();
        taken.erase(x);
        taken.erase(y);
        return;
      }
      case TermKind::LetUnit: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        out += "let * = ";
        print(t->a, false, out);
        out += " in ";
        print(t->b, false, out);
        return;
      }
      case TermKind::If: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        out += "if ";
        print(t->a, false, out);
        out += " then ";
        print(t->b, false, out);
        out += " else ";
        print(t->c, false, out);
        return;
      }
    }
  }
};

}  // namespace

std::string print_term(const TermRef& t) {
  Printer p;
  for (const auto& fo : free_vars(t)) p.taken.insert(fo.name);
  std::string out;
  p.print(t, false, out);
  return out;
}

// ---------------------------------------------------------------------------
// pure terms

namespace {

PTermRef pmake(TermKind k, int n, std::string name, std::string hint, std::string hint2, PTermRef a,
               PTermRef b, PTermRef c) {
  auto t = std::make_shared<PTerm>();
  t->kind = k;
  t->n = n;
  t->name = std::move(name);
  t->hint = std::move(hint);
  t->hint2 = std::move(hint2);
  t->a = std::move(a);
  t->b = std::move(b);
  t->c = std::move(c);
  std::size_t h = static_cast<std::size_t>(k) * 0x85ebca6bu;
  h = mix(h, static_cast<std::size_t>(t->n));
  int sz = 1;
  if (!t->name.empty()) h = mix(h, std::hash<std::string>{}(t->name));
  for (const PTermRef* ch : {&t->a, &t->b, &t->c}) {
    if (*ch) {
      h = mix(h, (*ch)->hash);
      sz += (*ch)->size;
    }
  }
  t->hash = h;
  t->size = sz;
  return t;
}

}  // namespace

PTermRef PTerm::free_var(const std::string& x) {
  return pmake(TermKind::FreeVar, 0, x, "", "", nullptr, nullptr, nullptr);
}
PTermRef PTerm::bound_var(int idx) {
  return pmake(TermKind::BoundVar, idx, "", "", "", nullptr, nullptr, nullptr);
}
PTermRef PTerm::constant(const std::string& c) {
  return pmake(TermKind::ConstTerm, 0, c, "", "", nullptr, nullptr, nullptr);
}
PTermRef PTerm::star() { return pmake(TermKind::Star, 0, "", "", "", nullptr, nullptr, nullptr); }
PTermRef PTerm::lam(const std::string& hint, PTermRef body) {
  return pmake(TermKind::Lam, 0, "", hint, "", std::move(body), nullptr, nullptr);
}
PTermRef PTerm::app(PTermRef fn, PTermRef arg) {
  return pmake(TermKind::App, 0, "", "", "", std::move(fn), std::move(arg), nullptr);
}
PTermRef PTerm::pair(PTermRef l, PTermRef r) {
  return pmake(TermKind::Pair, 0, "", "", "", std::move(l), std::move(r), nullptr);
}
PTermRef PTerm::let_pair(const std::string& hx, const std::string& hy, PTermRef subject,
                         PTermRef body) {
  return pmake(TermKind::LetPair, 0, "", hx, hy, std::move(subject), std::move(body), nullptr);
}
PTermRef PTerm::let_unit(PTermRef subject, PTermRef body) {
  return pmake(TermKind::LetUnit, 0, "", "", "", std::move(subject), std::move(body), nullptr);
}
PTermRef PTerm::if_(PTermRef cond, PTermRef thenB, PTermRef elseB) {
  return pmake(TermKind::If, 0, "", "", "", std::move(cond), std::move(thenB), std::move(elseB));
}
PTermRef PTerm::lam_named(const std::string& x, PTermRef body) {
  return lam(x, close_pterm(body, {x}));
}
PTermRef PTerm::let_pair_named(const std::string& x, const std::string& y, PTermRef subject,
                               PTermRef body) {
  return let_pair(x, y, std::move(subject), close_pterm(body, {x, y}));
}
PTermRef PTerm::let_named(const std::string& x, PTermRef subject, PTermRef body) {
  return app(lam_named(x, std::move(body)), std::move(subject));
}

bool pterm_equal(const PTermRef& a, const PTermRef& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind || a->n != b->n || a->size != b->size) return false;
  if (a->name != b->name) return false;
  for (auto [x, y] : {std::pair{&a->a, &b->a}, {&a->b, &b->b}, {&a->c, &b->c}}) {
    if (!!*x != !!*y) return false;
    if (*x && !pterm_equal(*x, *y)) return false;
  }
  return true;
}

Classification classify(const PTermRef& t) {
  switch (t->kind) {
    case TermKind::FreeVar:
    case TermKind::BoundVar:
    case TermKind::ConstTerm:
    case TermKind::Star:
    case TermKind::Lam:
      return Classification::CoreValue;
    case TermKind::Pair:
    case TermKind::LetPair:
    case TermKind::LetUnit: {
      auto va = classify(t->a) != Classification::Computation;
      auto vb = classify(t->b) != Classification::Computation;
      return (va && vb) ? Classification::Value : Classification::Computation;
    }
    case TermKind::App:
      if (t->a->kind == TermKind::Lam)
        return (is_value(t->b) && is_value(t->a->a)) ? Classification::Value
                                                     : Classification::Computation;
      return Classification::Computation;
    case TermKind::If:
      return Classification::Computation;
  }
  return Classification::Computation;
}

namespace {

template <class F>
PTermRef pmap_vars(const PTermRef& t, int depth, const F& f) {
  if (!t) return t;
  if (t->kind == TermKind::FreeVar || t->kind == TermKind::BoundVar) return f(t, depth);
  int ar = binder_arity(t->kind);
  PTermRef ch[3] = {t->a, t->b, t->c};
  bool changed = false;
  for (int i = 0; i < 3; ++i) {
    if (!ch[i]) continue;
    int d = depth + (child_under_binders(t->kind, i) ? ar : 0);
    PTermRef r = pmap_vars(ch[i], d, f);
    if (r.get() != ch[i].get()) changed = true;
    ch[i] = r;
  }
  if (!changed) return t;
  return pmake(t->kind, t->n, t->name, t->hint, t->hint2, ch[0], ch[1], ch[2]);
}

void pfree_rec(const PTermRef& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (!t) return;
  if (t->kind == TermKind::FreeVar) {
    if (seen.insert(t->name).second) out.push_back(t->name);
    return;
  }
  pfree_rec(t->a, out, seen);
  pfree_rec(t->b, out, seen);
  pfree_rec(t->c, out, seen);
}

}  // namespace

std::vector<std::string> free_vars(const PTermRef& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  pfree_rec(t, out, seen);
  return out;
}

bool occurs_free(const PTermRef& t, const std::string& x) {
  if (!t) return false;
  if (t->kind == TermKind::FreeVar) return t->name == x;
  return occurs_free(t->a, x) || occurs_free(t->b, x) || occurs_free(t->c, x);
}

PTermRef open_pterm(const PTermRef& body, const std::vector<std::string>& names) {
  int ar = static_cast<int>(names.size());
  return pmap_vars(body, 0, [&](const PTermRef& v, int depth) -> PTermRef {
    if (v->kind == TermKind::BoundVar && v->n >= depth && v->n < depth + ar) {
      return PTerm::free_var(names[ar - 1 - (v->n - depth)]);
    }
    return v;
  });
}

PTermRef close_pterm(const PTermRef& t, const std::vector<std::string>& names) {
  int ar = static_cast<int>(names.size());
  return pmap_vars(t, 0, [&](const PTermRef& v, int depth) -> PTermRef {
    if (v->kind == TermKind::FreeVar) {
      for (int i = 0; i < ar; ++i) {
        if (names[i] == v->name) return PTerm::bound_var(depth + ar - 1 - i);
      }
    }
    return v;
  });
}

namespace {

struct PPrinter {
  std::set<std::string> taken;
  std::vector<std::string> scope;

  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string cand = base;
    int k = 1;
    while (taken.count(cand)) cand = base + "_" + std::to_string(k++);
    return cand;
  }

  bool lam_star_sugar(const PTermRef& t, PTermRef& inner) {
    if (t->kind != TermKind::Lam) return false;
    const PTermRef& body = t->a;
    if (body->kind != TermKind::LetUnit) return false;
    if (body->a->kind != TermKind::BoundVar || body->a->n != 0) return false;
    // binder must not occur in the let body
    bool used = false;
    std::function<void(const PTermRef&, int)> walk = [&](const PTermRef& u, int depth) {
      if (!u || used) return;
      if (u->kind == TermKind::BoundVar) {
        if (u->n == depth) used = true;
        return;
      }
      int ar = binder_arity(u->kind);
      for (int i = 0; i < 3; ++i) {
        const PTermRef& ch = (i == 0 ? u->a : i == 1 ? u->b : u->c);
        if (ch) walk(ch, depth + (child_under_binders(u->kind, i) ? ar : 0));
      }
    };
    walk(body->b, 0);
    if (used) return false;
    inner = body->b;
    return true;
  }

  void print(const PTermRef& t, bool atomPos, std::string& out) {
    switch (t->kind) {
      case TermKind::FreeVar:
        out += t->name;
        return;
      case TermKind::BoundVar:
        if (static_cast<std::size_t>(t->n) >= scope.size()) {
          out += "#" + std::to_string(t->n);
          return;
        }
        out += scope[scope.size() - 1 - static_cast<std::size_t>(t->n)];
        return;
      case TermKind::ConstTerm:
        out += t->name;
        return;
      case TermKind::Star:
        out += "unit";
        return;
      case TermKind::Pair:
        out += "<";
        print(t->a, false, out);
        out += ", ";
        print(t->b, false, out);
        out += ">";
        return;
      case TermKind::Lam: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        PTermRef inner;
        if (lam_star_sugar(t, inner)) {
          out += "lam *. ";
          scope.push_back("_");
          print(inner, false, out);
          scope.pop_back();
          return;
        }
        std::string x = fresh(t->hint);
        out += "lam " + x + ". ";
        taken.insert(x);
        scope.push_back(x);
        print(t->a, false, out);
        scope.pop_back();
        taken.erase(x);
        return;
      }
      case TermKind::App: {
        if (t->a->kind == TermKind::Lam) {
          if (atomPos) {
            out += "(";
            print(t, false, out);
            out += ")";
            return;
          }
          std::string x = fresh(t->a->hint);
          out += "let " + x + " = ";
          print(t->b, false, out);
          out += " in ";
          taken.insert(x);
          scope.push_back(x);
          print(t->a->a, false, out);
          scope.pop_back();
          taken.erase(x);
          return;
        }
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        if (t->a->kind == TermKind::App && t->a->a->kind != TermKind::Lam) {
          print(t->a, false, out);
        } else {
          print(t->a, true, out);
        }
        out += " ";
        print(t->b, true, out);
        return;
      }
      case TermKind::LetPair: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        std::string x = fresh(t->hint);
        taken.insert(x);
        std::string y = fresh(t->hint2.empty() ? "y" : t->hint2);
        taken.insert(y);
        out += "let <" + x + ", " + y + "> = ";
        print(t->a, false, out);
        out += " in ";
        scope.push_back(x);
        scope.push_back(y);
        print(t->b, false, out);
        scope.pop_back();
        scope.pop_back();
        taken.erase(x);
        taken.erase(y);
        return;
      }
      case TermKind::LetUnit: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        out += "let * = ";
        print(t->a, false, out);
        out += " in ";
        print(t->b, false, out);
        return;
      }
      case TermKind::If: {
        if (atomPos) {
          out += "(";
          print(t, false, out);
          out += ")";
          return;
        }
        out += "if ";
        print(t->a, false, out);
        out += " then ";
        print(t->b, false, out);
        out += " else ";
        print(t->c, false, out);
        return;
      }
    }
  }
};

}  // namespace

std::string print_pterm(const PTermRef& t) {
  PPrinter p;
  for (const auto& x : free_vars(t)) p.taken.insert(x);
  std::string out;
  p.print(t, false, out);
  return out;
}

PTermRef erase(const TermRef& t) {
  if (!t) return nullptr;
  switch (t->kind) {
    case TermKind::FreeVar: return PTerm::free_var(t->name);
    case TermKind::BoundVar: return PTerm::bound_var(t->n);
    case TermKind::ConstTerm: return PTerm::constant(t->name);
    case TermKind::Star: return PTerm::star();
    case TermKind::Lam: return pmake(TermKind::Lam, 0, "", t->hint, "", erase(t->a), nullptr, nullptr);
    case TermKind::App: return PTerm::app(erase(t->a), erase(t->b));
    case TermKind::Pair: return PTerm::pair(erase(t->a), erase(t->b));
    case TermKind::LetPair:
      return pmake(TermKind::LetPair, 0, "", t->hint, t->hint2, erase(t->a), erase(t->b), nullptr);
    case TermKind::LetUnit: return PTerm::let_unit(erase(t->a), erase(t->b));
    case TermKind::If: return PTerm::if_(erase(t->a), erase(t->b), erase(t->c));
  }
  return nullptr;
}

}  // namespace linlam
