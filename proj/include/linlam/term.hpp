#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linlam/type.hpp"

namespace linlam {

// Indexed terms, locally nameless: context variables are named (FreeVar), binder
// occurrences are de Bruijn (BoundVar), so alpha equality is structural equality.
// Binder arities: Lam binds 1, LetPair binds 2 (in its body, index 1 is the left
// binder and index 0 the right one), LetUnit and If bind nothing. Plain
// `let x = M in N` is not a constructor; it is App(Lam^0(x, N), M).
// Every variable and constant occurrence carries its instance annotation.

class Term;
using TermRef = std::shared_ptr<const Term>;

enum class TermKind { FreeVar, BoundVar, ConstTerm, Star, Lam, App, Pair, LetPair, LetUnit, If };

class Term {
public:
  TermKind kind;
  int n = 0;                 // Lam/Pair/LetPair/Star index; BoundVar: de Bruijn index
  std::string name;          // FreeVar / ConstTerm
  TypeRef ann;               // occurrence annotation; Lam binder type; LetPair left binder type
  TypeRef ann2;              // LetPair right binder type
  std::string hint, hint2;   // binder name hints; not part of equality or hashing
  TermRef a, b, c;           // children, see factories
  std::size_t hash = 0;
  int size = 1;
  int line = 0, col = 0;     // source location when parsed, 0 = none

  static TermRef free_var(const std::string& x, TypeRef ann);
  static TermRef bound_var(int idx, TypeRef ann);
  static TermRef constant(const std::string& c, TypeRef ann);
  static TermRef star(int n);
  // body uses BoundVar(0) for the binder
  static TermRef lam(int n, const std::string& hint, TypeRef binderAnn, TermRef body);
  static TermRef app(TermRef fn, TermRef arg);
  static TermRef pair(int n, TermRef l, TermRef r);
  // body uses BoundVar(1) for x and BoundVar(0) for y; annx/anny are the unbanged
  // component types (the bound variables are typed at !^n annx, !^n anny)
  static TermRef let_pair(int n, const std::string& hx, TypeRef annx, const std::string& hy,
                          TypeRef anny, TermRef subject, TermRef body);
  static TermRef let_unit(TermRef subject, TermRef body);
  static TermRef if_(TermRef cond, TermRef thenB, TermRef elseB);

  // named-body conveniences: close the given free names into binder indices
  static TermRef lam_named(int n, const std::string& x, TypeRef binderAnn, TermRef body);
  static TermRef let_pair_named(int n, const std::string& x, TypeRef annx, const std::string& y,
                                TypeRef anny, TermRef subject, TermRef body);
  // plain let sugar: App(Lam^0(x, body), subject)
  static TermRef let_named(const std::string& x, TypeRef ann, TermRef subject, TermRef body);
};

bool term_equal(const TermRef& a, const TermRef& b);  // alpha equality
inline bool alpha_eq(const TermRef& a, const TermRef& b) { return term_equal(a, b); }

enum class Classification { CoreValue, Value, Computation };
Classification classify(const TermRef& t);
inline bool is_value(const TermRef& t) { return classify(t) != Classification::Computation; }

// plain-let view of App(Lam^0 ...)
struct PlainLet {
  std::string hint;
  TypeRef ann;
  TermRef subject;  // the App argument
  TermRef body;     // the Lam body (BoundVar(0) = binder)
};
std::optional<PlainLet> as_plain_let(const TermRef& t);

// free occurrences: name -> annotations in left-to-right order
struct FreeOcc {
  std::string name;
  std::vector<TypeRef> anns;
};
std::vector<FreeOcc> free_vars(const TermRef& t);
bool occurs_free(const TermRef& t, const std::string& x);

// replace binder indices with free names (one name per binder, outermost first)
TermRef open_term(const TermRef& body, const std::vector<std::string>& names);
// inverse of open_term
TermRef close_term(const TermRef& t, const std::vector<std::string>& names);
// replace each free occurrence x^{A'} by repl(A'); repl must return a closed value
TermRef subst_free(const TermRef& t, const std::string& x,
                   const std::function<TermRef(const TypeRef&)>& repl);

std::string print_term(const TermRef& t);

struct TermHash {
  std::size_t operator()(const TermRef& t) const { return t ? t->hash : 0; }
};
struct TermEq {
  bool operator()(const TermRef& a, const TermRef& b) const { return term_equal(a, b); }
};

// ---------------------------------------------------------------------------
// Pure (erased) terms: same shape, no annotations, no indices.

class PTerm;
using PTermRef = std::shared_ptr<const PTerm>;

class PTerm {
public:
  TermKind kind;
  int n = 0;                // BoundVar index only
  std::string name;         // FreeVar / ConstTerm
  std::string hint, hint2;  // binder hints
  PTermRef a, b, c;
  std::size_t hash = 0;
  int size = 1;
  int line = 0, col = 0;

  static PTermRef free_var(const std::string& x);
  static PTermRef bound_var(int idx);
  static PTermRef constant(const std::string& c);
  static PTermRef star();
  static PTermRef lam(const std::string& hint, PTermRef body);
  static PTermRef app(PTermRef fn, PTermRef arg);
  static PTermRef pair(PTermRef l, PTermRef r);
  static PTermRef let_pair(const std::string& hx, const std::string& hy, PTermRef subject,
                           PTermRef body);
  static PTermRef let_unit(PTermRef subject, PTermRef body);
  static PTermRef if_(PTermRef cond, PTermRef thenB, PTermRef elseB);

  static PTermRef lam_named(const std::string& x, PTermRef body);
  static PTermRef let_pair_named(const std::string& x, const std::string& y, PTermRef subject,
                                 PTermRef body);
  static PTermRef let_named(const std::string& x, PTermRef subject, PTermRef body);
};

bool pterm_equal(const PTermRef& a, const PTermRef& b);
Classification classify(const PTermRef& t);
inline bool is_value(const PTermRef& t) { return classify(t) != Classification::Computation; }
std::vector<std::string> free_vars(const PTermRef& t);
bool occurs_free(const PTermRef& t, const std::string& x);
PTermRef open_pterm(const PTermRef& body, const std::vector<std::string>& names);
PTermRef close_pterm(const PTermRef& t, const std::vector<std::string>& names);
std::string print_pterm(const PTermRef& t);

PTermRef erase(const TermRef& t);

struct PTermHash {
  std::size_t operator()(const PTermRef& t) const { return t ? t->hash : 0; }
};
struct PTermEq {
  bool operator()(const PTermRef& a, const PTermRef& b) const { return pterm_equal(a, b); }
};

}  // namespace linlam
