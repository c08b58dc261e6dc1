#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linlam/subtyping.hpp"
#include "linlam/term.hpp"

namespace linlam {

struct Binding {
  std::string name;
  TypeRef type;
};

// ordered typing context; names are unique
class Context {
public:
  std::vector<Binding> items;

  Context() = default;
  explicit Context(std::vector<Binding> v) : items(std::move(v)) {}

  const TypeRef* lookup(const std::string& x) const;
  bool has(const std::string& x) const { return lookup(x) != nullptr; }
  bool all_banged() const;  // every entry has a leading bang
  Context extend(const std::string& x, TypeRef t) const;
  // entries restricted to `names`, original order kept
  Context restrict_to(const std::vector<std::string>& names) const;
  std::string fresh_name(const std::string& hint, const std::vector<std::string>& alsoAvoid) const;
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

bool context_equal(const Context& a, const Context& b);
// same names in the same order, pointwise a_i <: b_i
bool context_subtype(const Context& a, const Context& b);
std::string print_context(const Context& c);

// constant type table; every entry must be banged
using Signature = std::map<std::string, TypeRef>;
bool signature_ok(const Signature& sig);

struct Judgment {
  Context ctx;
  TermRef term;
  TypeRef type;
};
std::string print_judgment(const Judgment& j);

// Rule names: "var" "const" "unit" "lam" "lam-bang" "app" "pair" "pair-elim"
// "unit-elim" "if". A premise under a binder stores the opened body, with the
// binder appended to its context; the parent keeps the closed term.
struct Derivation;
using DerivRef = std::shared_ptr<const Derivation>;

struct Derivation {
  std::string rule;
  Context ctx;
  TermRef term;
  TypeRef type;
  std::vector<DerivRef> premises;
  SubDerivRef coercion;  // var/const: declared (or signature) type <: occurrence type
};

// How banged context entries that no premise needs are routed at splits.
// Linear entries always go to the unique premise that uses them; banged
// entries that are used go to every premise under CopyAll and only where used
// otherwise.
enum class SplitPolicy { CopyAll, DummiesLeft, DummiesRight };

enum class TypeErrorKind {
  UnboundVariable,
  UnknownConstant,
  LinearVariableReused,
  LinearVariableDropped,
  SubtypeFailure,
  NonBangedContext,
  AnnotationMismatch,
  ShapeMismatch,
  InternalError
};
const char* type_error_kind_name(TypeErrorKind k);

struct TypeError {
  TypeErrorKind kind;
  std::string message;
};

struct TypingResult {
  DerivRef deriv;
  std::optional<TypeError> error;
  explicit operator bool() const { return deriv != nullptr; }
};

// Annotations and indices determine the whole derivation, so synthesis is
// deterministic up to dummy routing.
TypingResult synth(const Signature& sig, const Context& ctx, const TermRef& t,
                   SplitPolicy policy = SplitPolicy::CopyAll);
TypingResult check(const Signature& sig, const Context& ctx, const TermRef& t, const TypeRef& goal,
                   SplitPolicy policy = SplitPolicy::CopyAll);

// Rule-by-rule validation of a finished derivation. Checks every node's shape,
// premise judgments, context splits and leaf side conditions directly against
// the rules; it never calls synth.
bool replay(const Signature& sig, const DerivRef& d, std::string* why = nullptr);

// Re-derive the same erasure at a narrower context and/or wider result type:
// newCtx pointwise <: d->ctx (same names, same order) and d->type <: newType.
// Narrowing the context never changes the term; widening the result only
// touches leaf annotations and lam/pair/unit indices.
DerivRef cast_derivation(const Signature& sig, const DerivRef& d, const Context& newCtx,
                         const TypeRef& newType, std::string* why = nullptr);

// For a value over a fully banged context: a value of one bang more, with the
// same erasure up to index bumps.
DerivRef promote_derivation(const Signature& sig, const DerivRef& d, std::string* why = nullptr);

// Replace free x throughout dM by dV's subject (a value typed exactly at x's
// declared type), splicing dV's context into dM's at x's position. Each
// occurrence x : B is replaced by dV's term cast to B. Context names of dV are
// renamed apart from dM's when they clash.
TypingResult substitute_derivation(const Signature& sig, const DerivRef& dV, const std::string& x,
                                   const DerivRef& dM);

// canonical form for comparing derivations of one judgment: resynthesize with
// dummies routed to the leftmost premise
DerivRef canonical_derivation(const Signature& sig, const DerivRef& d);

std::string print_derivation(const DerivRef& d);

}  // namespace linlam
