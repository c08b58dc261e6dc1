#pragma once

#include <memory>
#include <string>
#include <vector>

#include "linlam/type.hpp"

namespace linlam {

// Decision procedure: strip the leading bangs off both sides, require the
// multiplicity side condition (right side unbanged, or left side banged), then
// compare the cores: base types by name, arrow contravariant in the domain,
// tensor componentwise.
bool is_subtype(const TypeRef& a, const TypeRef& b);

// Rule-instance search over the four inference rules, kept independent of
// is_subtype so the two can be checked against each other. Returns the full
// derivation tree, or null when the pair is not derivable.
struct SubDeriv;
using SubDerivRef = std::shared_ptr<const SubDeriv>;

struct SubDeriv {
  std::string rule;  // "base" | "top" | "arrow" | "tensor"
  TypeRef lhs, rhs;
  std::vector<SubDerivRef> premises;
};

SubDerivRef derive_subtype(const TypeRef& a, const TypeRef& b);

// checks one node's rule application (and recursively its premises)
bool valid_subtype_derivation(const SubDerivRef& d);

std::string print_subtype_derivation(const SubDerivRef& d);

}  // namespace linlam
