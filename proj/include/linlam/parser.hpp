#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linlam/term.hpp"

namespace linlam {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line, int col);
};

// Type syntax: "-o" is right associative and binds loosest, "*" associates to
// the left, "!" binds tightest; "!^k" abbreviates k bangs; "top" is the unit
// type, any other identifier is a base type.
TypeRef parse_type(const std::string& src);

// Indexed terms. Every variable and constant occurrence is written "x:T" where
// T is atomic (top, an identifier, bangs of those) or parenthesized. Identifier
// occurrences resolve to enclosing binders first, then to `constants`, then to
// free variables; digit-named atoms are always constants.
TermRef parse_term(const std::string& src, const std::set<std::string>& constants = {});

// Erased terms: same shapes, no annotations, no indices.
PTermRef parse_pterm(const std::string& src, const std::set<std::string>& constants = {});

using ContextEntry = std::pair<std::string, TypeRef>;

struct ParsedJudgment {
  std::vector<ContextEntry> ctx;
  TermRef term;
  TypeRef goal;  // null when no trailing ": T"
};

struct ParsedPJudgment {
  std::vector<ContextEntry> ctx;
  PTermRef term;
  TypeRef goal;
};

// "x : A, y : B |- M : C"; both the context part ("... |-") and the goal part
// (": C") are optional. "--" starts a line comment anywhere.
ParsedJudgment parse_judgment(const std::string& src,
                              const std::set<std::string>& constants = {});
ParsedPJudgment parse_pjudgment(const std::string& src,
                                const std::set<std::string>& constants = {});

}  // namespace linlam
