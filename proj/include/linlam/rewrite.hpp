#pragma once

#include "linlam/infer.hpp"

namespace linlam {

// Rewriting works on whole judgments: every step is re-checked at the original
// context and type, so a normal form is another derivation of the same judgment.

struct NormalizeOptions {
  int max_steps = 2000;
  bool canon = true;  // re-index the erasure canonically between structural steps
};

struct RewriteStep {
  std::string rule;
  TermRef term;  // the whole term after this step
};

struct NormalizeResult {
  DerivRef deriv;  // normal form at the original judgment
  std::vector<RewriteStep> steps;
  bool hit_step_limit = false;
  std::string error;  // set only when an internal invariant broke
  explicit operator bool() const { return deriv != nullptr && error.empty(); }
};

NormalizeResult normalize(const Signature& sig, const DerivRef& d,
                          const NormalizeOptions& opts = {});

// all single-step successors of the judgment, at every position
std::vector<RewriteStep> rewrite_candidates(const Signature& sig, const DerivRef& d);

}  // namespace linlam
