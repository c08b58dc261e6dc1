#pragma once

#include "linlam/rewrite.hpp"

namespace linlam {

// Decides derivability in the equational theory of the calculus. Equal is a
// proof (the recorded steps); Distinct is a refutation from a finite model;
// NotProvedEqual is an honest "neither".

enum class EqOutcome { Equal, Distinct, NotProvedEqual, DifferentJudgment };
const char* eq_outcome_name(EqOutcome o);

struct EqOptions {
  NormalizeOptions norm;
  int search_depth = 6;    // meet-in-the-middle search over alternative rewrites
  int search_nodes = 200;  // expansion cap per side
  bool use_model = true;   // attempt a finite-model separation before giving up
};

struct EqResult {
  EqOutcome outcome = EqOutcome::NotProvedEqual;
  std::string detail;
  TermRef left_normal, right_normal;
  std::vector<RewriteStep> left_steps, right_steps;
  explicit operator bool() const { return outcome == EqOutcome::Equal; }
};

// both derivations must share one judgment; the right context is renamed
// pointwise onto the left one first
EqResult ax_equal(const Signature& sig, const DerivRef& left, const DerivRef& right,
                  const EqOptions& opts = {});

}  // namespace linlam
