#pragma once

#include "linlam/typing.hpp"

namespace linlam {

struct InferOptions {
  int bang_budget = 16;   // total extra bangs, summed over all free positions
  int max_index = 16;     // cap per position
  int max_solutions = 1;
  bool use_cache = true;
  long work_budget = -1;  // search node visits before giving up; negative means no cap
};

// Untypeable: the erased term has no index assignment at all (shape level).
// NoSolution: none within the bang budget; deeper budgets might still work.
// Ambiguous: without a goal, the result type is not determined.
enum class InferStatus { Ok, Untypeable, NoSolution, Ambiguous };
const char* infer_status_name(InferStatus s);

struct InferSolution {
  DerivRef deriv;
  int cost;  // total bangs placed at free positions
};

struct InferResult {
  InferStatus status = InferStatus::NoSolution;
  std::vector<InferSolution> solutions;
  std::vector<TypeRef> candidates;  // Ambiguous: distinct result types seen
  bool budget_exhausted = false;
  std::string detail;
  explicit operator bool() const { return status == InferStatus::Ok; }
};

// Index assignment for an erased term against a context and an optional goal.
// The bang-erased shape of every annotation is forced by unification; only
// bang placements at application argument types, pair-elimination subject
// types, and a missing top-level goal are free. Those are searched lowest
// total count first, so the first solution is the canonical indexation.
// Without a goal, the result type is fixed at the lowest level that has any
// solution and must be unique there.
InferResult infer(const Signature& sig, const Context& ctx, const PTermRef& p,
                  const TypeRef& goal = nullptr, const InferOptions& opts = {});

void clear_infer_cache();

}  // namespace linlam
