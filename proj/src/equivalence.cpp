#include "linlam/equivalence.hpp"

#include <deque>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace linlam {

const char* eq_outcome_name(EqOutcome o) {
  switch (o) {
    case EqOutcome::Equal:
      return "equal";
    case EqOutcome::Distinct:
      return "distinct";
    case EqOutcome::NotProvedEqual:
      return "not-proved-equal";
    case EqOutcome::DifferentJudgment:
      return "different-judgment";
  }
  return "?";
}

namespace {

// positional renaming of the free context names; closing everything first
// makes swaps safe
TermRef rename_ctx(const TermRef& t, const Context& from, const Context& to) {
  std::vector<std::string> f, g;
  f.reserve(from.items.size());
  g.reserve(to.items.size());
  for (const auto& b : from.items) f.push_back(b.name);
  for (const auto& b : to.items) g.push_back(b.name);
  return open_term(close_term(t, f), g);
}

}  // namespace

EqResult ax_equal(const Signature& sig, const DerivRef& left, const DerivRef& right,
                  const EqOptions& opts) {
  EqResult res;
  if (!left || !right) {
    res.outcome = EqOutcome::DifferentJudgment;
    res.detail = "missing derivation";
    return res;
  }
  if (left->ctx.size() != right->ctx.size() || !type_equal(left->type, right->type)) {
    res.outcome = EqOutcome::DifferentJudgment;
    res.detail = "contexts or result types do not line up";
    return res;
  }
  for (std::size_t i = 0; i < left->ctx.items.size(); ++i) {
    if (!type_equal(left->ctx.items[i].type, right->ctx.items[i].type)) {
      res.outcome = EqOutcome::DifferentJudgment;
      res.detail = "context entry " + std::to_string(i) + " differs";
      return res;
    }
  }

  TermRef rt = rename_ctx(right->term, right->ctx, left->ctx);
  TypingResult rr = check(sig, left->ctx, rt, left->type);
  if (!rr) {
    res.outcome = EqOutcome::DifferentJudgment;
    res.detail = "right term does not check after renaming";
    return res;
  }
  if (term_equal(left->term, rt)) {
    res.outcome = EqOutcome::Equal;
    res.detail = "identical up to names";
    res.left_normal = left->term;
    res.right_normal = rt;
    return res;
  }

  NormalizeResult nl = normalize(sig, left, opts.norm);
  NormalizeResult nr = normalize(sig, rr.deriv, opts.norm);
  if (!nl || !nr) {
    res.detail = "normalization failed: " + (nl ? nr.error : nl.error);
    return res;
  }
  res.left_normal = nl.deriv->term;
  res.right_normal = nr.deriv->term;
  res.left_steps = nl.steps;
  res.right_steps = nr.steps;
  if (term_equal(res.left_normal, res.right_normal)) {
    res.outcome = EqOutcome::Equal;
    res.detail = "common normal form";
    return res;
  }

  // the leftmost-first strategy can miss a meet; explore alternative first
  // steps from both ends, comparing normal forms
  if (opts.search_depth > 0 && opts.search_nodes > 0) {
    struct Side {
      std::deque<std::pair<TermRef, int>> frontier;
      std::unordered_set<TermRef, TermHash, TermEq> seen;
      std::unordered_set<TermRef, TermHash, TermEq> normals;
      int expanded = 0;
    };
    Side L, R;
    L.frontier.push_back({left->term, 0});
    L.seen.insert(left->term);
    L.normals.insert(res.left_normal);
    R.frontier.push_back({rt, 0});
    R.seen.insert(rt);
    R.normals.insert(res.right_normal);
    auto grow = [&](Side& s, const Side& other) -> bool {
      if (s.frontier.empty() || s.expanded >= opts.search_nodes) {
        s.frontier.clear();
        return false;
      }
      auto [t, depth] = s.frontier.front();
      s.frontier.pop_front();
      if (depth >= opts.search_depth) return false;
      ++s.expanded;
      TypingResult r = check(sig, left->ctx, t, left->type);
      if (!r) return false;
      for (const auto& c : rewrite_candidates(sig, r.deriv)) {
        if (!s.seen.insert(c.term).second) continue;
        TypingResult cr = check(sig, left->ctx, c.term, left->type);
        if (!cr) continue;
        NormalizeResult n = normalize(sig, cr.deriv, opts.norm);
        if (n && s.normals.insert(n.deriv->term).second &&
            other.normals.count(n.deriv->term)) {
          return true;
        }
        s.frontier.push_back({c.term, depth + 1});
      }
      return false;
    };
    while (!L.frontier.empty() || !R.frontier.empty()) {
      if (grow(L, R) || grow(R, L)) {
        res.outcome = EqOutcome::Equal;
        res.detail = "normal forms meet after search";
        return res;
      }
    }
  }

  res.outcome = EqOutcome::NotProvedEqual;
  res.detail = "normal forms differ";
  return res;
}

}  // namespace linlam
