#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linlam/equivalence.hpp"
#include "linlam/parser.hpp"

using namespace linlam;

namespace {

// exit codes: 0 accepted, 1 rejected input, 2 usage or parse error, 3 internal
constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

std::optional<std::string> read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) return std::nullopt;
  ss << f.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool build_signature(const std::vector<std::string>& defs, Signature& sig, std::string& err) {
  for (const auto& d : defs) {
    std::size_t pos = d.find('=');
    if (pos == std::string::npos) {
      err = "expected name=TYPE in --const " + d;
      return false;
    }
    std::string name = trim(d.substr(0, pos));
    if (name.empty()) {
      err = "empty constant name in --const " + d;
      return false;
    }
    sig[name] = parse_type(d.substr(pos + 1));
  }
  if (!signature_ok(sig)) {
    err = "every constant type must be banged";
    return false;
  }
  return true;
}

std::set<std::string> const_names(const Signature& sig) {
  std::set<std::string> out;
  for (const auto& [name, ty] : sig) out.insert(name);
  return out;
}

Context to_ctx(const std::vector<ContextEntry>& xs) {
  Context c;
  for (const auto& [name, ty] : xs) c.items.push_back({name, ty});
  return c;
}

int run_sub(const std::string& text) {
  std::size_t pos = text.find("<:");
  if (pos == std::string::npos) {
    std::cerr << "error: expected input of the form  A <: B\n";
    return kUsage;
  }
  TypeRef a = parse_type(text.substr(0, pos));
  TypeRef b = parse_type(text.substr(pos + 2));
  SubDerivRef d = derive_subtype(a, b);
  std::cout << print_subtype_derivation(d);
  return d ? kOk : kRejected;
}

int run_check(const Signature& sig, const std::string& text, SplitPolicy policy) {
  ParsedJudgment j = parse_judgment(text, const_names(sig));
  Context ctx = to_ctx(j.ctx);
  TypingResult r =
      j.goal ? check(sig, ctx, j.term, j.goal, policy) : synth(sig, ctx, j.term, policy);
  if (!r) {
    std::cerr << "error: " << type_error_kind_name(r.error->kind) << ": " << r.error->message
              << "\n";
    return kRejected;
  }
  std::cout << print_derivation(r.deriv);
  return kOk;
}

int run_infer(const Signature& sig, const std::string& text, const InferOptions& opts) {
  ParsedPJudgment j = parse_pjudgment(text, const_names(sig));
  Context ctx = to_ctx(j.ctx);
  InferResult r = infer(sig, ctx, j.term, j.goal, opts);
  std::cout << "status: " << infer_status_name(r.status) << "\n";
  for (const auto& s : r.solutions) {
    std::cout << print_judgment({ctx, s.deriv->term, s.deriv->type}) << "  -- cost " << s.cost
              << "\n";
  }
  for (const auto& c : r.candidates) std::cout << "candidate goal: " << print_type(c) << "\n";
  if (r.status != InferStatus::Ok) {
    if (!r.detail.empty()) std::cerr << r.detail << "\n";
    return kRejected;
  }
  return kOk;
}

int run_erase(const Signature& sig, const std::string& text) {
  ParsedJudgment j = parse_judgment(text, const_names(sig));
  std::cout << print_pterm(erase(j.term)) << "\n";
  return kOk;
}

int run_normalize(const Signature& sig, const std::string& text, const NormalizeOptions& opts,
                  bool trace) {
  ParsedJudgment j = parse_judgment(text, const_names(sig));
  Context ctx = to_ctx(j.ctx);
  TypingResult r = j.goal ? check(sig, ctx, j.term, j.goal) : synth(sig, ctx, j.term);
  if (!r) {
    std::cerr << "error: " << type_error_kind_name(r.error->kind) << ": " << r.error->message
              << "\n";
    return kRejected;
  }
  NormalizeResult n = normalize(sig, r.deriv, opts);
  if (!n) {
    std::cerr << "error: " << n.error << "\n";
    return kInternal;
  }
  if (trace) {
    for (const auto& s : n.steps) std::cout << s.rule << ": " << print_term(s.term) << "\n";
  }
  if (n.hit_step_limit) std::cerr << "note: stopped before a normal form\n";
  std::cout << print_judgment({n.deriv->ctx, n.deriv->term, n.deriv->type}) << "\n";
  return kOk;
}

int run_eq(const Signature& sig, const std::string& text, const EqOptions& opts) {
  // two judgments separated by a line holding '=='
  std::istringstream in(text);
  std::string line, lhs, rhs;
  bool seen = false;
  while (std::getline(in, line)) {
    if (trim(line) == "==") {
      seen = true;
      continue;
    }
    (seen ? rhs : lhs) += line + "\n";
  }
  if (!seen) {
    std::cerr << "error: expected two judgments separated by a line holding ==\n";
    return kUsage;
  }
  auto derive = [&](const std::string& src) -> DerivRef {
    ParsedJudgment j = parse_judgment(src, const_names(sig));
    Context ctx = to_ctx(j.ctx);
    TypingResult r = j.goal ? check(sig, ctx, j.term, j.goal) : synth(sig, ctx, j.term);
    if (!r) {
      std::cerr << "error: " << type_error_kind_name(r.error->kind) << ": " << r.error->message
                << "\n";
      return nullptr;
    }
    return r.deriv;
  };
  DerivRef dl = derive(lhs), dr = derive(rhs);
  if (!dl || !dr) return kRejected;
  EqResult r = ax_equal(sig, dl, dr, opts);
  std::cout << eq_outcome_name(r.outcome) << ": " << r.detail << "\n";
  if (r.outcome != EqOutcome::Equal && r.left_normal && r.right_normal) {
    std::cout << "lhs normal: " << print_term(r.left_normal) << "\n";
    std::cout << "rhs normal: " << print_term(r.right_normal) << "\n";
  }
  return r.outcome == EqOutcome::Equal ? kOk : kRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for a linear lambda calculus with graded bang types"};
  app.require_subcommand(1);
  app.fallthrough();

  std::vector<std::string> constDefs;
  app.add_option("-c,--const", constDefs, "declare a constant as name=TYPE (repeatable)")
      ->type_size(1);

  std::string input = "-";
  auto addInput = [&input, &constDefs](CLI::App* sub) {
    sub->add_option("input", input, "input file, or - for stdin")->required();
    sub->add_option("-c,--const", constDefs, "declare a constant as name=TYPE (repeatable)")
        ->type_size(1);
  };

  CLI::App* sub = app.add_subcommand("sub", "decide  A <: B  and print the rule tree");
  addInput(sub);

  CLI::App* chk = app.add_subcommand("check", "type check a judgment and print its derivation");
  addInput(chk);
  std::string policyName = "copy-all";
  chk->add_option("--policy", policyName, "dummy routing: copy-all, dummies-left, dummies-right");

  CLI::App* inf = app.add_subcommand("infer", "decorate a bare term at an optional goal type");
  addInput(inf);
  InferOptions inferOpts;
  inf->add_option("--max-solutions", inferOpts.max_solutions, "solutions to enumerate");
  inf->add_option("--bang-budget", inferOpts.bang_budget, "total bang budget per solution");

  CLI::App* ers = app.add_subcommand("erase", "strip indices and annotations from a term");
  addInput(ers);

  CLI::App* nrm = app.add_subcommand("normalize", "rewrite a judgment to its normal form");
  addInput(nrm);
  NormalizeOptions normOpts;
  bool trace = false;
  nrm->add_flag("--trace", trace, "print every rewrite step");
  nrm->add_option("--max-steps", normOpts.max_steps, "step budget");
  bool noCanon = false;
  nrm->add_flag("--no-canon", noCanon, "skip canonical re-indexing between steps");

  CLI::App* eqc = app.add_subcommand("eq", "decide two judgments equal (separator line: ==)");
  addInput(eqc);
  EqOptions eqOpts;
  eqc->add_option("--search-depth", eqOpts.search_depth, "fallback search depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Signature sig;
    std::string err;
    if (!build_signature(constDefs, sig, err)) {
      std::cerr << "error: " << err << "\n";
      return kUsage;
    }
    auto text = read_input(input);
    if (!text) {
      std::cerr << "error: cannot open " << input << "\n";
      return kUsage;
    }
    if (sub->parsed()) return run_sub(*text);
    if (chk->parsed()) {
      SplitPolicy policy;
      if (policyName == "copy-all")
        policy = SplitPolicy::CopyAll;
      else if (policyName == "dummies-left")
        policy = SplitPolicy::DummiesLeft;
      else if (policyName == "dummies-right")
        policy = SplitPolicy::DummiesRight;
      else {
        std::cerr << "error: unknown policy " << policyName << "\n";
        return kUsage;
      }
      return run_check(sig, *text, policy);
    }
    if (inf->parsed()) return run_infer(sig, *text, inferOpts);
    if (ers->parsed()) return run_erase(sig, *text);
    if (nrm->parsed()) {
      normOpts.canon = !noCanon;
      return run_normalize(sig, *text, normOpts, trace);
    }
    if (eqc->parsed()) return run_eq(sig, *text, eqOpts);
    std::cerr << "error: no subcommand\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
