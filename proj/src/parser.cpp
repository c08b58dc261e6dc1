#include "linlam/parser.hpp"

#include <cctype>
#include <map>

namespace linlam {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      line(line),
      col(col) {}

namespace {

enum class Tok {
  LParen, RParen, Langle, Rangle, Comma, Dot, Colon, Equals, Star, Bang, Caret,
  Lolli, Turnstile, Ident, Nat, KwLam, KwLet, KwIn, KwIf, KwThen, KwElse,
  KwUnit, KwTop, End
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Langle: return "'<'";
    case Tok::Rangle: return "'>'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Star: return "'*'";
    case Tok::Bang: return "'!'";
    case Tok::Caret: return "'^'";
    case Tok::Lolli: return "'-o'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Ident: return "identifier";
    case Tok::Nat: return "number";
    case Tok::KwLam: return "'lam'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwUnit: return "'unit'";
    case Tok::KwTop: return "'top'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& src) {
  static const std::map<std::string, Tok> kw = {
      {"lam", Tok::KwLam}, {"let", Tok::KwLet},   {"in", Tok::KwIn},
      {"if", Tok::KwIf},   {"then", Tok::KwThen}, {"else", Tok::KwElse},
      {"unit", Tok::KwUnit}, {"top", Tok::KwTop}};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i + j] == '\n') { ++line; col = 1; } else { ++col; }
    }
    i += k;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { bump(1); continue; }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    int tl = line, tc = col;
    if (c == '-') {
      if (i + 1 < src.size() && src[i + 1] == 'o') {
        out.push_back({Tok::Lolli, "-o", tl, tc});
        bump(2);
        continue;
      }
      throw ParseError("stray '-'", tl, tc);
    }
    if (c == '|') {
      if (i + 1 < src.size() && src[i + 1] == '-') {
        out.push_back({Tok::Turnstile, "|-", tl, tc});
        bump(2);
        continue;
      }
      throw ParseError("stray '|'", tl, tc);
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", tl, tc}); bump(1); continue;
      case ')': out.push_back({Tok::RParen, ")", tl, tc}); bump(1); continue;
      case '<': out.push_back({Tok::Langle, "<", tl, tc}); bump(1); continue;
      case '>': out.push_back({Tok::Rangle, ">", tl, tc}); bump(1); continue;
      case ',': out.push_back({Tok::Comma, ",", tl, tc}); bump(1); continue;
      case '.': out.push_back({Tok::Dot, ".", tl, tc}); bump(1); continue;
      case ':': out.push_back({Tok::Colon, ":", tl, tc}); bump(1); continue;
      case '=': out.push_back({Tok::Equals, "=", tl, tc}); bump(1); continue;
      case '*': out.push_back({Tok::Star, "*", tl, tc}); bump(1); continue;
      case '!': out.push_back({Tok::Bang, "!", tl, tc}); bump(1); continue;
      case '^': out.push_back({Tok::Caret, "^", tl, tc}); bump(1); continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        num += src[i];
        bump(1);
      }
      out.push_back({Tok::Nat, num, tl, tc});
      continue;
    }
    if (ident_start(c)) {
      std::string id;
      while (i < src.size() && ident_char(src[i])) {
        id += src[i];
        bump(1);
      }
      auto it = kw.find(id);
      out.push_back({it == kw.end() ? Tok::Ident : it->second, id, tl, tc});
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Parser {
  std::vector<Token> ts;
  std::size_t pos = 0;
  const std::set<std::string>* constants;
  std::vector<std::string> scope;  // binder names, innermost last

  const Token& peek() const { return ts[pos]; }
  const Token& get() { return ts[pos++]; }
  bool at(Tok k) const { return ts[pos].kind == k; }
  bool eat(Tok k) {
    if (at(k)) { ++pos; return true; }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + ", got " + tok_name(peek().kind), peek().line, peek().col);
  }
  Token expect(Tok k) {
    if (!at(k)) fail(std::string("expected ") + tok_name(k));
    return get();
  }
  int expect_nat() {
    Token t = expect(Tok::Nat);
    return std::stoi(t.text);
  }
  int opt_index() {
    if (eat(Tok::Caret)) return expect_nat();
    return 0;
  }

  // ----- types -----

  TypeRef type_atom() {
    if (eat(Tok::KwTop)) return Type::unit();
    if (at(Tok::Ident)) return Type::constant(get().text);
    if (eat(Tok::LParen)) {
      TypeRef t = type_arrow();
      expect(Tok::RParen);
      return t;
    }
    fail("expected a type");
  }

  TypeRef type_bang() {
    if (eat(Tok::Bang)) {
      int m = 1;
      if (eat(Tok::Caret)) m = expect_nat();
      return Type::bangN(type_bang(), m);
    }
    return type_atom();
  }

  TypeRef type_tensor() {
    TypeRef l = type_bang();
    while (eat(Tok::Star)) l = Type::tensor(l, type_bang());
    return l;
  }

  TypeRef type_arrow() {
    TypeRef l = type_tensor();
    if (eat(Tok::Lolli)) return Type::arrow(l, type_arrow());
    return l;
  }

  // annotation on a variable or constant occurrence: atomic unless parenthesized
  TypeRef occ_type() {
    if (eat(Tok::Bang)) {
      int m = 1;
      if (eat(Tok::Caret)) m = expect_nat();
      return Type::bangN(occ_type(), m);
    }
    if (eat(Tok::KwTop)) return Type::unit();
    if (at(Tok::Ident)) return Type::constant(get().text);
    if (eat(Tok::LParen)) {
      TypeRef t = type_arrow();
      expect(Tok::RParen);
      return t;
    }
    fail("expected a type annotation");
  }

  // ----- indexed terms -----

  TermRef resolve(const std::string& name, TypeRef ann) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == name) {
        return Term::bound_var(static_cast<int>(scope.size() - 1 - i), std::move(ann));
      }
    }
    if (constants && constants->count(name)) return Term::constant(name, std::move(ann));
    return Term::free_var(name, std::move(ann));
  }

  bool atom_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Nat:
      case Tok::KwUnit:
      case Tok::Langle:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  TermRef term() {
    if (eat(Tok::KwLam)) {
      int n = opt_index();
      if (eat(Tok::Star)) {
        int m = 0;
        if (eat(Tok::Caret)) m = expect_nat();
        expect(Tok::Dot);
        scope.push_back("_");
        TermRef body = term();
        scope.pop_back();
        return Term::lam(n, "_", Type::bangN(Type::unit(), m),
                         Term::let_unit(Term::bound_var(0, Type::unit()), body));
      }
      std::string x = expect(Tok::Ident).text;
      expect(Tok::Colon);
      TypeRef ty = type_arrow();
      expect(Tok::Dot);
      scope.push_back(x);
      TermRef body = term();
      scope.pop_back();
      return Term::lam(n, x, ty, body);
    }
    if (eat(Tok::KwLet)) {
      if (eat(Tok::Star)) {
        expect(Tok::Equals);
        TermRef m = term();
        expect(Tok::KwIn);
        TermRef b = term();
        return Term::let_unit(m, b);
      }
      if (eat(Tok::Langle)) {
        std::string x = expect(Tok::Ident).text;
        expect(Tok::Colon);
        TypeRef tx = type_arrow();
        expect(Tok::Comma);
        std::string y = expect(Tok::Ident).text;
        expect(Tok::Colon);
        TypeRef ty = type_arrow();
        expect(Tok::Rangle);
        int n = opt_index();
        expect(Tok::Equals);
        TermRef m = term();
        expect(Tok::KwIn);
        scope.push_back(x);
        scope.push_back(y);
        TermRef b = term();
        scope.pop_back();
        scope.pop_back();
        return Term::let_pair(n, x, tx, y, ty, m, b);
      }
      std::string x = expect(Tok::Ident).text;
      expect(Tok::Colon);
      TypeRef ty = type_arrow();
      expect(Tok::Equals);
      TermRef m = term();
      expect(Tok::KwIn);
      scope.push_back(x);
      TermRef b = term();
      scope.pop_back();
      return Term::app(Term::lam(0, x, ty, b), m);
    }
    if (eat(Tok::KwIf)) {
      TermRef c = term();
      expect(Tok::KwThen);
      TermRef t = term();
      expect(Tok::KwElse);
      TermRef e = term();
      return Term::if_(c, t, e);
    }
    if (!atom_start()) fail("expected a term");
    TermRef f = atom();
    while (atom_start()) f = Term::app(f, atom());
    return f;
  }

  TermRef atom() {
    if (at(Tok::Ident) || at(Tok::Nat)) {
      Token t = get();
      expect(Tok::Colon);
      TypeRef ann = occ_type();
      if (t.kind == Tok::Nat) return Term::constant(t.text, ann);
      return resolve(t.text, ann);
    }
    if (eat(Tok::KwUnit)) return Term::star(opt_index());
    if (eat(Tok::Langle)) {
      TermRef l = term();
      expect(Tok::Comma);
      TermRef r = term();
      expect(Tok::Rangle);
      return Term::pair(opt_index(), l, r);
    }
    expect(Tok::LParen);
    TermRef t = term();
    expect(Tok::RParen);
    return t;
  }

  // ----- erased terms -----

  PTermRef presolve(const std::string& name) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == name) return PTerm::bound_var(static_cast<int>(scope.size() - 1 - i));
    }
    if (constants && constants->count(name)) return PTerm::constant(name);
    return PTerm::free_var(name);
  }

  PTermRef pterm() {
    if (eat(Tok::KwLam)) {
      if (eat(Tok::Star)) {
        expect(Tok::Dot);
        scope.push_back("_");
        PTermRef body = pterm();
        scope.pop_back();
        return PTerm::lam("_", PTerm::let_unit(PTerm::bound_var(0), body));
      }
      std::string x = expect(Tok::Ident).text;
      expect(Tok::Dot);
      scope.push_back(x);
      PTermRef body = pterm();
      scope.pop_back();
      return PTerm::lam(x, body);
    }
    if (eat(Tok::KwLet)) {
      if (eat(Tok::Star)) {
        expect(Tok::Equals);
        PTermRef m = pterm();
        expect(Tok::KwIn);
        return PTerm::let_unit(m, pterm());
      }
      if (eat(Tok::Langle)) {
        std::string x = expect(Tok::Ident).text;
        expect(Tok::Comma);
        std::string y = expect(Tok::Ident).text;
        expect(Tok::Rangle);
        expect(Tok::Equals);
        PTermRef m = pterm();
        expect(Tok::KwIn);
        scope.push_back(x);
        scope.push_back(y);
        PTermRef b = pterm();
        scope.pop_back();
        scope.pop_back();
        return PTerm::let_pair(x, y, m, b);
      }
      std::string x = expect(Tok::Ident).text;
      expect(Tok::Equals);
      PTermRef m = pterm();
      expect(Tok::KwIn);
      scope.push_back(x);
      PTermRef b = pterm();
      scope.pop_back();
      return PTerm::app(PTerm::lam(x, b), m);
    }
    if (eat(Tok::KwIf)) {
      PTermRef c = pterm();
      expect(Tok::KwThen);
      PTermRef t = pterm();
      expect(Tok::KwElse);
      return PTerm::if_(c, t, pterm());
    }
    if (!atom_start()) fail("expected a term");
    PTermRef f = patom();
    while (atom_start()) f = PTerm::app(f, patom());
    return f;
  }

  PTermRef patom() {
    if (at(Tok::Ident)) return presolve(get().text);
    if (at(Tok::Nat)) return PTerm::constant(get().text);
    if (eat(Tok::KwUnit)) return PTerm::star();
    if (eat(Tok::Langle)) {
      PTermRef l = pterm();
      expect(Tok::Comma);
      PTermRef r = pterm();
      expect(Tok::Rangle);
      return PTerm::pair(l, r);
    }
    expect(Tok::LParen);
    PTermRef t = pterm();
    expect(Tok::RParen);
    return t;
  }

  // ----- judgments -----

  bool has_turnstile() const {
    for (const auto& t : ts) {
      if (t.kind == Tok::Turnstile) return true;
    }
    return false;
  }

  std::vector<ContextEntry> context() {
    std::vector<ContextEntry> ctx;
    if (eat(Tok::Turnstile)) return ctx;
    while (true) {
      Token x = expect(Tok::Ident);
      expect(Tok::Colon);
      TypeRef ty = type_arrow();
      for (const auto& e : ctx) {
        if (e.first == x.text) throw ParseError("duplicate context variable " + x.text, x.line, x.col);
      }
      ctx.emplace_back(x.text, ty);
      if (eat(Tok::Comma)) continue;
      expect(Tok::Turnstile);
      return ctx;
    }
  }

  void done() {
    if (!at(Tok::End)) fail("trailing input");
  }
};

}  // namespace

TypeRef parse_type(const std::string& src) {
  Parser p{lex(src), 0, nullptr, {}};
  TypeRef t = p.type_arrow();
  p.done();
  return t;
}

TermRef parse_term(const std::string& src, const std::set<std::string>& constants) {
  Parser p{lex(src), 0, &constants, {}};
  TermRef t = p.term();
  p.done();
  return t;
}

PTermRef parse_pterm(const std::string& src, const std::set<std::string>& constants) {
  Parser p{lex(src), 0, &constants, {}};
  PTermRef t = p.pterm();
  p.done();
  return t;
}

ParsedJudgment parse_judgment(const std::string& src, const std::set<std::string>& constants) {
  Parser p{lex(src), 0, &constants, {}};
  ParsedJudgment j;
  if (p.has_turnstile()) j.ctx = p.context();
  j.term = p.term();
  if (p.eat(Tok::Colon)) j.goal = p.type_arrow();
  p.done();
  return j;
}

ParsedPJudgment parse_pjudgment(const std::string& src, const std::set<std::string>& constants) {
  Parser p{lex(src), 0, &constants, {}};
  ParsedPJudgment j;
  if (p.has_turnstile()) j.ctx = p.context();
  j.term = p.pterm();
  if (p.eat(Tok::Colon)) j.goal = p.type_arrow();
  p.done();
  return j;
}

}  // namespace linlam
