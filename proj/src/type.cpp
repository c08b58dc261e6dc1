#include "linlam/type.hpp"

#include <functional>

namespace linlam {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

TypeRef make(TypeKind k, std::string name, TypeRef l, TypeRef r) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  t->name = std::move(name);
  t->left = std::move(l);
  t->right = std::move(r);
  std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b9u;
  int sz = 1;
  if (!t->name.empty()) h = mix(h, std::hash<std::string>{}(t->name));
  if (t->left) { h = mix(h, t->left->hash); sz += t->left->size; }
  if (t->right) { h = mix(h, t->right->hash); sz += t->right->size; }
  t->hash = h;
  t->size = sz;
  return t;
}

}  // namespace

TypeRef Type::constant(const std::string& n) { return make(TypeKind::Const, n, nullptr, nullptr); }
TypeRef Type::unit() {
  static TypeRef u = make(TypeKind::Unit, "", nullptr, nullptr);
  return u;
}
TypeRef Type::arrow(TypeRef dom, TypeRef cod) {
  return make(TypeKind::Arrow, "", std::move(dom), std::move(cod));
}
TypeRef Type::tensor(TypeRef l, TypeRef r) {
  return make(TypeKind::Tensor, "", std::move(l), std::move(r));
}
TypeRef Type::bang(TypeRef inner) { return make(TypeKind::Bang, "", std::move(inner), nullptr); }
TypeRef Type::bangN(TypeRef inner, int n) {
  TypeRef t = std::move(inner);
  for (int i = 0; i < n; ++i) t = bang(t);
  return t;
}

bool type_equal(const TypeRef& a, const TypeRef& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind || a->size != b->size) return false;
  switch (a->kind) {
    case TypeKind::Const: return a->name == b->name;
    case TypeKind::Unit: return true;
    case TypeKind::Bang: return type_equal(a->left, b->left);
    case TypeKind::Arrow:
    case TypeKind::Tensor:
      return type_equal(a->left, b->left) && type_equal(a->right, b->right);
  }
  return false;
}

StrippedType strip(const TypeRef& t) {
  int n = 0;
  TypeRef c = t;
  while (c && c->kind == TypeKind::Bang) {
    ++n;
    c = c->left;
  }
  return {n, c};
}

int leading_bangs(const TypeRef& t) { return strip(t).bangs; }
bool is_banged(const TypeRef& t) { return t && t->kind == TypeKind::Bang; }

namespace {

// precedence: arrow (lowest, right assoc) < tensor (left assoc) < bang/atoms
void print_rec(const TypeRef& t, int minPrec, std::string& out) {
  switch (t->kind) {
    case TypeKind::Const:
      out += t->name;
      return;
    case TypeKind::Unit:
      out += "top";
      return;
    case TypeKind::Bang:
      out += '!';
      print_rec(t->left, 3, out);
      return;
    case TypeKind::Tensor: {
      bool paren = minPrec > 2;
      if (paren) out += '(';
      print_rec(t->left, 2, out);
      out += " * ";
      print_rec(t->right, 3, out);
      if (paren) out += ')';
      return;
    }
    case TypeKind::Arrow: {
      bool paren = minPrec > 1;
      if (paren) out += '(';
      print_rec(t->left, 2, out);
      out += " -o ";
      print_rec(t->right, 1, out);
      if (paren) out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_type(const TypeRef& t) {
  std::string out;
  print_rec(t, 1, out);
  return out;
}

}  // namespace linlam
