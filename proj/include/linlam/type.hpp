#pragma once

#include <memory>
#include <string>
#include <vector>

namespace linlam {

// Types of the calculus: constants, top (the tensor unit), linear arrows,
// tensors, and the ! modality. Immutable shared trees; hash and size are
// cached at construction so structural equality can bail out early.

class Type;
using TypeRef = std::shared_ptr<const Type>;

enum class TypeKind { Const, Unit, Arrow, Tensor, Bang };

class Type {
public:
  TypeKind kind;
  std::string name;       // Const only
  TypeRef left, right;    // Arrow: dom/cod, Tensor: l/r, Bang: left only
  std::size_t hash = 0;
  int size = 1;           // number of constructors

  static TypeRef constant(const std::string& n);
  static TypeRef unit();
  static TypeRef arrow(TypeRef dom, TypeRef cod);
  static TypeRef tensor(TypeRef l, TypeRef r);
  static TypeRef bang(TypeRef inner);
  static TypeRef bangN(TypeRef inner, int n);
};

bool type_equal(const TypeRef& a, const TypeRef& b);

// a with its leading bangs removed
struct StrippedType {
  int bangs;
  TypeRef core;
};
StrippedType strip(const TypeRef& t);
int leading_bangs(const TypeRef& t);
bool is_banged(const TypeRef& t);

std::string print_type(const TypeRef& t);

struct TypeHash {
  std::size_t operator()(const TypeRef& t) const { return t ? t->hash : 0; }
};
struct TypeEq {
  bool operator()(const TypeRef& a, const TypeRef& b) const { return type_equal(a, b); }
};

}  // namespace linlam
