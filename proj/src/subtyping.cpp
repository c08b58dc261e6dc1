#include "linlam/subtyping.hpp"

namespace linlam {

bool is_subtype(const TypeRef& a, const TypeRef& b) {
  StrippedType sa = strip(a), sb = strip(b);
  if (sb.bangs >= 1 && sa.bangs < 1) return false;
  const Type& x = *sa.core;
  const Type& y = *sb.core;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case TypeKind::Const: return x.name == y.name;
    case TypeKind::Unit: return true;
    case TypeKind::Arrow:
      return is_subtype(y.left, x.left) && is_subtype(x.right, y.right);
    case TypeKind::Tensor:
      return is_subtype(x.left, y.left) && is_subtype(x.right, y.right);
    case TypeKind::Bang: break;  // strip removed these
  }
  return false;
}

namespace {

SubDerivRef node(std::string rule, TypeRef l, TypeRef r, std::vector<SubDerivRef> ps) {
  auto d = std::make_shared<SubDeriv>();
  d->rule = std::move(rule);
  d->lhs = std::move(l);
  d->rhs = std::move(r);
  d->premises = std::move(ps);
  return d;
}

}  // namespace

SubDerivRef derive_subtype(const TypeRef& a, const TypeRef& b) {
  StrippedType sa = strip(a), sb = strip(b);
  // every rule carries the same side condition on the prefixes
  if (!(sb.bangs == 0 || sa.bangs >= 1)) return nullptr;
  const TypeRef& x = sa.core;
  const TypeRef& y = sb.core;
  if (x->kind == TypeKind::Const && y->kind == TypeKind::Const && x->name == y->name) {
    return node("base", a, b, {});
  }
  if (x->kind == TypeKind::Unit && y->kind == TypeKind::Unit) {
    return node("top", a, b, {});
  }
  if (x->kind == TypeKind::Arrow && y->kind == TypeKind::Arrow) {
    SubDerivRef dom = derive_subtype(y->left, x->left);
    if (!dom) return nullptr;
    SubDerivRef cod = derive_subtype(x->right, y->right);
    if (!cod) return nullptr;
    return node("arrow", a, b, {dom, cod});
  }
  if (x->kind == TypeKind::Tensor && y->kind == TypeKind::Tensor) {
    SubDerivRef l = derive_subtype(x->left, y->left);
    if (!l) return nullptr;
    SubDerivRef r = derive_subtype(x->right, y->right);
    if (!r) return nullptr;
    return node("tensor", a, b, {l, r});
  }
  return nullptr;
}

bool valid_subtype_derivation(const SubDerivRef& d) {
  if (!d || !d->lhs || !d->rhs) return false;
  StrippedType sa = strip(d->lhs), sb = strip(d->rhs);
  if (!(sb.bangs == 0 || sa.bangs >= 1)) return false;
  const TypeRef& x = sa.core;
  const TypeRef& y = sb.core;
  if (d->rule == "base") {
    return d->premises.empty() && x->kind == TypeKind::Const && y->kind == TypeKind::Const &&
           x->name == y->name;
  }
  if (d->rule == "top") {
    return d->premises.empty() && x->kind == TypeKind::Unit && y->kind == TypeKind::Unit;
  }
  if (d->rule == "arrow") {
    if (d->premises.size() != 2 || x->kind != TypeKind::Arrow || y->kind != TypeKind::Arrow)
      return false;
    const SubDerivRef& dom = d->premises[0];
    const SubDerivRef& cod = d->premises[1];
    return type_equal(dom->lhs, y->left) && type_equal(dom->rhs, x->left) &&
           type_equal(cod->lhs, x->right) && type_equal(cod->rhs, y->right) &&
           valid_subtype_derivation(dom) && valid_subtype_derivation(cod);
  }
  if (d->rule == "tensor") {
    if (d->premises.size() != 2 || x->kind != TypeKind::Tensor || y->kind != TypeKind::Tensor)
      return false;
    const SubDerivRef& l = d->premises[0];
    const SubDerivRef& r = d->premises[1];
    return type_equal(l->lhs, x->left) && type_equal(l->rhs, y->left) &&
           type_equal(r->lhs, x->right) && type_equal(r->rhs, y->right) &&
           valid_subtype_derivation(l) && valid_subtype_derivation(r);
  }
  return false;
}

namespace {

void print_rec(const SubDerivRef& d, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "[" + d->rule + "] " + print_type(d->lhs) + " <: " + print_type(d->rhs) + "\n";
  for (const auto& p : d->premises) print_rec(p, depth + 1, out);
}

}  // namespace

std::string print_subtype_derivation(const SubDerivRef& d) {
  if (!d) return "(not derivable)\n";
  std::string out;
  print_rec(d, 0, out);
  return out;
}

}  // namespace linlam
