#pragma once

#include <string>

#include "linlam/equivalence.hpp"
#include "linlam/infer.hpp"

// Programs as maps. An object is a type, a map from A to B is a value
// judgment x : A |- V : B taken up to provable equivalence, composition is
// substitution of the value for the variable, and map equality is decided by
// the prover. Structure maps are small program templates elaborated by index
// inference at their stated endpoint types, so this model exercises the
// calculus itself rather than an external semantics.
namespace linlam::yaq {

// rep is normalized at construction and its context variable is always "x".
struct Morphism {
  TypeRef dom;
  TypeRef cod;
  DerivRef rep;
};

std::string print_mor(const Morphism& f);

struct Model {
  using ObjT = TypeRef;
  using MorT = Morphism;

  Signature sig;
  EqOptions eqopts;
  InferOptions iopts;

  // value judgment over a one-entry context, any variable name
  Morphism from_deriv(const DerivRef& d) const;
  // pure template with one free variable z, elaborated at dom |- src : cod
  Morphism from_pure(const TypeRef& dom, const std::string& src, const TypeRef& cod) const;
  Morphism from_pure_tree(const TypeRef& dom, const PTermRef& p, const TypeRef& cod) const;

  TypeRef unit_obj() const;
  TypeRef tensor_obj(const TypeRef& a, const TypeRef& b) const;
  TypeRef L_obj(const TypeRef& a) const;
  TypeRef T_obj(const TypeRef& a) const;
  TypeRef lolli_obj(const TypeRef& a, const TypeRef& b) const;
  bool obj_eq(const TypeRef& a, const TypeRef& b) const;
  std::string show_obj(const TypeRef& a) const;

  Morphism id(const TypeRef& a) const;
  Morphism compose(const Morphism& f, const Morphism& g) const;  // f then g
  Morphism tensor_mor(const Morphism& f, const Morphism& g) const;

  Morphism alpha(const TypeRef& a, const TypeRef& b, const TypeRef& c) const;  // A(BC) -> (AB)C
  Morphism alpha_inv(const TypeRef& a, const TypeRef& b, const TypeRef& c) const;
  Morphism lunit(const TypeRef& a) const;  // TOP (x) A -> A
  Morphism lunit_inv(const TypeRef& a) const;
  Morphism runit(const TypeRef& a) const;  // A (x) TOP -> A
  Morphism runit_inv(const TypeRef& a) const;
  Morphism swap_(const TypeRef& a, const TypeRef& b) const;

  Morphism L_mor(const Morphism& f) const;
  Morphism eps(const TypeRef& a) const;    // !A -> A
  Morphism delta(const TypeRef& a) const;  // !A -> !!A
  Morphism dL(const TypeRef& a, const TypeRef& b) const;  // !A (x) !B -> !(A(x)B)
  Morphism dL_inv(const TypeRef& a, const TypeRef& b) const;
  Morphism dL_unit() const;  // TOP -> !TOP
  Morphism dL_unit_inv() const;
  Morphism dup(const TypeRef& a) const;   // !A -> !A (x) !A
  Morphism drop(const TypeRef& a) const;  // !A -> TOP

  Morphism T_mor(const Morphism& f) const;
  Morphism eta(const TypeRef& a) const;  // A -> TA
  Morphism mu(const TypeRef& a) const;   // TTA -> TA
  Morphism strength(const TypeRef& a, const TypeRef& b) const;  // A (x) TB -> T(A(x)B)

  Morphism lolli_mor(const Morphism& f, const Morphism& g) const;
  Morphism app_map(const TypeRef& a, const TypeRef& b) const;  // (A-oB) (x) A -> TB
  Morphism Phi(const Morphism& f) const;
  Morphism Phi_inv(const Morphism& g) const;

  bool mor_eq(const Morphism& f, const Morphism& g) const;
};

// constants denote themselves: a base name is the type constant, a signature
// constant c : A becomes TOP -> A forcing its subject before returning c
struct Theta {
  TypeRef obj(const Model&, const std::string& name) const;
  template <class Den>
  Morphism constant(const Model& m, const std::string& name, const TypeRef& sigType,
                    Den&&) const {
    return constant_mor(m, name, sigType);
  }
  Morphism constant_mor(const Model& m, const std::string& name, const TypeRef& sigType) const;
};

}  // namespace linlam::yaq
