#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace linlam::fin {

// A small concrete category for deciding equalities by evaluation: objects are
// finite shapes, effects are exact rational distributions, and functions are
// compared pointwise on a finite probe family of their domain. The bang is the
// identity comonad, so every object carries a comonoid.

class Obj;
using ObjRef = std::shared_ptr<const Obj>;

enum class ObjKind { Base, Unit, Tensor, Dist, Fun };

class Obj {
public:
  ObjKind kind;
  int card = 0;       // Base only
  ObjRef left, right; // Tensor: both; Dist: left; Fun: left = dom, right = cod
  std::size_t hash = 0;

  static ObjRef base(int card);
  static ObjRef unit();
  static ObjRef tensor(ObjRef l, ObjRef r);
  static ObjRef dist(ObjRef a);
  static ObjRef fun(ObjRef dom, ObjRef cod);
};

bool obj_equal(const ObjRef& a, const ObjRef& b);
std::string print_obj(const ObjRef& o);

class El;
using ElRef = std::shared_ptr<const El>;

struct WeightedEl {
  mpq_class w;
  ElRef el;
};

class El {
public:
  ObjKind kind;
  int point = 0; // Base
  ElRef l, r;    // Tensor
  std::vector<WeightedEl> parts;          // Dist; weights positive, sum 1
  std::function<ElRef(const ElRef&)> fn;  // Fun

  static ElRef pt(int p);
  static ElRef unit_el();
  static ElRef pair(ElRef l, ElRef r);
  static ElRef distribution(std::vector<WeightedEl> parts);
  static ElRef point_mass(ElRef x);
  static ElRef function(std::function<ElRef(const ElRef&)> f);
};

// representative inputs for pointwise comparison; cached per object
const std::vector<ElRef>& probes(const ObjRef& o);

bool el_equal(const ObjRef& o, const ElRef& x, const ElRef& y);
std::string print_el(const ObjRef& o, const ElRef& x);

// deterministic element of an object, varied by seed
ElRef seeded_element(const ObjRef& o, std::uint64_t seed);
std::uint64_t el_fingerprint(const ObjRef& o, const ElRef& x);

struct Mor {
  ObjRef dom, cod;
  std::function<ElRef(const ElRef&)> f;
};

// Mutations break one structure map each, for validating the law checker:
// 1 duplicate pins the second copy, 2 swap twists base points, 3 join keeps
// only the heaviest outcome, 4 strength keeps only the first outcome,
// 5 application ignores its argument.
struct Model {
  using ObjT = ObjRef;
  using MorT = Mor;

  int mutation = 0;

  ObjRef unit_obj() const;
  ObjRef tensor_obj(const ObjRef& a, const ObjRef& b) const;
  ObjRef L_obj(const ObjRef& a) const;
  ObjRef T_obj(const ObjRef& a) const;
  ObjRef lolli_obj(const ObjRef& a, const ObjRef& b) const;
  bool obj_eq(const ObjRef& a, const ObjRef& b) const;
  std::string show_obj(const ObjRef& a) const;

  Mor id(const ObjRef& a) const;
  Mor compose(const Mor& f, const Mor& g) const; // f then g
  Mor tensor_mor(const Mor& f, const Mor& g) const;

  Mor alpha(const ObjRef& a, const ObjRef& b, const ObjRef& c) const;     // A(BC) -> (AB)C
  Mor alpha_inv(const ObjRef& a, const ObjRef& b, const ObjRef& c) const;
  Mor lunit(const ObjRef& a) const;      // TOP (x) A -> A
  Mor lunit_inv(const ObjRef& a) const;
  Mor runit(const ObjRef& a) const;      // A (x) TOP -> A
  Mor runit_inv(const ObjRef& a) const;
  Mor swap_(const ObjRef& a, const ObjRef& b) const;

  Mor L_mor(const Mor& f) const;
  Mor eps(const ObjRef& a) const;   // LA -> A
  Mor delta(const ObjRef& a) const; // LA -> LLA
  Mor dL(const ObjRef& a, const ObjRef& b) const;     // LA (x) LB -> L(A(x)B)
  Mor dL_inv(const ObjRef& a, const ObjRef& b) const;
  Mor dL_unit() const;     // TOP -> L TOP
  Mor dL_unit_inv() const;
  Mor dup(const ObjRef& a) const;  // LA -> LA (x) LA
  Mor drop(const ObjRef& a) const; // LA -> TOP

  Mor T_mor(const Mor& f) const;
  Mor eta(const ObjRef& a) const;      // A -> TA
  Mor mu(const ObjRef& a) const;       // TTA -> TA
  Mor strength(const ObjRef& a, const ObjRef& b) const; // A (x) TB -> T(A(x)B)

  Mor lolli_mor(const Mor& f, const Mor& g) const; // f: A'->A, g: B->B' gives (A-oB)->(A'-oB')
  Mor app_map(const ObjRef& a, const ObjRef& b) const; // (A-oB) (x) A -> TB
  Mor Phi(const Mor& f) const;                         // X->(A-oB) gives X(x)A->TB
  Mor Phi_inv(const Mor& g) const;                     // X(x)A->TB gives X->(A-oB)

  bool mor_eq(const Mor& f, const Mor& g) const;
  Mor sample_mor(const ObjRef& a, const ObjRef& b, std::uint64_t seed) const;
};

} // namespace linlam::fin
