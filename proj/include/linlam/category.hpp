#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "linlam/subtyping.hpp"
#include "linlam/type.hpp"

namespace linlam {

// Checks, by evaluation, that a model implements the interface contract: a
// symmetric monoidal category with an idempotent strong-monoidal comonad L
// carrying comonoids, a strong monad T, and Kleisli exponentials. Models plug
// in through a structural interface (see fin::Model and yaq::YaqModel); all
// composites here are built only from that interface, so the same diagrams
// run against every implementation.

// f: X -> TB lifted to TX -> TB
template <class M>
typename M::MorT kstar(M& m, const typename M::MorT& f, const typename M::ObjT& b) {
  return m.compose(m.T_mor(f), m.mu(b));
}

// evaluate the left effect first, then the right one: TA (x) TB -> T(A(x)B)
template <class M>
typename M::MorT Psi1(M& m, const typename M::ObjT& a, const typename M::ObjT& b) {
  auto ta = m.T_obj(a), tb = m.T_obj(b);
  auto inner = m.compose(m.swap_(tb, a), m.strength(a, b));
  return m.compose(m.compose(m.swap_(ta, tb), m.strength(tb, a)),
                   kstar(m, inner, m.tensor_obj(a, b)));
}

// right effect first
template <class M>
typename M::MorT Psi2(M& m, const typename M::ObjT& a, const typename M::ObjT& b) {
  auto ta = m.T_obj(a);
  auto inner = m.compose(m.swap_(ta, b), m.strength(b, a));
  auto ba = m.tensor_obj(b, a);
  return m.compose(m.compose(m.strength(ta, b), kstar(m, inner, ba)),
                   m.T_mor(m.swap_(b, a)));
}

// (P(x)Q)(x)(R(x)S) -> (P(x)R)(x)(Q(x)S)
template <class M>
typename M::MorT interchange(M& m, const typename M::ObjT& p, const typename M::ObjT& q,
                             const typename M::ObjT& r, const typename M::ObjT& s) {
  auto rs = m.tensor_obj(r, s);
  auto step1 = m.alpha_inv(p, q, rs);
  auto step2 = m.tensor_mor(m.id(p), m.alpha(q, r, s));
  auto step3 = m.tensor_mor(m.id(p), m.tensor_mor(m.swap_(q, r), m.id(s)));
  auto step4 = m.tensor_mor(m.id(p), m.alpha_inv(r, q, s));
  auto step5 = m.alpha(p, r, m.tensor_obj(q, s));
  return m.compose(m.compose(m.compose(m.compose(step1, step2), step3), step4), step5);
}

// The witness map of a subtyping, assembled from identities, dereliction,
// digging and the two functor actions. Any assembly order gives the same map;
// passing a generator picks randomly among the valid decompositions at each
// step, which is exactly what the coherence checks exercise.
template <class M>
typename M::MorT canonical_coercion(M& m,
                                    const std::function<typename M::ObjT(const TypeRef&)>& den,
                                    const TypeRef& a, const TypeRef& b,
                                    std::mt19937_64* rng = nullptr, int depth = 0) {
  if (type_equal(a, b)) return m.id(den(a));
  if (!is_subtype(a, b))
    throw std::logic_error("no coercion " + print_type(a) + " -> " + print_type(b));
  auto choose = [&](int n) {
    if (n <= 1 || !rng || depth > 64) return 0;
    return static_cast<int>((*rng)() % static_cast<std::uint64_t>(n));
  };
  if (a->kind == TypeKind::Bang) {
    const TypeRef& a1 = a->left;
    int m1 = leading_bangs(a);
    int n1 = leading_bangs(b);
    std::vector<int> moves;
    if (m1 > n1 && is_subtype(a1, b)) moves.push_back(0);
    if (b->kind == TypeKind::Bang && m1 == n1) moves.push_back(1);
    if (m1 < n1) moves.push_back(2);
    if (rng && depth <= 64) {
      moves.clear();
      if (is_subtype(a1, b)) moves.push_back(0);
      if (b->kind == TypeKind::Bang && is_subtype(a1, b->left)) moves.push_back(1);
      if (m1 < n1) moves.push_back(2);
    }
    switch (moves.at(choose(static_cast<int>(moves.size())))) {
      case 0:
        return m.compose(m.eps(den(a1)), canonical_coercion(m, den, a1, b, rng, depth + 1));
      case 1:
        return m.L_mor(canonical_coercion(m, den, a1, b->left, rng, depth + 1));
      default:
        return m.compose(m.delta(den(a1)),
                         canonical_coercion(m, den, Type::bang(a), b, rng, depth + 1));
    }
  }
  if (a->kind == TypeKind::Tensor) {
    auto cl = canonical_coercion(m, den, a->left, b->left, rng, depth + 1);
    auto cr = canonical_coercion(m, den, a->right, b->right, rng, depth + 1);
    switch (choose(3)) {
      case 1:
        return m.compose(m.tensor_mor(cl, m.id(den(a->right))),
                         m.tensor_mor(m.id(den(b->left)), cr));
      case 2:
        return m.compose(m.tensor_mor(m.id(den(a->left)), cr),
                         m.tensor_mor(cl, m.id(den(b->right))));
      default: return m.tensor_mor(cl, cr);
    }
  }
  if (a->kind == TypeKind::Arrow) {
    // contravariant domain: the witness runs b->left -> a->left
    auto cd = canonical_coercion(m, den, b->left, a->left, rng, depth + 1);
    auto cc = canonical_coercion(m, den, a->right, b->right, rng, depth + 1);
    switch (choose(3)) {
      case 1:
        return m.compose(m.lolli_mor(cd, m.id(den(a->right))),
                         m.lolli_mor(m.id(den(b->left)), cc));
      case 2:
        return m.compose(m.lolli_mor(m.id(den(a->left)), cc),
                         m.lolli_mor(cd, m.id(den(b->right))));
      default: return m.lolli_mor(cd, cc);
    }
  }
  throw std::logic_error("coercion fell through on " + print_type(a));
}

struct LawOptions {
  int unary_cap = 8;
  int pair_cap = 12;
  int triple_cap = 6;
  int quad_cap = 3;
  int pool_cap = 16;
  std::uint64_t seed = 12345;
  bool strength_commutes_required = false;
  std::ostream* trace = nullptr;  // when set, law names stream here as they run
};

struct LawResult {
  std::string name;
  bool pass = true;
  bool informative = false;
  std::string detail;
};

struct LawReport {
  std::vector<LawResult> laws;
  int failures = 0;
  bool all_pass = true;
  std::string summary() const {
    std::string s;
    for (const auto& l : laws) {
      s += (l.pass ? "pass " : "FAIL ");
      s += l.name;
      if (l.informative) s += " (informative)";
      if (!l.pass && !l.detail.empty()) s += ": " + l.detail;
      s += "\n";
    }
    return s;
  }
};

template <class M>
LawReport check_laws(M& m, const std::vector<typename M::ObjT>& objects,
                     const LawOptions& opt = {}) {
  using Mor = typename M::MorT;
  using Obj = typename M::ObjT;
  LawReport rep;

  std::vector<Obj> objs = objects;
  if (static_cast<int>(objs.size()) > opt.unary_cap) objs.resize(opt.unary_cap);

  // morphism pool for naturality checks: model samples first where available
  // (they carry the most discriminating power), then a few structure maps
  std::vector<Mor> pool;
  auto add = [&](const Mor& f) {
    if (static_cast<int>(pool.size()) < opt.pool_cap) pool.push_back(f);
  };
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const auto& a = objs[i];
    if constexpr (requires { m.sample_mor(a, a, std::uint64_t{}); }) {
      add(m.sample_mor(a, objs[(i + 1) % objs.size()], opt.seed + 31 * i));
      add(m.sample_mor(a, a, opt.seed + 77 * i + 5));
    }
  }
  for (const auto& a : objs) {
    add(m.eps(a));
    add(m.dup(a));
    add(m.eta(a));
  }
  if (pool.empty())
    for (const auto& a : objs) add(m.id(a));

  auto law = [&](const std::string& name, bool informative, auto&& body) {
    if (opt.trace) *opt.trace << "law: " << name << std::endl;
    LawResult r{name, true, informative, ""};
    try {
      body(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass && !r.informative) {
      ++rep.failures;
      rep.all_pass = false;
    }
    rep.laws.push_back(std::move(r));
  };
  auto expect = [&](LawResult& r, const Mor& lhs, const Mor& rhs, const std::string& where) {
    if (!r.pass) return;
    if (!m.mor_eq(lhs, rhs)) {
      r.pass = false;
      r.detail = where;
    }
  };
  auto pairs = [&](auto&& body) {
    int count = 0;
    for (const auto& a : objs)
      for (const auto& b : objs) {
        if (count++ >= opt.pair_cap) return;
        body(a, b);
      }
  };
  auto triples = [&](auto&& body) {
    int count = 0;
    for (const auto& a : objs)
      for (const auto& b : objs)
        for (const auto& c : objs) {
          if (count++ >= opt.triple_cap) return;
          body(a, b, c);
        }
  };

  const Obj top = m.unit_obj();

  // ---- symmetric monoidal structure
  law("associator iso", false, [&](LawResult& r) {
    triples([&](const Obj& a, const Obj& b, const Obj& c) {
      auto abc = m.tensor_obj(a, m.tensor_obj(b, c));
      auto abc2 = m.tensor_obj(m.tensor_obj(a, b), c);
      expect(r, m.compose(m.alpha(a, b, c), m.alpha_inv(a, b, c)), m.id(abc), m.show_obj(abc));
      expect(r, m.compose(m.alpha_inv(a, b, c), m.alpha(a, b, c)), m.id(abc2), m.show_obj(abc2));
    });
  });
  law("unitor iso", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      expect(r, m.compose(m.lunit(a), m.lunit_inv(a)), m.id(m.tensor_obj(top, a)), m.show_obj(a));
      expect(r, m.compose(m.lunit_inv(a), m.lunit(a)), m.id(a), m.show_obj(a));
      expect(r, m.compose(m.runit(a), m.runit_inv(a)), m.id(m.tensor_obj(a, top)), m.show_obj(a));
      expect(r, m.compose(m.runit_inv(a), m.runit(a)), m.id(a), m.show_obj(a));
    }
  });
  law("triangle", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto lhs = m.compose(m.alpha(a, top, b), m.tensor_mor(m.runit(a), m.id(b)));
      auto rhs = m.tensor_mor(m.id(a), m.lunit(b));
      expect(r, lhs, rhs, m.show_obj(a) + ", " + m.show_obj(b));
    });
  });
  law("pentagon", false, [&](LawResult& r) {
    int count = 0;
    for (const auto& a : objs)
      for (const auto& b : objs)
        for (const auto& c : objs)
          for (const auto& d : objs) {
            if (count++ >= opt.quad_cap) return;
            auto lhs = m.compose(m.alpha(a, b, m.tensor_obj(c, d)),
                                 m.alpha(m.tensor_obj(a, b), c, d));
            auto rhs = m.compose(m.compose(m.tensor_mor(m.id(a), m.alpha(b, c, d)),
                                           m.alpha(a, m.tensor_obj(b, c), d)),
                                 m.tensor_mor(m.alpha(a, b, c), m.id(d)));
            expect(r, lhs, rhs, m.show_obj(a));
          }
  });
  law("symmetry involutive", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.compose(m.swap_(a, b), m.swap_(b, a)), m.id(m.tensor_obj(a, b)),
             m.show_obj(a) + ", " + m.show_obj(b));
    });
  });
  law("hexagon", false, [&](LawResult& r) {
    triples([&](const Obj& a, const Obj& b, const Obj& c) {
      auto lhs = m.compose(m.compose(m.alpha(a, b, c), m.swap_(m.tensor_obj(a, b), c)),
                           m.alpha(c, a, b));
      auto rhs = m.compose(m.compose(m.tensor_mor(m.id(a), m.swap_(b, c)), m.alpha(a, c, b)),
                           m.tensor_mor(m.swap_(a, c), m.id(b)));
      expect(r, lhs, rhs, m.show_obj(a));
    });
  });
  law("unitor symmetry", false, [&](LawResult& r) {
    for (const auto& a : objs)
      expect(r, m.compose(m.swap_(a, top), m.lunit(a)), m.runit(a), m.show_obj(a));
    expect(r, m.lunit(top), m.runit(top), "unit object");
  });
  law("tensor bifunctor", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.tensor_mor(m.id(a), m.id(b)), m.id(m.tensor_obj(a, b)), "identities");
    });
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (count++ >= opt.pair_cap) return;
        auto left = m.compose(m.tensor_mor(f, m.id(g.dom)), m.tensor_mor(m.id(f.cod), g));
        auto right = m.compose(m.tensor_mor(m.id(f.dom), g), m.tensor_mor(f, m.id(g.cod)));
        expect(r, left, m.tensor_mor(f, g), "interchange left");
        expect(r, right, m.tensor_mor(f, g), "interchange right");
      }
  });
  law("unitors natural", false, [&](LawResult& r) {
    for (const auto& f : pool) {
      expect(r, m.compose(m.tensor_mor(m.id(top), f), m.lunit(f.cod)),
             m.compose(m.lunit(f.dom), f), "left");
      expect(r, m.compose(m.tensor_mor(f, m.id(top)), m.runit(f.cod)),
             m.compose(m.runit(f.dom), f), "right");
    }
  });
  law("symmetry natural", false, [&](LawResult& r) {
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (count++ >= opt.pair_cap) return;
        auto lhs = m.compose(m.tensor_mor(f, g), m.swap_(f.cod, g.cod));
        auto rhs = m.compose(m.swap_(f.dom, g.dom), m.tensor_mor(g, f));
        expect(r, lhs, rhs, "pool pair");
      }
  });
  law("associator natural", false, [&](LawResult& r) {
    int count = 0;
    for (const auto& f : pool) {
      if (count++ >= opt.triple_cap) return;
      for (const auto& b : objs) {
        for (const auto& c : objs) {
          auto lhs = m.compose(m.tensor_mor(f, m.id(m.tensor_obj(b, c))), m.alpha(f.cod, b, c));
          auto rhs = m.compose(m.alpha(f.dom, b, c),
                               m.tensor_mor(m.tensor_mor(f, m.id(b)), m.id(c)));
          expect(r, lhs, rhs, "first slot");
          break;
        }
        break;
      }
    }
  });

  // ---- comonad
  law("comonad counit", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      expect(r, m.compose(m.delta(a), m.eps(la)), m.id(la), m.show_obj(a));
      expect(r, m.compose(m.delta(a), m.L_mor(m.eps(a))), m.id(la), m.show_obj(a));
    }
  });
  law("comonad coassociative", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      expect(r, m.compose(m.delta(a), m.delta(la)), m.compose(m.delta(a), m.L_mor(m.delta(a))),
             m.show_obj(a));
    }
  });
  law("digging iso", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      auto lla = m.L_obj(la);
      expect(r, m.compose(m.eps(la), m.delta(a)), m.id(lla), m.show_obj(a));
    }
  });
  law("counit natural", false, [&](LawResult& r) {
    for (const auto& f : pool)
      expect(r, m.compose(m.L_mor(f), m.eps(f.cod)), m.compose(m.eps(f.dom), f), "pool");
  });
  law("digging natural", false, [&](LawResult& r) {
    for (const auto& f : pool)
      expect(r, m.compose(m.L_mor(f), m.delta(f.cod)),
             m.compose(m.delta(f.dom), m.L_mor(m.L_mor(f))), "pool");
  });
  law("L functor", false, [&](LawResult& r) {
    for (const auto& a : objs) expect(r, m.L_mor(m.id(a)), m.id(m.L_obj(a)), m.show_obj(a));
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (!m.obj_eq(f.cod, g.dom)) continue;
        if (count++ >= opt.pair_cap) return;
        expect(r, m.L_mor(m.compose(f, g)), m.compose(m.L_mor(f), m.L_mor(g)), "composite");
      }
  });

  // ---- monoidal comonad coherence
  law("splitting associative", false, [&](LawResult& r) {
    triples([&](const Obj& a, const Obj& b, const Obj& c) {
      auto la = m.L_obj(a), lb = m.L_obj(b), lc = m.L_obj(c);
      auto lhs = m.compose(m.compose(m.alpha(la, lb, lc), m.tensor_mor(m.dL(a, b), m.id(lc))),
                           m.dL(m.tensor_obj(a, b), c));
      auto rhs = m.compose(m.compose(m.tensor_mor(m.id(la), m.dL(b, c)),
                                     m.dL(a, m.tensor_obj(b, c))),
                           m.L_mor(m.alpha(a, b, c)));
      expect(r, lhs, rhs, m.show_obj(a));
    });
  });
  law("splitting unit", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      auto lhs = m.compose(m.compose(m.tensor_mor(m.dL_unit(), m.id(la)), m.dL(top, a)),
                           m.L_mor(m.lunit(a)));
      expect(r, lhs, m.lunit(la), "left " + m.show_obj(a));
      auto rhs = m.compose(m.compose(m.tensor_mor(m.id(la), m.dL_unit()), m.dL(a, top)),
                           m.L_mor(m.runit(a)));
      expect(r, rhs, m.runit(la), "right " + m.show_obj(a));
    }
  });
  law("splitting symmetric", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.compose(m.swap_(m.L_obj(a), m.L_obj(b)), m.dL(b, a)),
             m.compose(m.dL(a, b), m.L_mor(m.swap_(a, b))), m.show_obj(a));
    });
  });
  law("splitting iso", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto dom = m.tensor_obj(m.L_obj(a), m.L_obj(b));
      expect(r, m.compose(m.dL(a, b), m.dL_inv(a, b)), m.id(dom), m.show_obj(a));
      expect(r, m.compose(m.dL_inv(a, b), m.dL(a, b)), m.id(m.L_obj(m.tensor_obj(a, b))),
             m.show_obj(a));
    });
    expect(r, m.compose(m.dL_unit(), m.dL_unit_inv()), m.id(top), "unit");
    expect(r, m.compose(m.dL_unit_inv(), m.dL_unit()), m.id(m.L_obj(top)), "unit");
  });
  law("counit monoidal", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.compose(m.dL(a, b), m.eps(m.tensor_obj(a, b))),
             m.tensor_mor(m.eps(a), m.eps(b)), m.show_obj(a));
    });
    expect(r, m.compose(m.dL_unit(), m.eps(top)), m.id(top), "unit");
  });
  law("digging monoidal", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto la = m.L_obj(a), lb = m.L_obj(b);
      auto lhs = m.compose(m.dL(a, b), m.delta(m.tensor_obj(a, b)));
      auto rhs = m.compose(m.compose(m.tensor_mor(m.delta(a), m.delta(b)), m.dL(la, lb)),
                           m.L_mor(m.dL(a, b)));
      expect(r, lhs, rhs, m.show_obj(a));
    });
    expect(r, m.compose(m.dL_unit(), m.delta(top)),
           m.compose(m.dL_unit(), m.L_mor(m.dL_unit())), "unit");
  });
  law("splitting natural", false, [&](LawResult& r) {
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (count++ >= opt.pair_cap) return;
        auto lhs = m.compose(m.tensor_mor(m.L_mor(f), m.L_mor(g)), m.dL(f.cod, g.cod));
        auto rhs = m.compose(m.dL(f.dom, g.dom), m.L_mor(m.tensor_mor(f, g)));
        expect(r, lhs, rhs, "pool pair");
      }
  });

  // ---- comonoids on L-objects
  law("comonoid coassociative", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      auto lhs = m.compose(m.compose(m.dup(a), m.tensor_mor(m.id(la), m.dup(a))),
                           m.alpha(la, la, la));
      expect(r, lhs, m.compose(m.dup(a), m.tensor_mor(m.dup(a), m.id(la))), m.show_obj(a));
    }
  });
  law("comonoid counit", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      expect(r,
             m.compose(m.compose(m.dup(a), m.tensor_mor(m.drop(a), m.id(la))), m.lunit(la)),
             m.id(la), "left " + m.show_obj(a));
      expect(r,
             m.compose(m.compose(m.dup(a), m.tensor_mor(m.id(la), m.drop(a))), m.runit(la)),
             m.id(la), "right " + m.show_obj(a));
    }
  });
  law("comonoid commutative", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      expect(r, m.compose(m.dup(a), m.swap_(la, la)), m.dup(a), m.show_obj(a));
    }
  });
  law("duplicate natural", false, [&](LawResult& r) {
    for (const auto& f : pool)
      expect(r, m.compose(m.L_mor(f), m.dup(f.cod)),
             m.compose(m.dup(f.dom), m.tensor_mor(m.L_mor(f), m.L_mor(f))), "pool");
  });
  law("discard natural", false, [&](LawResult& r) {
    for (const auto& f : pool)
      expect(r, m.compose(m.L_mor(f), m.drop(f.cod)), m.drop(f.dom), "pool");
  });
  law("duplicate monoidal", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto la = m.L_obj(a), lb = m.L_obj(b);
      auto lhs = m.compose(m.dL(a, b), m.dup(m.tensor_obj(a, b)));
      auto rhs = m.compose(m.compose(m.tensor_mor(m.dup(a), m.dup(b)),
                                     interchange(m, la, la, lb, lb)),
                           m.tensor_mor(m.dL(a, b), m.dL(a, b)));
      expect(r, lhs, rhs, m.show_obj(a));
    });
    expect(r, m.compose(m.dL_unit(), m.dup(top)),
           m.compose(m.lunit_inv(top), m.tensor_mor(m.dL_unit(), m.dL_unit())), "unit");
  });
  law("discard monoidal", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto lhs = m.compose(m.dL(a, b), m.drop(m.tensor_obj(a, b)));
      auto rhs = m.compose(m.tensor_mor(m.drop(a), m.drop(b)), m.lunit(top));
      expect(r, lhs, rhs, m.show_obj(a));
    });
    expect(r, m.compose(m.dL_unit(), m.drop(top)), m.id(top), "unit");
  });
  law("duplicate coalgebra", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      auto lhs = m.compose(m.delta(a), m.L_mor(m.dup(a)));
      auto rhs = m.compose(m.compose(m.dup(a), m.tensor_mor(m.delta(a), m.delta(a))),
                           m.dL(la, la));
      expect(r, lhs, rhs, m.show_obj(a));
    }
  });
  law("discard coalgebra", false, [&](LawResult& r) {
    for (const auto& a : objs)
      expect(r, m.compose(m.delta(a), m.L_mor(m.drop(a))), m.compose(m.drop(a), m.dL_unit()),
             m.show_obj(a));
  });
  law("digging comonoid morphism", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto la = m.L_obj(a);
      expect(r, m.compose(m.delta(a), m.dup(la)),
             m.compose(m.dup(a), m.tensor_mor(m.delta(a), m.delta(a))), m.show_obj(a));
      expect(r, m.compose(m.delta(a), m.drop(la)), m.drop(a), m.show_obj(a));
    }
  });

  // ---- monad
  law("monad unit", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      auto ta = m.T_obj(a);
      expect(r, m.compose(m.eta(ta), m.mu(a)), m.id(ta), m.show_obj(a));
      expect(r, m.compose(m.T_mor(m.eta(a)), m.mu(a)), m.id(ta), m.show_obj(a));
    }
  });
  law("monad associative", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      expect(r, m.compose(m.T_mor(m.mu(a)), m.mu(a)), m.compose(m.mu(m.T_obj(a)), m.mu(a)),
             m.show_obj(a));
    }
  });
  law("unit natural", false, [&](LawResult& r) {
    for (const auto& f : pool)
      expect(r, m.compose(f, m.eta(f.cod)), m.compose(m.eta(f.dom), m.T_mor(f)), "pool");
  });
  law("join natural", false, [&](LawResult& r) {
    for (const auto& f : pool)
      expect(r, m.compose(m.T_mor(m.T_mor(f)), m.mu(f.cod)),
             m.compose(m.mu(f.dom), m.T_mor(f)), "pool");
  });
  law("T functor", false, [&](LawResult& r) {
    for (const auto& a : objs) expect(r, m.T_mor(m.id(a)), m.id(m.T_obj(a)), m.show_obj(a));
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (!m.obj_eq(f.cod, g.dom)) continue;
        if (count++ >= opt.pair_cap) return;
        expect(r, m.T_mor(m.compose(f, g)), m.compose(m.T_mor(f), m.T_mor(g)), "composite");
      }
  });

  // ---- strength
  law("strength unit", false, [&](LawResult& r) {
    for (const auto& a : objs) {
      expect(r, m.compose(m.strength(top, a), m.T_mor(m.lunit(a))), m.lunit(m.T_obj(a)),
             m.show_obj(a));
    }
  });
  law("strength associative", false, [&](LawResult& r) {
    triples([&](const Obj& a, const Obj& b, const Obj& c) {
      auto lhs = m.compose(m.alpha(a, b, m.T_obj(c)), m.strength(m.tensor_obj(a, b), c));
      auto rhs = m.compose(m.compose(m.tensor_mor(m.id(a), m.strength(b, c)),
                                     m.strength(a, m.tensor_obj(b, c))),
                           m.T_mor(m.alpha(a, b, c)));
      expect(r, lhs, rhs, m.show_obj(a));
    });
  });
  law("strength of unit map", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.compose(m.tensor_mor(m.id(a), m.eta(b)), m.strength(a, b)),
             m.eta(m.tensor_obj(a, b)), m.show_obj(a));
    });
  });
  law("strength of join", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto lhs = m.compose(m.tensor_mor(m.id(a), m.mu(b)), m.strength(a, b));
      auto rhs = m.compose(m.compose(m.strength(a, m.T_obj(b)), m.T_mor(m.strength(a, b))),
                           m.mu(m.tensor_obj(a, b)));
      expect(r, lhs, rhs, m.show_obj(a));
    });
  });
  law("strength natural", false, [&](LawResult& r) {
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (count++ >= opt.pair_cap) return;
        auto lhs = m.compose(m.tensor_mor(f, m.T_mor(g)), m.strength(f.cod, g.cod));
        auto rhs = m.compose(m.strength(f.dom, g.dom), m.T_mor(m.tensor_mor(f, g)));
        expect(r, lhs, rhs, "pool pair");
      }
  });
  law("strength commutes", true, [&](LawResult& r) {
    r.informative = !opt.strength_commutes_required;
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, Psi1(m, a, b), Psi2(m, a, b), m.show_obj(a) + ", " + m.show_obj(b));
    });
  });

  // ---- Kleisli exponentials
  law("application is curried identity", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.Phi(m.id(m.lolli_obj(a, b))), m.app_map(a, b),
             m.show_obj(a) + ", " + m.show_obj(b));
    });
  });
  law("currying iso", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      auto g = m.app_map(a, b);
      expect(r, m.Phi(m.Phi_inv(g)), g, "app " + m.show_obj(a));
      auto s = m.strength(a, b);
      expect(r, m.Phi(m.Phi_inv(s)), s, "strength " + m.show_obj(a));
      auto f0 = m.Phi_inv(g);
      expect(r, m.Phi_inv(m.Phi(f0)), f0, "curried app " + m.show_obj(a));
    });
  });
  law("currying natural", false, [&](LawResult& r) {
    int count = 0;
    pairs([&](const Obj& a, const Obj& b) {
      auto f0 = m.Phi_inv(m.app_map(a, b)); // the identity-shaped witness
      for (const auto& h : pool) {
        if (!m.obj_eq(h.cod, f0.dom)) continue;
        if (count++ >= opt.pair_cap) return;
        expect(r, m.Phi(m.compose(h, f0)),
               m.compose(m.tensor_mor(h, m.id(a)), m.Phi(f0)), "precompose");
      }
    });
  });
  law("application natural", false, [&](LawResult& r) {
    int count = 0;
    pairs([&](const Obj& a, const Obj& b) {
      for (const auto& g : pool) {
        if (!m.obj_eq(g.cod, a)) continue;
        if (count++ >= opt.pair_cap) return;
        auto ab = m.lolli_obj(a, b);
        auto lhs = m.compose(m.tensor_mor(m.id(ab), g), m.app_map(a, b));
        auto rhs = m.compose(m.tensor_mor(m.lolli_mor(g, m.id(b)), m.id(g.dom)),
                             m.app_map(g.dom, b));
        expect(r, lhs, rhs, "arg precompose");
      }
    });
  });
  law("lolli functor", false, [&](LawResult& r) {
    pairs([&](const Obj& a, const Obj& b) {
      expect(r, m.lolli_mor(m.id(a), m.id(b)), m.id(m.lolli_obj(a, b)), "identities");
    });
    int count = 0;
    for (const auto& f : pool)
      for (const auto& g : pool) {
        if (count++ >= opt.pair_cap) return;
        auto one = m.lolli_mor(f, g);
        auto two = m.compose(m.lolli_mor(m.id(f.cod), g), m.lolli_mor(f, m.id(g.cod)));
        expect(r, one, two, "factored");
      }
  });

  return rep;
}

} // namespace linlam
