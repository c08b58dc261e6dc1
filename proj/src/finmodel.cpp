#include "linlam/finmodel.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace linlam::fin {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t next_seed(std::uint64_t s, std::uint64_t salt) {
  return mix(s * 6364136223846793005ull + 1442695040888963407ull, salt);
}

std::uint64_t rat_hash(const mpq_class& q) {
  std::hash<std::string> h;
  return h(q.get_num().get_str()) * 31 + h(q.get_den().get_str());
}

constexpr int kMaxProbes = 128;
constexpr int kMaxTables = 64;

struct ObjHash {
  std::size_t operator()(const ObjRef& o) const { return o ? o->hash : 0; }
};
struct ObjEq {
  bool operator()(const ObjRef& a, const ObjRef& b) const { return obj_equal(a, b); }
};

} // namespace

ObjRef Obj::base(int card) {
  auto o = std::make_shared<Obj>();
  o->kind = ObjKind::Base;
  o->card = card;
  o->hash = mix(1, static_cast<std::uint64_t>(card));
  return o;
}
ObjRef Obj::unit() {
  auto o = std::make_shared<Obj>();
  o->kind = ObjKind::Unit;
  o->hash = 2;
  return o;
}
ObjRef Obj::tensor(ObjRef l, ObjRef r) {
  auto o = std::make_shared<Obj>();
  o->kind = ObjKind::Tensor;
  o->hash = mix(mix(3, l->hash), r->hash);
  o->left = std::move(l);
  o->right = std::move(r);
  return o;
}
ObjRef Obj::dist(ObjRef a) {
  auto o = std::make_shared<Obj>();
  o->kind = ObjKind::Dist;
  o->hash = mix(4, a->hash);
  o->left = std::move(a);
  return o;
}
ObjRef Obj::fun(ObjRef dom, ObjRef cod) {
  auto o = std::make_shared<Obj>();
  o->kind = ObjKind::Fun;
  o->hash = mix(mix(5, dom->hash), cod->hash);
  o->left = std::move(dom);
  o->right = std::move(cod);
  return o;
}

bool obj_equal(const ObjRef& a, const ObjRef& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind || a->hash != b->hash) return false;
  switch (a->kind) {
    case ObjKind::Base: return a->card == b->card;
    case ObjKind::Unit: return true;
    case ObjKind::Tensor:
    case ObjKind::Fun: return obj_equal(a->left, b->left) && obj_equal(a->right, b->right);
    case ObjKind::Dist: return obj_equal(a->left, b->left);
  }
  return false;
}

std::string print_obj(const ObjRef& o) {
  switch (o->kind) {
    case ObjKind::Base: return "#" + std::to_string(o->card);
    case ObjKind::Unit: return "1";
    case ObjKind::Tensor: return "(" + print_obj(o->left) + " x " + print_obj(o->right) + ")";
    case ObjKind::Dist: return "T " + print_obj(o->left);
    case ObjKind::Fun: return "(" + print_obj(o->left) + " -> " + print_obj(o->right) + ")";
  }
  return "?";
}

ElRef El::pt(int p) {
  auto e = std::make_shared<El>();
  e->kind = ObjKind::Base;
  e->point = p;
  return e;
}
ElRef El::unit_el() {
  auto e = std::make_shared<El>();
  e->kind = ObjKind::Unit;
  return e;
}
ElRef El::pair(ElRef l, ElRef r) {
  auto e = std::make_shared<El>();
  e->kind = ObjKind::Tensor;
  e->l = std::move(l);
  e->r = std::move(r);
  return e;
}
ElRef El::distribution(std::vector<WeightedEl> parts) {
  auto e = std::make_shared<El>();
  e->kind = ObjKind::Dist;
  for (auto& p : parts)
    if (p.w != 0) e->parts.push_back(std::move(p));
  return e;
}
ElRef El::point_mass(ElRef x) { return distribution({{mpq_class(1), std::move(x)}}); }
ElRef El::function(std::function<ElRef(const ElRef&)> f) {
  auto e = std::make_shared<El>();
  e->kind = ObjKind::Fun;
  e->fn = std::move(f);
  return e;
}

bool el_equal(const ObjRef& o, const ElRef& x, const ElRef& y) {
  if (x.get() == y.get()) return true;
  switch (o->kind) {
    case ObjKind::Base: return x->point == y->point;
    case ObjKind::Unit: return true;
    case ObjKind::Tensor:
      return el_equal(o->left, x->l, y->l) && el_equal(o->right, x->r, y->r);
    case ObjKind::Dist: {
      // compare total weight per equivalence class of outcomes
      auto weight_of = [&](const std::vector<WeightedEl>& ps, const ElRef& e) {
        mpq_class s = 0;
        for (const auto& p : ps)
          if (el_equal(o->left, p.el, e)) s += p.w;
        return s;
      };
      for (const auto& p : x->parts)
        if (weight_of(x->parts, p.el) != weight_of(y->parts, p.el)) return false;
      for (const auto& p : y->parts)
        if (weight_of(x->parts, p.el) != weight_of(y->parts, p.el)) return false;
      return true;
    }
    case ObjKind::Fun: {
      for (const auto& p : probes(o->left))
        if (!el_equal(o->right, x->fn(p), y->fn(p))) return false;
      return true;
    }
  }
  return false;
}

namespace {

std::vector<ElRef> build_probes(const ObjRef& o) {
  std::vector<ElRef> out;
  switch (o->kind) {
    case ObjKind::Base:
      for (int i = 0; i < o->card; ++i) out.push_back(El::pt(i));
      break;
    case ObjKind::Unit:
      out.push_back(El::unit_el());
      break;
    case ObjKind::Tensor: {
      const auto& ls = probes(o->left);
      const auto& rs = probes(o->right);
      for (const auto& l : ls) {
        for (const auto& r : rs) {
          out.push_back(El::pair(l, r));
          if (static_cast<int>(out.size()) >= kMaxProbes) return out;
        }
      }
      break;
    }
    case ObjKind::Dist: {
      const auto& ps = probes(o->left);
      for (const auto& p : ps) out.push_back(El::point_mass(p));
      if (ps.size() >= 2) {
        out.push_back(El::distribution(
            {{mpq_class(1, 2), ps[0]}, {mpq_class(1, 2), ps[1]}}));
        out.push_back(El::distribution(
            {{mpq_class(1, 3), ps[0]}, {mpq_class(2, 3), ps[1]}}));
        if (ps.size() >= 3) {
          std::vector<WeightedEl> uni;
          mpq_class w(1, static_cast<unsigned long>(ps.size()));
          for (const auto& p : ps) uni.push_back({w, p});
          out.push_back(El::distribution(std::move(uni)));
        }
      }
      break;
    }
    case ObjKind::Fun: {
      const auto ins = probes(o->left);
      const auto outs = probes(o->right);
      ObjRef dom = o->left;
      auto table_fn = [dom, ins](std::vector<ElRef> row) {
        return El::function([dom, ins, row = std::move(row)](const ElRef& x) {
          for (std::size_t i = 0; i < ins.size(); ++i)
            if (el_equal(dom, x, ins[i])) return row[i];
          return row[0];
        });
      };
      double full = 1;
      for (std::size_t i = 0; i < ins.size() && full <= kMaxTables; ++i)
        full *= static_cast<double>(outs.size());
      if (full <= kMaxTables) {
        std::vector<std::size_t> idx(ins.size(), 0);
        while (true) {
          std::vector<ElRef> row;
          for (std::size_t i = 0; i < ins.size(); ++i) row.push_back(outs[idx[i]]);
          out.push_back(table_fn(std::move(row)));
          std::size_t k = 0;
          while (k < idx.size() && ++idx[k] == outs.size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
      } else {
        std::size_t nShift = std::min<std::size_t>(outs.size(), 8);
        for (std::size_t k = 0; k < nShift; ++k) {
          std::vector<ElRef> row;
          for (std::size_t i = 0; i < ins.size(); ++i)
            row.push_back(outs[(i + k) % outs.size()]);
          out.push_back(table_fn(std::move(row)));
        }
        for (std::size_t k = 0; k < std::min<std::size_t>(outs.size(), 8); ++k)
          out.push_back(table_fn(std::vector<ElRef>(ins.size(), outs[k])));
      }
      break;
    }
  }
  // drop duplicates so class-weight comparisons stay cheap
  std::vector<ElRef> dedup;
  for (const auto& e : out) {
    bool seen = false;
    for (const auto& d : dedup)
      if (el_equal(o, d, e)) {
        seen = true;
        break;
      }
    if (!seen) dedup.push_back(e);
    if (static_cast<int>(dedup.size()) >= kMaxProbes) break;
  }
  return dedup;
}

} // namespace

const std::vector<ElRef>& probes(const ObjRef& o) {
  static std::unordered_map<ObjRef, std::vector<ElRef>, ObjHash, ObjEq> cache;
  auto it = cache.find(o);
  if (it != cache.end()) return it->second;
  cache.emplace(o, std::vector<ElRef>{}); // placeholder blocks runaway recursion
  auto built = build_probes(o);
  return cache[o] = std::move(built);
}

std::string print_el(const ObjRef& o, const ElRef& x) {
  switch (o->kind) {
    case ObjKind::Base: return std::to_string(x->point);
    case ObjKind::Unit: return "*";
    case ObjKind::Tensor:
      return "(" + print_el(o->left, x->l) + ", " + print_el(o->right, x->r) + ")";
    case ObjKind::Dist: {
      std::string s = "{";
      bool first = true;
      for (const auto& p : x->parts) {
        if (!first) s += ", ";
        first = false;
        s += p.w.get_str() + ": " + print_el(o->left, p.el);
      }
      return s + "}";
    }
    case ObjKind::Fun: {
      std::string s = "[";
      const auto& ins = probes(o->left);
      for (std::size_t i = 0; i < ins.size() && i < 4; ++i) {
        if (i) s += ", ";
        s += print_el(o->left, ins[i]) + " -> " + print_el(o->right, x->fn(ins[i]));
      }
      if (ins.size() > 4) s += ", ...";
      return s + "]";
    }
  }
  return "?";
}

std::uint64_t el_fingerprint(const ObjRef& o, const ElRef& x) {
  switch (o->kind) {
    case ObjKind::Base: return mix(0x10, static_cast<std::uint64_t>(x->point));
    case ObjKind::Unit: return 0x7;
    case ObjKind::Tensor:
      return mix(el_fingerprint(o->left, x->l), el_fingerprint(o->right, x->r));
    case ObjKind::Dist: {
      std::uint64_t h = 0x42;
      for (const auto& p : x->parts)
        h = mix(h, mix(rat_hash(p.w), el_fingerprint(o->left, p.el)));
      return h;
    }
    case ObjKind::Fun: {
      std::uint64_t h = 0x99;
      for (const auto& p : probes(o->left)) h = mix(h, el_fingerprint(o->right, x->fn(p)));
      return h;
    }
  }
  return 0;
}

ElRef seeded_element(const ObjRef& o, std::uint64_t seed) {
  switch (o->kind) {
    case ObjKind::Base:
      return El::pt(static_cast<int>(seed % static_cast<std::uint64_t>(o->card)));
    case ObjKind::Unit: return El::unit_el();
    case ObjKind::Tensor:
      return El::pair(seeded_element(o->left, next_seed(seed, 1)),
                      seeded_element(o->right, next_seed(seed, 2)));
    case ObjKind::Dist: {
      switch (seed % 3) {
        case 0: return El::point_mass(seeded_element(o->left, next_seed(seed, 3)));
        case 1:
          return El::distribution(
              {{mpq_class(1, 2), seeded_element(o->left, next_seed(seed, 4))},
               {mpq_class(1, 2), seeded_element(o->left, next_seed(seed, 5))}});
        default:
          return El::distribution(
              {{mpq_class(1, 3), seeded_element(o->left, next_seed(seed, 6))},
               {mpq_class(2, 3), seeded_element(o->left, next_seed(seed, 7))}});
      }
    }
    case ObjKind::Fun: {
      ObjRef dom = o->left, cod = o->right;
      return El::function([dom, cod, seed](const ElRef& x) {
        return seeded_element(cod, next_seed(seed, el_fingerprint(dom, x)));
      });
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// structure maps

ObjRef Model::unit_obj() const { return Obj::unit(); }
ObjRef Model::tensor_obj(const ObjRef& a, const ObjRef& b) const { return Obj::tensor(a, b); }
ObjRef Model::L_obj(const ObjRef& a) const { return a; }
ObjRef Model::T_obj(const ObjRef& a) const { return Obj::dist(a); }
ObjRef Model::lolli_obj(const ObjRef& a, const ObjRef& b) const {
  return Obj::fun(a, Obj::dist(b));
}
bool Model::obj_eq(const ObjRef& a, const ObjRef& b) const { return obj_equal(a, b); }
std::string Model::show_obj(const ObjRef& a) const { return print_obj(a); }

Mor Model::id(const ObjRef& a) const {
  return {a, a, [](const ElRef& x) { return x; }};
}

Mor Model::compose(const Mor& f, const Mor& g) const {
  if (!obj_equal(f.cod, g.dom))
    throw std::logic_error("compose mismatch: " + print_obj(f.cod) + " vs " + print_obj(g.dom));
  auto ff = f.f, gf = g.f;
  return {f.dom, g.cod, [ff, gf](const ElRef& x) { return gf(ff(x)); }};
}

Mor Model::tensor_mor(const Mor& f, const Mor& g) const {
  auto ff = f.f, gf = g.f;
  return {Obj::tensor(f.dom, g.dom), Obj::tensor(f.cod, g.cod),
          [ff, gf](const ElRef& x) { return El::pair(ff(x->l), gf(x->r)); }};
}

Mor Model::alpha(const ObjRef& a, const ObjRef& b, const ObjRef& c) const {
  return {Obj::tensor(a, Obj::tensor(b, c)), Obj::tensor(Obj::tensor(a, b), c),
          [](const ElRef& x) { return El::pair(El::pair(x->l, x->r->l), x->r->r); }};
}
Mor Model::alpha_inv(const ObjRef& a, const ObjRef& b, const ObjRef& c) const {
  return {Obj::tensor(Obj::tensor(a, b), c), Obj::tensor(a, Obj::tensor(b, c)),
          [](const ElRef& x) { return El::pair(x->l->l, El::pair(x->l->r, x->r)); }};
}
Mor Model::lunit(const ObjRef& a) const {
  return {Obj::tensor(Obj::unit(), a), a, [](const ElRef& x) { return x->r; }};
}
Mor Model::lunit_inv(const ObjRef& a) const {
  return {a, Obj::tensor(Obj::unit(), a),
          [](const ElRef& x) { return El::pair(El::unit_el(), x); }};
}
Mor Model::runit(const ObjRef& a) const {
  return {Obj::tensor(a, Obj::unit()), a, [](const ElRef& x) { return x->l; }};
}
Mor Model::runit_inv(const ObjRef& a) const {
  return {a, Obj::tensor(a, Obj::unit()),
          [](const ElRef& x) { return El::pair(x, El::unit_el()); }};
}

namespace {
ElRef twist(const ObjRef& o, const ElRef& x) {
  switch (o->kind) {
    case ObjKind::Base: return El::pt((x->point + 1) % o->card);
    case ObjKind::Tensor: return El::pair(twist(o->left, x->l), twist(o->right, x->r));
    default: return x;
  }
}
} // namespace

Mor Model::swap_(const ObjRef& a, const ObjRef& b) const {
  int mut = mutation;
  ObjRef ao = a;
  return {Obj::tensor(a, b), Obj::tensor(b, a), [mut, ao](const ElRef& x) {
            if (mut == 2) return El::pair(x->r, twist(ao, x->l));
            return El::pair(x->r, x->l);
          }};
}

Mor Model::L_mor(const Mor& f) const { return f; }
Mor Model::eps(const ObjRef& a) const { return id(a); }
Mor Model::delta(const ObjRef& a) const { return id(a); }
Mor Model::dL(const ObjRef& a, const ObjRef& b) const { return id(Obj::tensor(a, b)); }
Mor Model::dL_inv(const ObjRef& a, const ObjRef& b) const { return id(Obj::tensor(a, b)); }
Mor Model::dL_unit() const { return id(Obj::unit()); }
Mor Model::dL_unit_inv() const { return id(Obj::unit()); }

Mor Model::dup(const ObjRef& a) const {
  int mut = mutation;
  ObjRef ao = a;
  return {a, Obj::tensor(a, a), [mut, ao](const ElRef& x) {
            if (mut == 1) return El::pair(x, probes(ao)[0]);
            return El::pair(x, x);
          }};
}
Mor Model::drop(const ObjRef& a) const {
  return {a, Obj::unit(), [](const ElRef&) { return El::unit_el(); }};
}

Mor Model::T_mor(const Mor& f) const {
  auto ff = f.f;
  return {Obj::dist(f.dom), Obj::dist(f.cod), [ff](const ElRef& d) {
            std::vector<WeightedEl> parts;
            for (const auto& p : d->parts) parts.push_back({p.w, ff(p.el)});
            return El::distribution(std::move(parts));
          }};
}
Mor Model::eta(const ObjRef& a) const {
  return {a, Obj::dist(a), [](const ElRef& x) { return El::point_mass(x); }};
}
Mor Model::mu(const ObjRef& a) const {
  int mut = mutation;
  ObjRef ao = a;
  return {Obj::dist(Obj::dist(a)), Obj::dist(a), [mut, ao](const ElRef& dd) {
            std::vector<WeightedEl> flat;
            for (const auto& outer : dd->parts)
              for (const auto& inner : outer.el->parts)
                flat.push_back({outer.w * inner.w, inner.el});
            if (mut == 3 && !flat.empty()) {
              // keep only the heaviest class
              std::size_t best = 0;
              mpq_class bestW = -1;
              for (std::size_t i = 0; i < flat.size(); ++i) {
                mpq_class s = 0;
                for (const auto& q : flat)
                  if (el_equal(ao, q.el, flat[i].el)) s += q.w;
                if (s > bestW) {
                  bestW = s;
                  best = i;
                }
              }
              return El::point_mass(flat[best].el);
            }
            return El::distribution(std::move(flat));
          }};
}
Mor Model::strength(const ObjRef& a, const ObjRef& b) const {
  int mut = mutation;
  return {Obj::tensor(a, Obj::dist(b)), Obj::dist(Obj::tensor(a, b)),
          [mut](const ElRef& x) {
            if (mut == 4 && !x->r->parts.empty())
              return El::point_mass(El::pair(x->l, x->r->parts[0].el));
            std::vector<WeightedEl> parts;
            for (const auto& p : x->r->parts) parts.push_back({p.w, El::pair(x->l, p.el)});
            return El::distribution(std::move(parts));
          }};
}

Mor Model::lolli_mor(const Mor& f, const Mor& g) const {
  auto ff = f.f;
  Mor tg = T_mor(g);
  auto tgf = tg.f;
  return {Obj::fun(f.cod, Obj::dist(g.dom)), Obj::fun(f.dom, Obj::dist(g.cod)),
          [ff, tgf](const ElRef& h) {
            auto hf = h->fn;
            return El::function([ff, tgf, hf](const ElRef& x) { return tgf(hf(ff(x))); });
          }};
}

Mor Model::app_map(const ObjRef& a, const ObjRef& b) const {
  int mut = mutation;
  ObjRef ao = a;
  return {Obj::tensor(Obj::fun(a, Obj::dist(b)), a), Obj::dist(b), [mut, ao](const ElRef& x) {
            if (mut == 5) return x->l->fn(probes(ao)[0]);
            return x->l->fn(x->r);
          }};
}

Mor Model::Phi(const Mor& f) const {
  if (f.cod->kind != ObjKind::Fun || f.cod->right->kind != ObjKind::Dist)
    throw std::logic_error("Phi needs a function-shaped codomain: " + print_obj(f.cod));
  ObjRef a = f.cod->left, b = f.cod->right->left;
  return compose(tensor_mor(f, id(a)), app_map(a, b));
}

Mor Model::Phi_inv(const Mor& g) const {
  if (g.dom->kind != ObjKind::Tensor || g.cod->kind != ObjKind::Dist)
    throw std::logic_error("Phi_inv needs a pair-shaped domain: " + print_obj(g.dom));
  ObjRef x = g.dom->left, a = g.dom->right;
  auto gf = g.f;
  return {x, Obj::fun(a, g.cod), [gf](const ElRef& xv) {
            return El::function([gf, xv](const ElRef& av) { return gf(El::pair(xv, av)); });
          }};
}

bool Model::mor_eq(const Mor& f, const Mor& g) const {
  if (!obj_equal(f.dom, g.dom) || !obj_equal(f.cod, g.cod)) return false;
  for (const auto& p : probes(f.dom))
    if (!el_equal(f.cod, f.f(p), g.f(p))) return false;
  return true;
}

Mor Model::sample_mor(const ObjRef& a, const ObjRef& b, std::uint64_t seed) const {
  ObjRef ao = a, bo = b;
  return {a, b, [ao, bo, seed](const ElRef& x) {
            return seeded_element(bo, next_seed(seed, el_fingerprint(ao, x)));
          }};
}

} // namespace linlam::fin
