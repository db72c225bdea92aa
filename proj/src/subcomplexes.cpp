#include "dendro/subcomplexes.hpp"

#include <algorithm>
#include <deque>

#include "dendro/error.hpp"

namespace dendro {

Subcomplex::Key key_of(const OmegaMorphism& mono) {
  Subcomplex::Key key;
  key.push_back(mono.image());
  std::vector<std::vector<int>> ops;
  for (int w : mono.domain.vertices()) {
    std::vector<int> op;
    op.push_back(mono(w));
    std::vector<int> ins;
    for (int e : mono.domain.inputs(w)) ins.push_back(mono(e));
    std::sort(ins.begin(), ins.end());
    op.insert(op.end(), ins.begin(), ins.end());
    ops.push_back(std::move(op));
  }
  std::sort(ops.begin(), ops.end());
  key.insert(key.end(), ops.begin(), ops.end());
  return key;
}

Subcomplex::Key map_cell_key(const OmegaMorphism& m) {
  Subcomplex::Key key;
  key.push_back(m.image());
  std::vector<std::vector<int>> ops;
  for (int w : m.domain.vertices()) {
    std::vector<int> ins;
    for (int e : m.domain.inputs(w)) ins.push_back(m(e));
    std::sort(ins.begin(), ins.end());
    ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
    if (ins.size() == 1 && ins[0] == m(w)) continue;  // collapsed vertex
    std::vector<int> op;
    op.push_back(m(w));
    op.insert(op.end(), ins.begin(), ins.end());
    ops.push_back(std::move(op));
  }
  std::sort(ops.begin(), ops.end());
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  key.insert(key.end(), ops.begin(), ops.end());
  return key;
}

std::optional<OmegaMorphism> try_factor(const OmegaMorphism& sub,
                                        const OmegaMorphism& through) {
  if (!(sub.codomain == through.codomain)) return std::nullopt;
  std::vector<int> inv(through.codomain.edge_count(), -1);
  for (int e = 0; e < through.domain.edge_count(); ++e) inv[through.edge_map[e]] = e;
  std::vector<int> map(sub.domain.edge_count());
  for (int e = 0; e < sub.domain.edge_count(); ++e) {
    int img = inv[sub.edge_map[e]];
    if (img < 0) return std::nullopt;
    map[e] = img;
  }
  OmegaMorphism h{sub.domain, through.domain, std::move(map)};
  if (!validate_morphism(h)) return std::nullopt;
  return h;
}

OmegaMorphism factor_through(const OmegaMorphism& sub, const OmegaMorphism& through) {
  auto h = try_factor(sub, through);
  require(h.has_value(), "factor: no factorization");
  return *h;
}

namespace {

// subobject order between cells
bool cell_leq(const OmegaMorphism& sub, const OmegaMorphism& big) {
  return try_factor(sub, big).has_value();
}

std::map<Subcomplex::Key, OmegaMorphism> close_down(const Tree& ambient,
                                                    const std::vector<FaceMono>& gens) {
  std::map<Subcomplex::Key, OmegaMorphism> cells;
  std::deque<OmegaMorphism> queue;
  for (const FaceMono& g : gens) {
    require(g.mono.codomain == ambient, "subcomplex: generator into wrong tree");
    if (cells.emplace(key_of(g.mono), g.mono).second) queue.push_back(g.mono);
  }
  while (!queue.empty()) {
    OmegaMorphism m = queue.front();
    queue.pop_front();
    for (const FaceMono& f : elementary_faces(m.domain)) {
      OmegaMorphism comp = compose(m, f.mono);
      if (cells.emplace(key_of(comp), comp).second) queue.push_back(comp);
    }
  }
  return cells;
}

}  // namespace

Subcomplex Subcomplex::closure(const Tree& ambient, const std::vector<FaceMono>& generators) {
  Subcomplex s(ambient);
  s.cells_ = close_down(ambient, generators);
  return s;
}

Subcomplex Subcomplex::full(const Tree& ambient) {
  FaceMono id;
  id.mono = identity_morphism(ambient);
  id.kind = FaceKind::Composite;
  id.image = id.mono.image();
  return closure(ambient, {id});
}

const OmegaMorphism& Subcomplex::cell(const Key& k) const {
  auto it = cells_.find(k);
  require(it != cells_.end(), "subcomplex: no such cell");
  return it->second;
}

std::vector<Subcomplex::Key> Subcomplex::maximal_cells() const {
  std::vector<Key> out;
  for (const auto& [k, m] : cells_) {
    bool max = true;
    for (const auto& [k2, m2] : cells_) {
      if (k2 != k && cell_leq(m, m2)) {
        max = false;
        break;
      }
    }
    if (max) out.push_back(k);
  }
  return out;
}

bool Subcomplex::is_full() const {
  return has_cell(key_of(identity_morphism(ambient_)));
}

std::map<Subcomplex::Key, OmegaMorphism> all_face_monos(const Tree& t) {
  return Subcomplex::full(t).cells();
}

Subcomplex boundary(const Tree& t) {
  return Subcomplex::closure(t, elementary_faces(t));
}

namespace {

Subcomplex faces_except(const Tree& t, const Subcomplex::Key& skip) {
  std::vector<FaceMono> gens;
  for (FaceMono& f : elementary_faces(t)) {
    if (key_of(f.mono) != skip) gens.push_back(std::move(f));
  }
  return Subcomplex::closure(t, gens);
}

}  // namespace

Subcomplex inner_horn(const Tree& t, int e) {
  return faces_except(t, key_of(inner_face(t, e).mono));
}

Subcomplex leaf_horn(const Tree& t, int v) {
  return faces_except(t, key_of(leaf_face(t, v).mono));
}

Subcomplex root_horn(const Tree& t) {
  return faces_except(t, key_of(root_face(t).mono));
}

Subcomplex spine(const Tree& t) {
  if (t.vertex_count() == 0) return Subcomplex::full(t);
  std::vector<FaceMono> gens;
  for (int w : t.vertices()) {
    std::vector<int> ins = t.inputs(w);
    std::sort(ins.begin(), ins.end());
    Tree cor = Tree::corolla(static_cast<int>(ins.size()));
    std::vector<int> map(cor.edge_count());
    map[cor.root()] = w;
    for (size_t i = 0; i < ins.size(); ++i) map[i + 1] = ins[i];
    FaceMono f;
    f.mono = OmegaMorphism{cor, t, map};
    f.kind = FaceKind::Composite;
    f.image = f.mono.image();
    require(validate_morphism(f.mono), "spine: corolla cell fails validation");
    gens.push_back(std::move(f));
  }
  return Subcomplex::closure(t, gens);
}

Subcomplex union_of(const Subcomplex& a, const Subcomplex& b) {
  require(a.ambient() == b.ambient(), "union: ambient mismatch");
  std::vector<FaceMono> gens;
  for (const auto& [k, m] : a.cells()) {
    FaceMono f;
    f.mono = m;
    f.image = m.image();
    gens.push_back(std::move(f));
  }
  for (const auto& [k, m] : b.cells()) {
    FaceMono f;
    f.mono = m;
    f.image = m.image();
    gens.push_back(std::move(f));
  }
  return Subcomplex::closure(a.ambient(), gens);
}

Subcomplex intersect(const Subcomplex& a, const Subcomplex& b) {
  require(a.ambient() == b.ambient(), "intersect: ambient mismatch");
  std::vector<FaceMono> gens;
  for (const auto& [k, m] : a.cells()) {
    if (b.has_cell(k)) {
      FaceMono f;
      f.mono = m;
      f.image = m.image();
      gens.push_back(std::move(f));
    }
  }
  return Subcomplex::closure(a.ambient(), gens);
}

bool is_subcomplex(const Subcomplex& a, const Subcomplex& b) {
  if (!(a.ambient() == b.ambient())) return false;
  for (const auto& [k, m] : a.cells())
    if (!b.has_cell(k)) return false;
  return true;
}

namespace {

// Reinterprets a value over from_cell's domain as one over to_cell's domain
// (same subobject, possibly different canonical representatives).
Dendrex transport(const Operad& p, const OmegaMorphism& from_cell,
                  const OmegaMorphism& to_cell, const Dendrex& value) {
  if (from_cell.domain == to_cell.domain && from_cell.edge_map == to_cell.edge_map)
    return value;
  return restrict_dendrex(p, factor_through(to_cell, from_cell), value);
}

// closures of single cells, cached per solver run
struct CellLattice {
  const Subcomplex* complex;
  std::map<Subcomplex::Key, std::map<Subcomplex::Key, OmegaMorphism>> closures;

  const std::map<Subcomplex::Key, OmegaMorphism>& closure_of(const Subcomplex::Key& k) {
    auto it = closures.find(k);
    if (it == closures.end()) {
      FaceMono f;
      f.mono = complex->cell(k);
      f.image = f.mono.image();
      it = closures.emplace(k, close_down(complex->ambient(), {f})).first;
    }
    return it->second;
  }

  // maximal cells common to the closures of two cells
  std::vector<Subcomplex::Key> shared_maximal(const Subcomplex::Key& a,
                                              const Subcomplex::Key& b) {
    const auto& ca = closure_of(a);
    const auto& cb = closure_of(b);
    std::vector<Subcomplex::Key> common;
    for (const auto& [k, m] : ca)
      if (cb.count(k)) common.push_back(k);
    std::vector<Subcomplex::Key> out;
    for (const auto& k : common) {
      bool max = true;
      for (const auto& other : common) {
        if (other != k && cell_leq(ca.at(k), ca.at(other))) {
          max = false;
          break;
        }
      }
      if (max) out.push_back(k);
    }
    return out;
  }
};

struct Assigned {
  Subcomplex::Key key;
  const OmegaMorphism* mono;
  const Dendrex* value;
};

// do the values of two cells agree on every shared cell?
bool cells_agree(CellLattice& lat, const Operad& p, const Assigned& a, const Assigned& b) {
  for (const Subcomplex::Key& s : lat.shared_maximal(a.key, b.key)) {
    const OmegaMorphism& scell = lat.closure_of(a.key).at(s);
    OmegaMorphism fa = factor_through(scell, *a.mono);
    OmegaMorphism fb = factor_through(scell, *b.mono);
    if (!(restrict_dendrex(p, fa, *a.value) == restrict_dendrex(p, fb, *b.value)))
      return false;
  }
  return true;
}

}  // namespace

bool compatible_map(const Subcomplex& a, const Operad& p, const PresheafMap& f) {
  CellLattice lat{&a, {}};
  std::vector<Assigned> cells;
  for (const auto& [k, v] : f.values) cells.push_back({k, &a.cell(k), &v});
  for (size_t i = 0; i < cells.size(); ++i)
    for (size_t j = i + 1; j < cells.size(); ++j)
      if (!cells_agree(lat, p, cells[i], cells[j])) return false;
  return true;
}

Dendrex map_value_on(const Subcomplex& a, const Operad& p, const PresheafMap& f,
                     const Subcomplex::Key& key) {
  require(a.has_cell(key), "map_value_on: no such cell");
  auto direct = f.values.find(key);
  if (direct != f.values.end()) return direct->second;
  for (const auto& [k, v] : f.values) {
    auto h = try_factor(a.cell(key), a.cell(k));
    if (h) return restrict_dendrex(p, *h, v);
  }
  throw Error("map_value_on: cell not under any valued cell");
}

PresheafMap restrict_map(const Subcomplex& b, const Operad& p, const PresheafMap& g,
                         const Subcomplex& a) {
  PresheafMap out;
  for (const Subcomplex::Key& k : a.maximal_cells())
    out.values[k] = transport(p, b.cell(k), a.cell(k), map_value_on(b, p, g, k));
  return out;
}

std::vector<PresheafMap> extend(const Subcomplex& a, const Subcomplex& b,
                                const PresheafMap& f, const Operad& p) {
  require(is_subcomplex(a, b), "extend: source is not a subcomplex of the target");
  CellLattice lat{&b, {}};

  // given values, reinterpreted over b's canonical representatives
  std::vector<std::pair<Subcomplex::Key, Dendrex>> forced;
  for (const auto& [k, v] : f.values) {
    require(a.has_cell(k), "extend: map value on a cell outside the source");
    forced.emplace_back(k, transport(p, a.cell(k), b.cell(k), v));
  }

  // maximal cells of b: cells of a keep their forced values, the rest are
  // solved in canonical-code order
  std::vector<Subcomplex::Key> missing;
  PresheafMap base;
  for (const Subcomplex::Key& k : b.maximal_cells()) {
    if (a.has_cell(k)) {
      base.values[k] = transport(p, a.cell(k), b.cell(k), map_value_on(a, p, f, k));
    } else {
      missing.push_back(k);
    }
  }
  std::sort(missing.begin(), missing.end(),
            [&](const Subcomplex::Key& x, const Subcomplex::Key& y) {
              std::string cx = b.cell(x).domain.canonical_code();
              std::string cy = b.cell(y).domain.canonical_code();
              if (cx != cy) return cx < cy;
              return x < y;
            });

  std::vector<Assigned> determined;
  for (const auto& [k, v] : forced)
    if (!base.values.count(k)) determined.push_back({k, &b.cell(k), &v});
  for (const auto& [k, v] : base.values)
    determined.push_back({k, &b.cell(k), &v});

  std::vector<std::vector<Dendrex>> candidates;
  for (const Subcomplex::Key& k : missing)
    candidates.push_back(nerve_dendrices(p, b.cell(k).domain));

  std::vector<PresheafMap> out;
  std::vector<const Dendrex*> chosen(missing.size(), nullptr);

  auto rec = [&](auto&& self, size_t idx) -> void {
    if (idx == missing.size()) {
      PresheafMap g = base;
      for (size_t i = 0; i < missing.size(); ++i) g.values[missing[i]] = *chosen[i];
      out.push_back(std::move(g));
      return;
    }
    const OmegaMorphism& mono = b.cell(missing[idx]);
    for (const Dendrex& cand : candidates[idx]) {
      Assigned me{missing[idx], &mono, &cand};
      bool ok = true;
      for (const Assigned& other : determined) {
        if (!cells_agree(lat, p, me, other)) {
          ok = false;
          break;
        }
      }
      for (size_t j = 0; ok && j < idx; ++j) {
        Assigned other{missing[j], &b.cell(missing[j]), chosen[j]};
        if (!cells_agree(lat, p, me, other)) ok = false;
      }
      if (!ok) continue;
      chosen[idx] = &cand;
      self(self, idx + 1);
      chosen[idx] = nullptr;
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<PresheafMap> maps_to_nerve(const Subcomplex& a, const Operad& p) {
  return extend(Subcomplex(a.ambient()), a, PresheafMap{}, p);
}

}  // namespace dendro
