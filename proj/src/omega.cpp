#include "dendro/omega.hpp"

#include <algorithm>
#include <map>

#include "dendro/error.hpp"

namespace dendro {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::optional<FreeOperation> operation_exists(const Tree& s, int out,
                                              std::vector<int> ins) {
  require(out >= 0 && out < s.edge_count(), "operation_exists: unknown edge");
  for (int i : ins)
    require(i >= 0 && i < s.edge_count(), "operation_exists: unknown edge");
  ins = sorted_unique(ins);
  if (ins.size() == 1 && ins[0] == out) {
    return FreeOperation{out, ins, {}};
  }
  std::vector<int> region;
  for (int w : s.vertices()) {
    if (!s.edge_leq(out, w)) continue;
    bool above_input = false;
    for (int i : ins) {
      if (s.edge_leq(i, w)) {
        above_input = true;
        break;
      }
    }
    if (!above_input) region.push_back(w);
  }
  if (region.empty()) return std::nullopt;
  if (!std::binary_search(region.begin(), region.end(), out)) return std::nullopt;
  std::vector<int> dangling;
  for (int w : region) {
    for (int e : s.inputs(w)) {
      if (!std::binary_search(region.begin(), region.end(), e)) dangling.push_back(e);
    }
  }
  dangling = sorted_unique(dangling);
  if (dangling != ins) return std::nullopt;
  return FreeOperation{out, ins, region};
}

std::vector<FreeOperation> operations_with_output(const Tree& s, int out) {
  std::vector<FreeOperation> ops;
  ops.push_back(FreeOperation{out, {out}, {}});  // identity
  if (s.is_vertex(out)) {
    // grow regions upward from the vertex at `out`: each dangling edge with
    // a vertex above is either cut or expanded
    std::vector<int> region = {out};
    auto rec = [&](auto&& self, std::vector<int> frontier, size_t idx) -> void {
      if (idx == frontier.size()) {
        std::vector<int> reg = region;
        std::sort(reg.begin(), reg.end());
        std::vector<int> cut;
        for (int w : reg)
          for (int e : s.inputs(w))
            if (!std::binary_search(reg.begin(), reg.end(), e)) cut.push_back(e);
        ops.push_back(FreeOperation{out, sorted_unique(cut), reg});
        return;
      }
      int e = frontier[idx];
      // cut at e
      self(self, frontier, idx + 1);
      // or expand past e
      if (s.is_vertex(e)) {
        region.push_back(e);
        std::vector<int> next = frontier;
        next.erase(next.begin() + idx);
        for (int in : s.inputs(e)) next.push_back(in);
        self(self, next, idx);
        region.pop_back();
      }
    };
    rec(rec, s.inputs(out), 0);
  }
  std::sort(ops.begin(), ops.end());
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  return ops;
}

std::vector<FreeOperation> all_operations(const Tree& s) {
  std::vector<FreeOperation> out;
  for (int e = 0; e < s.edge_count(); ++e) {
    auto ops = operations_with_output(s, e);
    out.insert(out.end(), ops.begin(), ops.end());
  }
  return out;
}

std::vector<int> OmegaMorphism::image() const {
  std::vector<int> v = edge_map;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

OmegaMorphism identity_morphism(const Tree& t) {
  OmegaMorphism m{t, t, {}};
  m.edge_map.resize(t.edge_count());
  for (int e = 0; e < t.edge_count(); ++e) m.edge_map[e] = e;
  return m;
}

bool validate_morphism(const OmegaMorphism& m) {
  if (static_cast<int>(m.edge_map.size()) != m.domain.edge_count()) return false;
  for (int v : m.edge_map)
    if (v < 0 || v >= m.codomain.edge_count()) return false;
  for (int w : m.domain.vertices()) {
    std::vector<int> ins;
    for (int e : m.domain.inputs(w)) ins.push_back(m.edge_map[e]);
    std::vector<int> uniq = ins;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() != ins.size()) return false;  // repeated input colour
    if (!operation_exists(m.codomain, m.edge_map[w], uniq)) return false;
  }
  return true;
}

OmegaMorphism compose(const OmegaMorphism& g, const OmegaMorphism& f) {
  require(f.codomain == g.domain, "compose: domain mismatch");
  OmegaMorphism h{f.domain, g.codomain, {}};
  h.edge_map.resize(f.edge_map.size());
  for (size_t e = 0; e < f.edge_map.size(); ++e)
    h.edge_map[e] = g.edge_map[f.edge_map[e]];
  return h;
}

bool is_mono(const OmegaMorphism& m) {
  return static_cast<int>(m.image().size()) == m.domain.edge_count();
}

bool is_iso(const OmegaMorphism& m) {
  auto inv = inverse(m);
  return inv.has_value();
}

std::optional<OmegaMorphism> inverse(const OmegaMorphism& m) {
  if (m.domain.edge_count() != m.codomain.edge_count()) return std::nullopt;
  std::vector<int> inv(m.codomain.edge_count(), -1);
  for (int e = 0; e < m.domain.edge_count(); ++e) {
    if (inv[m.edge_map[e]] != -1) return std::nullopt;
    inv[m.edge_map[e]] = e;
  }
  OmegaMorphism w{m.codomain, m.domain, inv};
  if (!validate_morphism(w)) return std::nullopt;
  return w;
}

namespace {

FaceMono make_face(Tree domain, const Tree& codomain, std::vector<int> map,
                   FaceKind kind) {
  FaceMono f;
  f.mono = OmegaMorphism{std::move(domain), codomain, std::move(map)};
  f.kind = kind;
  f.image = f.mono.image();
  require(validate_morphism(f.mono), "face: constructed map fails validation");
  require(is_mono(f.mono), "face: constructed map not injective");
  return f;
}

// Compacts a codomain edge subset with adjusted structure into a new tree
// plus the inclusion map (new ids in increasing old-id order).
struct Subset {
  std::vector<int> keep;                 // sorted old edge ids
  std::vector<int> parent_override;     // old-id indexed, -2 = untouched
  std::vector<char> vertex_override;    // old-id indexed, 2 = untouched
  int root_old = -1;

  FaceMono build(const Tree& t, FaceKind kind) const {
    std::vector<int> new_id(t.edge_count(), -1);
    for (size_t i = 0; i < keep.size(); ++i) new_id[keep[i]] = static_cast<int>(i);
    Tree::Data d;
    d.root = new_id[root_old];
    for (int e : keep) {
      char isv = vertex_override[e] == 2 ? (t.is_vertex(e) ? 1 : 0) : vertex_override[e];
      int par = parent_override[e] == -2 ? t.parent(e) : parent_override[e];
      d.is_vertex.push_back(isv);
      d.parent.push_back(e == root_old ? -1 : new_id[par]);
    }
    std::vector<int> map = keep;
    return make_face(Tree::from_data(d), t, std::move(map), kind);
  }
};

Subset fresh_subset(const Tree& t) {
  Subset s;
  s.parent_override.assign(t.edge_count(), -2);
  s.vertex_override.assign(t.edge_count(), 2);
  return s;
}

}  // namespace

FaceMono inner_face(const Tree& t, int e) {
  require(t.is_inner(e), "inner_face: edge is not inner");
  Subset s = fresh_subset(t);
  s.root_old = t.root();
  for (int x = 0; x < t.edge_count(); ++x) {
    if (x == e) continue;
    s.keep.push_back(x);
    if (t.parent(x) == e) s.parent_override[x] = t.parent(e);
  }
  return s.build(t, FaceKind::Inner);
}

FaceMono leaf_face(const Tree& t, int v) {
  require(t.is_vertex(v), "leaf_face: not a vertex");
  for (int e : t.inputs(v))
    require(!t.is_vertex(e), "leaf_face: vertex is not maximal");
  Subset s = fresh_subset(t);
  s.root_old = t.root();
  const auto& ins = t.inputs(v);
  for (int x = 0; x < t.edge_count(); ++x) {
    if (std::find(ins.begin(), ins.end(), x) != ins.end()) continue;
    s.keep.push_back(x);
  }
  s.vertex_override[v] = 0;
  return s.build(t, t.vertex_count() == 1 ? FaceKind::CorollaEdge : FaceKind::Leaf);
}

FaceMono root_face(const Tree& t) {
  require(t.vertex_count() >= 2, "root_face: needs at least two vertices");
  int rv = t.root();
  require(t.is_vertex(rv), "root_face: no root vertex");
  std::vector<int> inner_inputs;
  for (int e : t.inputs(rv))
    if (t.is_vertex(e)) inner_inputs.push_back(e);
  require(inner_inputs.size() == 1,
          "root_face: root vertex must have exactly one inner input");
  int e = inner_inputs[0];
  Subset s = fresh_subset(t);
  s.root_old = e;
  for (int x = 0; x < t.edge_count(); ++x)
    if (t.edge_leq(e, x)) s.keep.push_back(x);
  return s.build(t, FaceKind::Root);
}

FaceMono corolla_edge_face(const Tree& t, int e) {
  require(t.vertex_count() == 1 && t.is_vertex(t.root()),
          "corolla_edge_face: tree is not a corolla");
  require(e >= 0 && e < t.edge_count(), "corolla_edge_face: unknown edge");
  return make_face(Tree::eta(), t, {e}, FaceKind::CorollaEdge);
}

std::vector<FaceMono> elementary_faces(const Tree& t) {
  std::vector<FaceMono> out;
  if (t.vertex_count() == 0) return out;  // eta has no faces
  if (t.vertex_count() == 1) {
    for (int e = 0; e < t.edge_count(); ++e)
      out.push_back(corolla_edge_face(t, e));
    return out;
  }
  for (int e : t.inner_edges()) out.push_back(inner_face(t, e));
  for (int v : t.leaf_vertices()) out.push_back(leaf_face(t, v));
  int rv = t.root();
  int inner_inputs = 0;
  for (int e : t.inputs(rv))
    if (t.is_vertex(e)) ++inner_inputs;
  if (inner_inputs == 1) out.push_back(root_face(t));
  return out;
}

OmegaMorphism degeneracy(const Tree& t, int e) {
  require(e >= 0 && e < t.edge_count(), "degeneracy: unknown edge");
  // new upper copy e' takes over the vertex above e (if any); e becomes the
  // output of the new unary vertex
  Tree::Data d;
  int eprime = t.edge_count();
  d.root = t.root();
  for (int x = 0; x < t.edge_count(); ++x) {
    // inputs of the old vertex at e now enter via the upper copy e'
    d.parent.push_back(t.parent(x) == e ? eprime : t.parent(x));
    d.is_vertex.push_back(t.is_vertex(x) ? 1 : 0);
  }
  d.parent.push_back(e);
  d.is_vertex.push_back(t.is_vertex(e) ? 1 : 0);
  d.is_vertex[e] = 1;  // the new unary vertex
  std::vector<int> map(t.edge_count() + 1);
  for (int x = 0; x < t.edge_count(); ++x) map[x] = x;
  map[eprime] = e;
  OmegaMorphism m{Tree::from_data(d), t, std::move(map)};
  require(validate_morphism(m), "degeneracy: constructed map fails validation");
  return m;
}

namespace {

// vertices ordered root-outward so outputs are assigned before the vertex
std::vector<int> vertices_topdown(const Tree& t) {
  std::vector<int> order;
  std::vector<int> stack = {t.root()};
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    if (!t.is_vertex(e)) continue;
    order.push_back(e);
    for (int in : t.inputs(e)) stack.push_back(in);
  }
  return order;
}

}  // namespace

std::vector<OmegaMorphism> hom_set(const Tree& t, const Tree& s) {
  std::vector<OmegaMorphism> out;
  std::map<int, std::vector<FreeOperation>> ops_cache;
  auto ops_at = [&](int e) -> const std::vector<FreeOperation>& {
    auto it = ops_cache.find(e);
    if (it == ops_cache.end())
      it = ops_cache.emplace(e, operations_with_output(s, e)).first;
    return it->second;
  };
  std::vector<int> order = vertices_topdown(t);
  std::vector<int> map(t.edge_count(), -1);

  auto rec = [&](auto&& self, size_t idx) -> void {
    if (idx == order.size()) {
      out.push_back(OmegaMorphism{t, s, map});
      return;
    }
    int w = order[idx];
    const auto& ins = t.inputs(w);
    for (const FreeOperation& op : ops_at(map[w])) {
      if (op.inputs.size() != ins.size() && !(op.is_identity() && ins.size() == 1))
        continue;
      if (op.is_identity()) {
        if (ins.size() != 1) continue;
        map[ins[0]] = op.output;
        self(self, idx + 1);
        map[ins[0]] = -1;
        continue;
      }
      // all bijections ins -> op.inputs
      std::vector<int> perm(op.inputs.size());
      for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
      do {
        for (size_t i = 0; i < ins.size(); ++i) map[ins[i]] = op.inputs[perm[i]];
        self(self, idx + 1);
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (size_t i = 0; i < ins.size(); ++i) map[ins[i]] = -1;
    }
  };

  for (int rimg = 0; rimg < s.edge_count(); ++rimg) {
    map.assign(t.edge_count(), -1);
    map[t.root()] = rimg;
    rec(rec, 0);
  }
  std::sort(out.begin(), out.end(), [](const OmegaMorphism& a, const OmegaMorphism& b) {
    return a.edge_map < b.edge_map;
  });
  return out;
}

}  // namespace dendro
