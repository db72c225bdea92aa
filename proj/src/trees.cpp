#include "dendro/trees.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dendro/error.hpp"

namespace dendro {

void Tree::index() {
  inputs_.assign(parent_.size(), {});
  vertices_.clear();
  for (int e = 0; e < edge_count(); ++e) {
    if (is_vertex_[e]) vertices_.push_back(e);
  }
  for (int e = 0; e < edge_count(); ++e) {
    if (parent_[e] >= 0) inputs_[parent_[e]].push_back(e);
  }
}

void Tree::check() const {
  const int n = edge_count();
  require(n > 0, "tree: needs at least one edge");
  require(root_ >= 0 && root_ < n, "tree: root out of range");
  require(parent_[root_] == -1, "tree: root must have no parent");
  for (int e = 0; e < n; ++e) {
    if (e == root_) continue;
    require(parent_[e] >= 0 && parent_[e] < n, "tree: dangling edge");
    require(is_vertex_[parent_[e]], "tree: parent must be a vertex");
  }
  // every edge reaches the root without cycles
  for (int e = 0; e < n; ++e) {
    int cur = e, steps = 0;
    while (cur != root_) {
      cur = parent_[cur];
      require(cur >= 0 && ++steps <= n, "tree: parent chain does not reach root");
    }
  }
}

Tree Tree::from_data(const Data& d) {
  require(d.parent.size() == d.is_vertex.size(), "tree: size mismatch");
  Tree t;
  t.root_ = d.root;
  t.parent_ = d.parent;
  t.is_vertex_ = d.is_vertex;
  t.check();
  t.index();
  return t;
}

Tree Tree::eta() {
  Data d;
  d.root = 0;
  d.parent = {-1};
  d.is_vertex = {0};
  return from_data(d);
}

Tree Tree::corolla(int arity) {
  require(arity >= 0, "corolla: arity must be >= 0");
  Data d;
  d.root = 0;
  d.parent.assign(arity + 1, 0);
  d.parent[0] = -1;
  d.is_vertex.assign(arity + 1, 0);
  d.is_vertex[0] = 1;
  return from_data(d);
}

Tree Tree::linear(int vertices) {
  require(vertices >= 0, "linear: vertex count must be >= 0");
  Data d;
  d.root = 0;
  d.parent.resize(vertices + 1);
  d.is_vertex.resize(vertices + 1);
  for (int e = 0; e <= vertices; ++e) {
    d.parent[e] = e - 1;
    d.is_vertex[e] = e < vertices ? 1 : 0;
  }
  return from_data(d);
}

namespace {

// Appends a copy of sub under `vertex` of the data being built; the copy's
// root edge takes the id `slot` which must already exist in d.
void append_subtree(Tree::Data& d, const Tree& sub, int slot) {
  std::vector<int> remap(sub.edge_count(), -1);
  remap[sub.root()] = slot;
  d.is_vertex[slot] = sub.is_vertex(sub.root()) ? 1 : 0;
  // copy edges in construction order: walk sub's edges breadth-first from
  // the root, respecting input-list order
  std::vector<int> stack = {sub.root()};
  std::vector<int> order;
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    order.push_back(e);
    if (sub.is_vertex(e)) {
      const auto& ins = sub.inputs(e);
      for (auto it = ins.rbegin(); it != ins.rend(); ++it) stack.push_back(*it);
    }
  }
  for (int e : order) {
    if (e == sub.root()) continue;
    remap[e] = static_cast<int>(d.parent.size());
    d.parent.push_back(-2);  // patched below
    d.is_vertex.push_back(sub.is_vertex(e) ? 1 : 0);
  }
  for (int e : order) {
    if (e == sub.root()) continue;
    d.parent[remap[e]] = remap[sub.parent(e)];
  }
}

}  // namespace

Tree Tree::vertex_tree(const std::vector<Tree>& children) {
  Data d;
  d.root = 0;
  d.parent = {-1};
  d.is_vertex = {1};
  for (const Tree& c : children) {
    int slot = static_cast<int>(d.parent.size());
    d.parent.push_back(0);
    d.is_vertex.push_back(0);
    append_subtree(d, c, slot);
  }
  return from_data(d);
}

const std::vector<int>& Tree::inputs(int vertex) const {
  require(vertex >= 0 && vertex < edge_count() && is_vertex_[vertex],
          "inputs: not a vertex");
  return inputs_[vertex];
}

int Tree::arity(int vertex) const {
  return static_cast<int>(inputs(vertex).size());
}

int Tree::vertex_index(int vertex) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), vertex);
  require(it != vertices_.end() && *it == vertex, "vertex_index: not a vertex");
  return static_cast<int>(it - vertices_.begin());
}

std::vector<int> Tree::leaves() const {
  std::vector<int> out;
  for (int e = 0; e < edge_count(); ++e)
    if (is_leaf(e)) out.push_back(e);
  return out;
}

std::vector<int> Tree::inner_edges() const {
  std::vector<int> out;
  for (int e = 0; e < edge_count(); ++e)
    if (is_inner(e)) out.push_back(e);
  return out;
}

std::vector<int> Tree::leaf_vertices() const {
  std::vector<int> out;
  for (int w : vertices_) {
    bool maximal = true;
    for (int e : inputs_[w])
      if (is_vertex_[e]) maximal = false;
    if (maximal) out.push_back(w);
  }
  return out;
}

bool Tree::edge_leq(int e1, int e2) const {
  require(e1 >= 0 && e1 < edge_count() && e2 >= 0 && e2 < edge_count(),
          "edge_leq: unknown edge");
  int cur = e2;
  while (cur != -1) {
    if (cur == e1) return true;
    cur = parent_[cur];
  }
  return false;
}

std::string Tree::edge_code(int edge) const {
  if (!is_vertex_[edge]) return "l";
  std::vector<std::string> parts;
  parts.reserve(inputs_[edge].size());
  for (int e : inputs_[edge]) parts.push_back(edge_code(e));
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (const auto& p : parts) out += p;
  out += ")";
  return out;
}

std::uint64_t Tree::automorphism_count() const {
  // product over vertices of (multiplicity of each identical input class)!
  std::uint64_t result = 1;
  for (int w : vertices_) {
    std::map<std::string, std::uint64_t> classes;
    for (int e : inputs_[w]) classes[edge_code(e)]++;
    for (const auto& [code, m] : classes) {
      for (std::uint64_t i = 2; i <= m; ++i) result *= i;
    }
  }
  return result;
}

EdgeClasses classify_edges(const Tree& t) {
  EdgeClasses c;
  c.root = t.root();
  c.inner = t.inner_edges();
  c.leaves = t.leaves();
  return c;
}

Grafted graft_tracked(const Tree& base, int leaf, const Tree& scion) {
  require(leaf >= 0 && leaf < base.edge_count(), "graft: unknown edge");
  const bool base_is_eta = base.edge_count() == 1 && base.vertex_count() == 0;
  require(base.is_leaf(leaf) || (base_is_eta && leaf == base.root()),
          "graft: not a leaf edge");

  Grafted g;
  if (base_is_eta) {
    g.tree = scion;
    g.base_edges = {scion.root()};
    g.scion_edges.resize(scion.edge_count());
    std::iota(g.scion_edges.begin(), g.scion_edges.end(), 0);
    return g;
  }
  Tree::Data d;
  d.root = base.root();
  d.parent.assign(base.edge_count(), -1);
  d.is_vertex.assign(base.edge_count(), 0);
  for (int e = 0; e < base.edge_count(); ++e) {
    d.parent[e] = base.parent(e);
    d.is_vertex[e] = base.is_vertex(e) ? 1 : 0;
  }
  g.base_edges.resize(base.edge_count());
  std::iota(g.base_edges.begin(), g.base_edges.end(), 0);

  g.scion_edges.assign(scion.edge_count(), -1);
  g.scion_edges[scion.root()] = leaf;
  d.is_vertex[leaf] = scion.is_vertex(scion.root()) ? 1 : 0;
  for (int e = 0; e < scion.edge_count(); ++e) {
    if (e == scion.root()) continue;
    g.scion_edges[e] = static_cast<int>(d.parent.size());
    d.parent.push_back(-2);
    d.is_vertex.push_back(scion.is_vertex(e) ? 1 : 0);
  }
  for (int e = 0; e < scion.edge_count(); ++e) {
    if (e == scion.root()) continue;
    d.parent[g.scion_edges[e]] = g.scion_edges[scion.parent(e)];
  }
  g.tree = Tree::from_data(d);
  return g;
}

Tree graft(const Tree& base, int leaf, const Tree& scion) {
  return graft_tracked(base, leaf, scion).tree;
}

namespace {

// all trees with exactly v vertices, arity bound a, sorted by code
std::vector<Tree> exact_trees(int v, int a, std::vector<std::vector<Tree>>& memo) {
  if (static_cast<int>(memo.size()) > v && !memo[v].empty()) return memo[v];
  std::vector<Tree> out;
  if (v == 0) {
    out.push_back(Tree::eta());
  } else {
    // pool of strictly smaller trees, sorted by (vertices, code)
    std::vector<Tree> pool;
    std::vector<int> pool_v;
    for (int s = 0; s < v; ++s) {
      for (const Tree& t : exact_trees(s, a, memo)) {
        pool.push_back(t);
        pool_v.push_back(s);
      }
    }
    // root vertex of arity n with a multiset of children totalling v-1
    for (int n = 0; n <= a; ++n) {
      std::vector<int> pick;
      std::vector<Tree> kids;
      auto rec = [&](auto&& self, int slot, int lo, int remaining) -> void {
        if (slot == n) {
          if (remaining == 0) out.push_back(Tree::vertex_tree(kids));
          return;
        }
        for (int i = lo; i < static_cast<int>(pool.size()); ++i) {
          if (pool_v[i] > remaining) continue;
          kids.push_back(pool[i]);
          self(self, slot + 1, i, remaining - pool_v[i]);
          kids.pop_back();
        }
      };
      rec(rec, 0, 0, v - 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const Tree& x, const Tree& y) {
    return x.canonical_code() < y.canonical_code();
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Tree& x, const Tree& y) {
                          return x.canonical_code() == y.canonical_code();
                        }),
            out.end());
  if (static_cast<int>(memo.size()) <= v) memo.resize(v + 1);
  memo[v] = out;
  return out;
}

}  // namespace

std::vector<Tree> enumerate_trees(int max_vertices, int max_arity) {
  require(max_vertices >= 0 && max_arity >= 0, "enumerate_trees: bounds must be >= 0");
  std::vector<std::vector<Tree>> memo;
  std::vector<Tree> out;
  for (int v = 0; v <= max_vertices; ++v) {
    auto layer = exact_trees(v, max_arity, memo);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

namespace {

void relabel_rec(const Tree& t, int old_edge, Tree::Data& d, int slot,
                 std::vector<int>& old_to_new) {
  old_to_new[old_edge] = slot;
  if (!t.is_vertex(old_edge)) return;
  d.is_vertex[slot] = 1;
  std::vector<int> kids = t.inputs(old_edge);
  std::stable_sort(kids.begin(), kids.end(), [&](int x, int y) {
    return t.edge_code(x) < t.edge_code(y);
  });
  std::vector<int> slots;
  for (size_t i = 0; i < kids.size(); ++i) {
    slots.push_back(static_cast<int>(d.parent.size()));
    d.parent.push_back(slot);
    d.is_vertex.push_back(0);
  }
  for (size_t i = 0; i < kids.size(); ++i)
    relabel_rec(t, kids[i], d, slots[i], old_to_new);
}

}  // namespace

Canonical canonical_relabel(const Tree& t) {
  Tree::Data d;
  d.root = 0;
  d.parent = {-1};
  d.is_vertex = {0};
  Canonical c;
  c.old_to_new.assign(t.edge_count(), -1);
  relabel_rec(t, t.root(), d, 0, c.old_to_new);
  c.tree = Tree::from_data(d);
  return c;
}

}  // namespace dendro
