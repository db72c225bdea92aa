#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dendro {

/// A finite rooted non-planar tree.
///
/// Edges are numbered 0..edge_count()-1.  A vertex is identified with its
/// output edge, so "vertex w" always names the edge leaving w in the
/// direction of the root.  Every edge except the root enters exactly one
/// vertex; parent(e) is that vertex (as an edge id, so parent chains are
/// edge paths down to the root).  Input lists keep construction order; the
/// order carries no meaning, but it keeps edge addresses stable.
///
/// eta() is the tree with a single edge and no vertices.  A vertex with an
/// empty input list is a stump.
class Tree {
 public:
  static Tree eta();
  static Tree corolla(int arity);
  static Tree linear(int vertices);
  /// Root vertex with the given subtrees hanging off its inputs.
  static Tree vertex_tree(const std::vector<Tree>& children);

  struct Data {
    int root = 0;
    std::vector<int> parent;     // parent[e] = entered vertex, -1 for root
    std::vector<char> is_vertex; // is_vertex[w] != 0 iff w is a vertex output
  };
  /// Validates the rooted-tree invariants; throws Error on violation.
  static Tree from_data(const Data& d);

  int edge_count() const { return static_cast<int>(parent_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int root() const { return root_; }
  bool is_vertex(int edge) const { return is_vertex_[edge] != 0; }
  int parent(int edge) const { return parent_[edge]; }
  const std::vector<int>& inputs(int vertex) const;
  int arity(int vertex) const;
  bool is_stump(int vertex) const { return arity(vertex) == 0; }

  const std::vector<int>& vertices() const { return vertices_; }   // sorted
  int vertex_index(int vertex) const;

  bool is_leaf(int edge) const { return edge != root_ && !is_vertex(edge); }
  bool is_inner(int edge) const { return edge != root_ && is_vertex(edge); }
  std::vector<int> leaves() const;
  std::vector<int> inner_edges() const;
  /// Vertices maximal in the vertex order: every input is a leaf (stumps
  /// qualify vacuously).
  std::vector<int> leaf_vertices() const;

  /// e1 <= e2 iff the path from e2 to the root passes through e1.  The root
  /// is the minimum.
  bool edge_leq(int e1, int e2) const;

  /// AHU-style code, equal iff the trees are isomorphic.  Stumps encode as
  /// "()" and are distinct from leaves ("l").
  std::string canonical_code() const { return edge_code(root_); }
  std::string edge_code(int edge) const;
  std::uint64_t automorphism_count() const;

  bool operator==(const Tree& o) const {
    return root_ == o.root_ && parent_ == o.parent_ && is_vertex_ == o.is_vertex_;
  }

 private:
  int root_ = 0;
  std::vector<int> parent_;
  std::vector<char> is_vertex_;
  std::vector<std::vector<int>> inputs_;
  std::vector<int> vertices_;
  void index();
  void check() const;
};

struct EdgeClasses {
  int root;
  std::vector<int> inner;
  std::vector<int> leaves;
};
EdgeClasses classify_edges(const Tree& t);

/// Grafts scion onto a leaf edge of base (the scion root is identified with
/// the leaf).  Also accepts base = eta with leaf = its edge.  The edge maps
/// record where each original edge landed in the result.
struct Grafted {
  Tree tree;
  std::vector<int> base_edges;
  std::vector<int> scion_edges;
};
Grafted graft_tracked(const Tree& base, int leaf, const Tree& scion);
Tree graft(const Tree& base, int leaf, const Tree& scion);

/// All trees with at most max_vertices vertices and vertex arities at most
/// max_arity, one representative per isomorphism class, ordered by
/// (vertex count, canonical code).
std::vector<Tree> enumerate_trees(int max_vertices, int max_arity);

/// Rebuilds t with inputs sorted by subtree code; old_to_new is the edge
/// relabelling (an isomorphism onto the result).
struct Canonical {
  Tree tree;
  std::vector<int> old_to_new;
};
Canonical canonical_relabel(const Tree& t);

}  // namespace dendro
