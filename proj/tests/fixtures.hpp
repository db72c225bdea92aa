#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "dendro/term.hpp"
#include "dendro/trees.hpp"

namespace dendro::testing {

// Five-vertex example tree used across the suite:
//   root vertex: output r, inputs {f, g, l0}
//   v1: output f, inputs {l1, l2}
//   w:  output g, inputs {e, h, l3}
//   v2: output e, inputs {l4, l5, l6}
//   u:  output h, no inputs (stump)
inline Tree example_tree() {
  return parse_tree("v[v[eta,eta],v[v[eta,eta,eta],v[],eta],eta]");
}
struct ExampleEdges {
  int r = 0, f = 1, l1 = 2, l2 = 3, g = 4, e = 5, l4 = 6, l5 = 7, l6 = 8,
      h = 9, l3 = 10, l0 = 11;
};

// Independent automorphism oracle: brute force over edge permutations that
// preserve root, parent structure and vertex flags.
inline std::uint64_t aut_oracle(const Tree& t) {
  std::vector<int> perm(t.edge_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    if (perm[t.root()] != t.root()) continue;
    bool ok = true;
    for (int e = 0; e < t.edge_count() && ok; ++e) {
      if (t.is_vertex(e) != t.is_vertex(perm[e])) ok = false;
      if (e != t.root() && ok && t.parent(perm[e]) != perm[t.parent(e)]) ok = false;
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// Independent enumeration oracle: generate planar (ordered) trees and
// deduplicate by canonical code.
inline std::vector<std::string> enumeration_oracle(int max_vertices, int max_arity) {
  std::vector<std::vector<Tree>> by_vertices(max_vertices + 1);
  by_vertices[0] = {Tree::eta()};
  for (int v = 1; v <= max_vertices; ++v) {
    for (int a = 0; a <= max_arity; ++a) {
      // ordered a-tuples of trees with vertex total v-1
      std::vector<Tree> kids;
      auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == a) {
          if (remaining == 0) by_vertices[v].push_back(Tree::vertex_tree(kids));
          return;
        }
        for (int s = 0; s <= remaining; ++s) {
          for (const Tree& t : by_vertices[s]) {
            kids.push_back(t);
            self(self, slot + 1, remaining - s);
            kids.pop_back();
          }
        }
      };
      rec(rec, 0, v - 1);
    }
  }
  std::vector<std::string> codes;
  for (const auto& layer : by_vertices)
    for (const Tree& t : layer) codes.push_back(t.canonical_code());
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

}  // namespace dendro::testing
