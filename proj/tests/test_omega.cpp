#include "dendro/omega.hpp"

#include <algorithm>
#include <set>

#include "dendro/error.hpp"
#include "dendro/term.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace dendro;
using namespace dendro::testing;

namespace {

// Independent oracle: an operation (out, ins) exists iff some vertex subset
// is connected down to out, lies weakly above it, and dangles exactly ins.
bool op_oracle(const Tree& t, int out, std::vector<int> ins) {
  std::sort(ins.begin(), ins.end());
  ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
  if (ins.size() == 1 && ins[0] == out) return true;
  const auto& vs = t.vertices();
  for (unsigned mask = 1; mask < (1u << vs.size()); ++mask) {
    std::set<int> region;
    for (size_t i = 0; i < vs.size(); ++i)
      if (mask & (1u << i)) region.insert(vs[i]);
    if (!region.count(out)) continue;
    bool ok = true;
    for (int w : region) {
      if (!t.edge_leq(out, w)) {
        ok = false;
        break;
      }
      // connectivity: every vertex strictly between w and out is present
      int cur = w;
      while (cur != out) {
        cur = t.parent(cur);
        if (cur == out) break;
        if (!region.count(cur)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) continue;
    std::vector<int> dangling;
    for (int w : region)
      for (int e : t.inputs(w))
        if (!region.count(e)) dangling.push_back(e);
    std::sort(dangling.begin(), dangling.end());
    if (dangling == ins) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("free operations on the example tree") {
  Tree t = example_tree();
  ExampleEdges E;

  // the total operation of the tree
  auto total = operation_exists(t, E.r, t.leaves());
  REQUIRE(total.has_value());
  CHECK(total->inputs == t.leaves());
  CHECK(static_cast<int>(total->region.size()) == t.vertex_count());

  // identities
  for (int e = 0; e < t.edge_count(); ++e) {
    auto id = operation_exists(t, e, {e});
    REQUIRE(id.has_value());
    CHECK(id->is_identity());
  }

  // the root vertex has a third (leaf) input, so {f,g} alone does not close
  CHECK(operation_exists(t, E.r, {E.f, E.g, E.l0}).has_value());
  CHECK_FALSE(operation_exists(t, E.r, {E.f, E.g}).has_value());
  // cutting at e forces h and the other inputs of g's vertex to dangle
  CHECK_FALSE(operation_exists(t, E.r, {E.f, E.e}).has_value());

  // stump regions give nullary operations; bare leaves do not
  auto stump_op = operation_exists(t, E.h, {});
  REQUIRE(stump_op.has_value());
  CHECK(stump_op->inputs.empty());
  CHECK_FALSE(operation_exists(t, E.l1, {}).has_value());

  SUBCASE("matches the subset-search oracle everywhere") {
    for (const Tree& s : enumerate_trees(3, 3)) {
      if (s.edge_count() > 8) continue;
      for (int out = 0; out < s.edge_count(); ++out) {
        for (unsigned mask = 0; mask < (1u << s.edge_count()); ++mask) {
          std::vector<int> ins;
          for (int e = 0; e < s.edge_count(); ++e)
            if (mask & (1u << e)) ins.push_back(e);
          if (ins.size() > 4) continue;
          CHECK(operation_exists(s, out, ins).has_value() == op_oracle(s, out, ins));
        }
      }
    }
  }
}

TEST_CASE("morphism validation") {
  Tree t = example_tree();
  CHECK(validate_morphism(identity_morphism(t)));

  // constant map of a corolla onto a leaf colour is not a morphism
  Tree c2 = Tree::corolla(2);
  OmegaMorphism bad{c2, t, std::vector<int>(c2.edge_count(), 2)};
  CHECK_FALSE(validate_morphism(bad));

  SUBCASE("all generators validate") {
    for (const Tree& s : enumerate_trees(4, 3)) {
      for (const FaceMono& f : elementary_faces(s)) CHECK(validate_morphism(f.mono));
      for (int e = 0; e < s.edge_count(); ++e)
        CHECK(validate_morphism(degeneracy(s, e)));
    }
  }
}

TEST_CASE("inner faces") {
  Tree t = example_tree();
  ExampleEdges E;
  FaceMono f = inner_face(t, E.e);
  CHECK(f.mono.domain.vertex_count() == 4);
  CHECK(f.mono.domain.edge_count() == 11);
  std::vector<int> img = f.image;
  CHECK(static_cast<int>(img.size()) == t.edge_count() - 1);
  CHECK(!std::binary_search(img.begin(), img.end(), E.e));

  // contracting the inner edge of a linear 2-vertex tree gives C1
  Tree lin2 = Tree::linear(2);
  FaceMono g = inner_face(lin2, lin2.inner_edges()[0]);
  CHECK(g.mono.domain.canonical_code() == Tree::corolla(1).canonical_code());

  CHECK_THROWS_AS(inner_face(t, E.l1), Error);
  CHECK_THROWS_AS(inner_face(t, t.root()), Error);

  SUBCASE("edge image is everything but the contracted edge") {
    for (const Tree& s : enumerate_trees(4, 3)) {
      for (int e : s.inner_edges()) {
        FaceMono m = inner_face(s, e);
        std::vector<int> expect;
        for (int x = 0; x < s.edge_count(); ++x)
          if (x != e) expect.push_back(x);
        CHECK(m.image == expect);
      }
    }
  }
}

TEST_CASE("leaf faces") {
  Tree t = example_tree();
  ExampleEdges E;
  // removing v1 turns f into a leaf
  FaceMono m1 = leaf_face(t, E.f);
  CHECK(m1.mono.domain.edge_count() == 10);
  {
    auto it = std::find(m1.mono.edge_map.begin(), m1.mono.edge_map.end(), E.f);
    REQUIRE(it != m1.mono.edge_map.end());
    int pre = static_cast<int>(it - m1.mono.edge_map.begin());
    CHECK(m1.mono.domain.is_leaf(pre));
  }
  // removing the stump turns its output edge into a leaf
  FaceMono m2 = leaf_face(t, E.h);
  CHECK(m2.mono.domain.edge_count() == 12);
  {
    auto it = std::find(m2.mono.edge_map.begin(), m2.mono.edge_map.end(), E.h);
    int pre = static_cast<int>(it - m2.mono.edge_map.begin());
    CHECK(m2.mono.domain.is_leaf(pre));
  }
  // v_r and w are not leaf vertices
  CHECK_THROWS_AS(leaf_face(t, E.r), Error);
  CHECK_THROWS_AS(leaf_face(t, E.g), Error);

  // a corolla's leaf face lands on eta
  for (int n = 0; n <= 3; ++n) {
    Tree c = Tree::corolla(n);
    FaceMono m = leaf_face(c, c.root());
    CHECK(m.mono.domain.canonical_code() == Tree::eta().canonical_code());
    CHECK(m.image == std::vector<int>{c.root()});
  }
}

TEST_CASE("root faces") {
  // the example tree has two inner inputs at the root vertex
  CHECK_THROWS_AS(root_face(example_tree()), Error);

  Tree lin2 = Tree::linear(2);
  FaceMono m = root_face(lin2);
  CHECK(m.mono.domain.canonical_code() == Tree::corolla(1).canonical_code());

  // C2 grafted on the right input of C2: the root face is the upper C2
  Tree t = parse_tree("v[eta,v[eta,eta]]");
  FaceMono m2 = root_face(t);
  CHECK(m2.mono.domain.canonical_code() == Tree::corolla(2).canonical_code());
  // the root edge and the root vertex's leaf input are dropped
  CHECK(m2.image.size() == 3);
}

TEST_CASE("corolla faces") {
  Tree c2 = Tree::corolla(2);
  FaceMono at_root = corolla_edge_face(c2, c2.root());
  CHECK(at_root.mono.domain.canonical_code() == Tree::eta().canonical_code());
  CHECK(elementary_faces(c2).size() == 3);
  CHECK(elementary_faces(Tree::corolla(0)).size() == 1);
  CHECK(elementary_faces(Tree::eta()).empty());
  CHECK_THROWS_AS(corolla_edge_face(example_tree(), 0), Error);
}

TEST_CASE("degeneracies") {
  Tree e = Tree::eta();
  OmegaMorphism s = degeneracy(e, e.root());
  CHECK(s.domain.canonical_code() == Tree::corolla(1).canonical_code());
  CHECK(s.codomain.canonical_code() == e.canonical_code());
  CHECK_FALSE(is_mono(s));

  SUBCASE("counts and the degeneracy-face identities") {
    for (const Tree& t : enumerate_trees(3, 3)) {
      for (int edge = 0; edge < t.edge_count(); ++edge) {
        OmegaMorphism sg = degeneracy(t, edge);
        CHECK(sg.domain.edge_count() == t.edge_count() + 1);
        CHECK(sg.domain.vertex_count() == t.vertex_count() + 1);
        // deleting the new unary vertex by some face recovers the identity
        const Tree& st = sg.domain;
        int found = 0;
        for (const FaceMono& fm : elementary_faces(st)) {
          if (fm.mono.domain.edge_count() != t.edge_count()) continue;
          OmegaMorphism comp = compose(sg, fm.mono);
          if (comp.edge_map == identity_morphism(t).edge_map) ++found;
        }
        CHECK(found >= 1);
      }
    }
  }
}

TEST_CASE("composition") {
  Tree t = example_tree();
  OmegaMorphism id = identity_morphism(t);
  ExampleEdges E;
  FaceMono f = inner_face(t, E.e);
  CHECK(compose(id, f.mono).edge_map == f.mono.edge_map);

  SUBCASE("inner faces commute at the image level") {
    for (const Tree& s : enumerate_trees(4, 3)) {
      auto inner = s.inner_edges();
      for (int e1 : inner) {
        for (int e2 : inner) {
          if (e1 == e2) continue;
          FaceMono a = inner_face(s, e1);
          auto it = std::find(a.mono.edge_map.begin(), a.mono.edge_map.end(), e2);
          REQUIRE(it != a.mono.edge_map.end());
          int e2_in = static_cast<int>(it - a.mono.edge_map.begin());
          OmegaMorphism left = compose(a.mono, inner_face(a.mono.domain, e2_in).mono);

          FaceMono b = inner_face(s, e2);
          auto jt = std::find(b.mono.edge_map.begin(), b.mono.edge_map.end(), e1);
          int e1_in = static_cast<int>(jt - b.mono.edge_map.begin());
          OmegaMorphism right = compose(b.mono, inner_face(b.mono.domain, e1_in).mono);

          CHECK(left.image() == right.image());
        }
      }
    }
  }

  CHECK_THROWS_AS(compose(f.mono, f.mono), Error);
}

TEST_CASE("hom sets") {
  Tree t = example_tree();
  CHECK(hom_set(Tree::eta(), t).size() == static_cast<size_t>(t.edge_count()));

  SUBCASE("brute-force oracle on small codomains") {
    for (const char* term : {"v[eta,eta]", "v[v[eta]]", "v[]"}) {
      Tree s = parse_tree(term);
      for (const Tree& dom : enumerate_trees(2, 2)) {
        if (dom.edge_count() > 4) continue;
        long long count = 0;
        std::vector<int> map(dom.edge_count(), 0);
        auto rec = [&](auto&& self, int i) -> void {
          if (i == dom.edge_count()) {
            if (validate_morphism(OmegaMorphism{dom, s, map})) ++count;
            return;
          }
          for (int v = 0; v < s.edge_count(); ++v) {
            map[i] = v;
            self(self, i + 1);
          }
        };
        rec(rec, 0);
        CHECK(static_cast<long long>(hom_set(dom, s).size()) == count);
      }
    }
  }

  SUBCASE("automorphisms sit inside hom(T,T)") {
    for (const Tree& s : enumerate_trees(3, 2)) {
      std::uint64_t isos = 0;
      for (const OmegaMorphism& m : hom_set(s, s))
        if (is_iso(m)) ++isos;
      CHECK(isos == s.automorphism_count());
    }
  }

  CHECK(hom_set(Tree::corolla(2), Tree::corolla(2)).size() == 2);
}

TEST_CASE("mono and iso predicates") {
  Tree t = example_tree();
  for (const FaceMono& f : elementary_faces(t)) {
    CHECK(is_mono(f.mono));
    CHECK_FALSE(is_iso(f.mono));
  }
  CHECK_FALSE(is_mono(degeneracy(t, 0)));
  CHECK(is_iso(identity_morphism(t)));

  SUBCASE("isomorphy agrees with code equality") {
    auto pool = enumerate_trees(3, 2);
    for (const Tree& a : pool) {
      for (const Tree& b : pool) {
        bool found = false;
        for (const OmegaMorphism& m : hom_set(a, b))
          if (is_iso(m)) found = true;
        CHECK(found == (a.canonical_code() == b.canonical_code()));
      }
    }
  }
}
