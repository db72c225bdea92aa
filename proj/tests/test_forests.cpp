#include "dendro/forests.hpp"

#include <algorithm>
#include <set>

#include "dendro/error.hpp"
#include "dendro/term.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace dendro;
using namespace dendro::testing;

namespace {

// the worked 3-simplex: 5 > 4 > 3 > 1
Chain example_chain() {
  Chain c;
  c.objects = {5, 4, 3, 1};
  c.maps = {PointedMap{5, 4, {0, 0, 1, 1, 1}}, PointedMap{4, 3, {-1, 0, 1, 1}},
            PointedMap{3, 1, {-1, -1, 0}}};
  return c;
}

}  // namespace

TEST_CASE("pointed maps and arrows") {
  PointedMap id3 = identity_pointed(3);
  ForestArrow f = arrow_from_map(id3);
  CHECK(f.corolla_inputs.size() == 3);
  for (const auto& ins : f.corolla_inputs) CHECK(ins.size() == 1);
  CHECK(f.eta_labels.empty());

  // rho_j: one unary corolla and n-1 dying edges
  ForestArrow r = arrow_from_map(rho(4, 2));
  CHECK(r.corolla_inputs.size() == 1);
  CHECK(r.corolla_inputs[0] == std::vector<int>{2});
  CHECK(r.eta_labels == std::vector<int>{0, 1, 3});

  // constant to the basepoint: no corollas at all
  ForestArrow dead = arrow_from_map(PointedMap{2, 0, {-1, -1}});
  CHECK(dead.corolla_inputs.empty());
  CHECK(dead.eta_labels == std::vector<int>{0, 1});

  SUBCASE("round trip over all maps with src,dst <= 4") {
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n)
        for (const PointedMap& a : all_pointed_maps(m, n))
          CHECK(map_from_arrow(arrow_from_map(a)) == a);
  }
}

TEST_CASE("arrow composition by grafting") {
  PointedMap id2 = identity_pointed(2);
  ForestArrow f = arrow_from_map(PointedMap{3, 2, {0, 1, 0}});
  CHECK(compose_arrows(arrow_from_map(id2), f) == f);
  CHECK(compose_arrows(f, arrow_from_map(identity_pointed(3))) == f);

  ForestArrow r1 = arrow_from_map(rho(3, 0));
  CHECK(compose_arrows(r1, arrow_from_map(identity_pointed(3))) == r1);

  SUBCASE("functoriality for all composable pairs up to size 3") {
    for (int m = 0; m <= 3; ++m) {
      for (int n = 0; n <= 3; ++n) {
        for (int p = 0; p <= 3; ++p) {
          for (const PointedMap& a : all_pointed_maps(m, n)) {
            ForestArrow fa = arrow_from_map(a);
            for (const PointedMap& b : all_pointed_maps(n, p)) {
              ForestArrow fb = arrow_from_map(b);
              ForestArrow grafted = compose_arrows(fb, fa);
              CHECK(grafted == arrow_from_map(compose(b, a)));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("simplicial structure on chains") {
  Chain c = example_chain();
  REQUIRE(c.k() == 3);

  SUBCASE("faces compose adjacent maps") {
    Chain d1 = simplicial_face(1, c);
    CHECK(d1.objects == std::vector<int>{5, 3, 1});
    CHECK(d1.maps[0] == compose(c.maps[1], c.maps[0]));
    CHECK(d1.maps[1] == c.maps[2]);
    Chain d0 = simplicial_face(0, c);
    CHECK(d0.objects == std::vector<int>{4, 3, 1});
    Chain d3 = simplicial_face(3, c);
    CHECK(d3.objects == std::vector<int>{5, 4, 3});
  }

  SUBCASE("simplicial and degeneracy identities on a sweep") {
    std::vector<Chain> pool;
    // all chains with k <= 3 and objects <= 2, plus the worked example
    std::vector<Chain> frontier;
    for (int n = 0; n <= 2; ++n) {
      Chain base;
      base.objects = {n};
      frontier.push_back(base);
    }
    for (int step = 0; step < 3; ++step) {
      std::vector<Chain> next;
      for (const Chain& ch : frontier) {
        pool.push_back(ch);
        for (int n = 0; n <= 2; ++n) {
          for (const PointedMap& m : all_pointed_maps(ch.objects.back(), n)) {
            Chain longer = ch;
            longer.objects.push_back(n);
            longer.maps.push_back(m);
            next.push_back(std::move(longer));
          }
        }
      }
      frontier = std::move(next);
    }
    pool.insert(pool.end(), frontier.begin(), frontier.end());
    pool.push_back(c);

    for (const Chain& ch : pool) {
      const int k = ch.k();
      for (int i = 0; i <= k; ++i) {
        for (int j = i + 1; j <= k && k >= 2; ++j)
          CHECK(simplicial_face(i, simplicial_face(j, ch)) ==
                simplicial_face(j - 1, simplicial_face(i, ch)));
        for (int j = i; j <= k; ++j)
          CHECK(simplicial_degeneracy(j + 1, simplicial_degeneracy(i, ch)) ==
                simplicial_degeneracy(i, simplicial_degeneracy(j, ch)));
      }
      for (int j = 0; j <= k; ++j) {
        Chain sj = simplicial_degeneracy(j, ch);
        for (int i = 0; i <= k + 1; ++i) {
          if (i == j || i == j + 1) {
            CHECK(simplicial_face(i, sj) == ch);
          } else if (i < j) {
            CHECK(simplicial_face(i, sj) ==
                  simplicial_degeneracy(j - 1, simplicial_face(i, ch)));
          } else {
            CHECK(simplicial_face(i, sj) ==
                  simplicial_degeneracy(j, simplicial_face(i - 1, ch)));
          }
        }
      }
    }
  }
}

TEST_CASE("chains become layered forests") {
  ForestSimplex f = chain_to_forest(example_chain());
  REQUIRE(f.components.size() == 4);
  int uprooted = 0;
  for (const ForestComponent& comp : f.components)
    if (is_uprooted(comp)) ++uprooted;
  CHECK(uprooted == 3);

  // canonical order: by least source label, then code
  CHECK(f.components[0].tree.canonical_code() == "(ll)");      // dies at stage 2
  CHECK(f.components[0].death_level == 2);
  CHECK(f.components[1].tree.canonical_code() == "((lll))");   // dies at stage 3
  CHECK(f.components[1].death_level == 3);
  CHECK(f.components[2].tree.canonical_code() == "(()())");    // dies at stage 3
  CHECK(f.components[2].death_level == 3);
  CHECK(f.components[3].tree.canonical_code() == "(())");      // the survivor
  CHECK(f.components[3].death_level == 0);

  // edges are the chain positions
  int total_edges = 0;
  for (const ForestComponent& comp : f.components) total_edges += comp.tree.edge_count();
  CHECK(total_edges == 5 + 4 + 3 + 1);

  SUBCASE("all leaves at level zero, vertices between consecutive levels") {
    for (const ForestComponent& comp : f.components) {
      for (int e = 0; e < comp.tree.edge_count(); ++e) {
        if (comp.tree.is_leaf(e)) CHECK(comp.chain_pos[e].first == 0);
        int par = comp.tree.parent(e);
        if (par >= 0) CHECK(comp.chain_pos[par].first == comp.chain_pos[e].first + 1);
      }
    }
  }

  SUBCASE("degenerate chains subdivide") {
    Chain c;
    c.objects = {1, 1, 1};
    c.maps = {identity_pointed(1), identity_pointed(1)};
    ForestSimplex g = chain_to_forest(c);
    REQUIRE(g.components.size() == 1);
    CHECK(g.components[0].tree.canonical_code() == Tree::linear(2).canonical_code());
    CHECK_FALSE(is_uprooted(g.components[0]));
  }

  SUBCASE("round trips") {
    // k <= 2 with objects <= 3, k = 3 with objects <= 2
    auto sweep = [&](int maxk, int maxn) {
      std::vector<Chain> frontier;
      for (int n = 0; n <= maxn; ++n) {
        Chain base;
        base.objects = {n};
        frontier.push_back(base);
      }
      for (int step = 0; step < maxk; ++step) {
        std::vector<Chain> next;
        for (const Chain& ch : frontier) {
          CHECK(forest_to_chain(chain_to_forest(ch)) == ch);
          for (int n = 0; n <= maxn; ++n) {
            for (const PointedMap& m : all_pointed_maps(ch.objects.back(), n)) {
              Chain longer = ch;
              longer.objects.push_back(n);
              longer.maps.push_back(m);
              next.push_back(std::move(longer));
            }
          }
        }
        frontier = std::move(next);
      }
      for (const Chain& ch : frontier)
        CHECK(forest_to_chain(chain_to_forest(ch)) == ch);
    };
    sweep(2, 3);
    sweep(3, 2);
    CHECK(forest_to_chain(chain_to_forest(example_chain())) == example_chain());
  }
}

TEST_CASE("face inclusions of the worked example") {
  ForestSimplex f = chain_to_forest(example_chain());

  SUBCASE("face 0 removes the leaf layer") {
    FaceInclusion inc = face_inclusion(0, f);
    CHECK(inc.face.components.size() == 4);
    for (const auto& cm : inc.comps) {
      CHECK(validate_morphism(cm.mono));
      // the image misses exactly the level-0 edges of the original
      const ForestComponent& orig = f.components[cm.original_component];
      std::set<int> image(cm.mono.edge_map.begin(), cm.mono.edge_map.end());
      for (int e = 0; e < orig.tree.edge_count(); ++e) {
        bool in_img = image.count(e) > 0;
        CHECK(in_img == (orig.chain_pos[e].first != 0));
      }
    }
  }

  SUBCASE("the top face removes the root layer and can split or shrink") {
    FaceInclusion inc = face_inclusion(3, f);
    // the surviving component C1(C0) loses its root and becomes a stump
    bool found_stump = false;
    for (const auto& cm : inc.comps) {
      if (f.components[cm.original_component].death_level == 0) {
        CHECK(cm.mono.domain.canonical_code() == Tree::corolla(0).canonical_code());
        found_stump = true;
      } else {
        // uprooted components are untouched
        CHECK(cm.mono.domain.canonical_code() ==
              f.components[cm.original_component].tree.canonical_code());
      }
    }
    CHECK(found_stump);
  }

  SUBCASE("inner faces contract the layer in between") {
    FaceInclusion inc = face_inclusion(2, f);
    for (const auto& cm : inc.comps) CHECK(validate_morphism(cm.mono));
    // the component C1(C3) dying at 3 contracts its middle edge
    Chain face_chain = simplicial_face(2, example_chain());
    ForestSimplex g = chain_to_forest(face_chain);
    CHECK(g.components.size() >= 3);
  }

  SUBCASE("uprootedness is preserved by inner faces") {
    for (int i = 1; i < f.k(); ++i) {
      FaceInclusion inc = face_inclusion(i, f);
      for (const auto& cm : inc.comps) {
        const ForestComponent& orig = f.components[cm.original_component];
        const ForestComponent& mine =
            inc.face.components[static_cast<size_t>(&cm - inc.comps.data())];
        if (is_uprooted(orig)) CHECK(is_uprooted(mine));
      }
    }
  }

  SUBCASE("vanishing components") {
    Chain c;
    c.objects = {1, 0, 0};
    c.maps = {PointedMap{1, 0, {-1}}, PointedMap{0, 0, {}}};
    ForestSimplex g = chain_to_forest(c);
    REQUIRE(g.components.size() == 1);
    FaceInclusion inc = face_inclusion(0, g);
    CHECK(inc.face.components.empty());
    CHECK(inc.comps.empty());
    // other faces keep the single edge
    CHECK(face_inclusion(2, g).comps.size() == 1);
  }
}

TEST_CASE("degeneracy inclusions") {
  ForestSimplex f = chain_to_forest(example_chain());
  for (int i = 0; i <= f.k(); ++i) {
    DegeneracyInclusion inc = degeneracy_inclusion(i, f);
    CHECK(inc.degenerate.components.size() == f.components.size());
    for (const auto& cm : inc.comps) CHECK(validate_morphism(cm.collapse));
  }
}

TEST_CASE("rl and horn subcomplexes") {
  SUBCASE("a two-layer tree gets its spine") {
    Chain c;
    c.objects = {2, 1, 1};
    c.maps = {PointedMap{2, 1, {0, 0}}, identity_pointed(1)};
    ForestSimplex f = chain_to_forest(c);
    REQUIRE(f.components.size() == 1);
    std::vector<Subcomplex> rl = rl_subcomplex(f);
    Subcomplex sp = spine(f.components[0].tree);
    CHECK(is_subcomplex(rl[0], sp));
    CHECK(is_subcomplex(sp, rl[0]));
  }

  SUBCASE("the horn contains the rl subcomplex away from the ends") {
    ForestSimplex f = chain_to_forest(example_chain());
    auto rl = rl_subcomplex(f);
    for (int j = 1; j < f.k(); ++j) {
      auto horn = horn_subcomplex(j, f);
      for (size_t ci = 0; ci < rl.size(); ++ci)
        CHECK(is_subcomplex(rl[ci], horn[ci]));
    }
  }

  SUBCASE("a fully uprooted forest has full rl subcomplexes") {
    Chain c;
    c.objects = {1, 1, 0};
    c.maps = {identity_pointed(1), PointedMap{1, 0, {-1}}};
    ForestSimplex f = chain_to_forest(c);
    REQUIRE(f.components.size() == 1);
    CHECK(is_uprooted(f.components[0]));
    auto rl = rl_subcomplex(f);
    CHECK(rl[0].is_full());
  }
}

TEST_CASE("forest extension") {
  auto omc1 = omega_as_operad(Tree::corolla(1));

  SUBCASE("rl extensions are unique at k = 2") {
    Chain c;
    c.objects = {2, 1, 1};
    c.maps = {PointedMap{2, 1, {0, 0}}, identity_pointed(1)};
    ForestSimplex f = chain_to_forest(c);
    auto subs = rl_subcomplex(f);
    for (const auto& tuple : forest_maps_to_nerve(subs, *omc1)) {
      ForestExtension ext = forest_extend(f, subs, tuple, *omc1);
      CHECK(ext.total() == 1);
    }
  }

  SUBCASE("inner horn extensions are unique at k = 3") {
    Chain c;
    c.objects = {1, 1, 1, 1};
    c.maps = {identity_pointed(1), identity_pointed(1), identity_pointed(1)};
    ForestSimplex f = chain_to_forest(c);
    for (int j = 1; j < 3; ++j) {
      auto subs = horn_subcomplex(j, f);
      for (const auto& tuple : forest_maps_to_nerve(subs, *omc1)) {
        ForestExtension ext = forest_extend(f, subs, tuple, *omc1);
        CHECK(ext.total() == 1);
      }
    }
  }

  SUBCASE("an outer horn witness exists") {
    Chain c;
    c.objects = {1, 1, 1};
    c.maps = {identity_pointed(1), identity_pointed(1)};
    ForestSimplex f = chain_to_forest(c);
    bool witness = false;
    for (int j : {0, 2}) {
      auto subs = horn_subcomplex(j, f);
      for (const auto& tuple : forest_maps_to_nerve(subs, *omc1)) {
        if (forest_extend(f, subs, tuple, *omc1).total() != 1) witness = true;
      }
    }
    CHECK(witness);
  }
}

TEST_CASE("chain syntax") {
  Chain c = example_chain();
  CHECK(parse_chain(format_chain(c)) == c);
  Chain parsed = parse_chain("5>4>3>1: 1->1,2->1,3->2,4->2,5->2; 1->*,2->1,3->2,4->2; 1->*,2->*,3->1");
  CHECK(parsed == c);
  CHECK(parse_chain("2") == Chain{{2}, {}});
  CHECK_THROWS_AS(parse_chain("2>1"), Error);          // unassigned entries
  CHECK_THROWS_AS(parse_chain("2>1: 1->5,2->1"), Error);
  CHECK_THROWS_AS(parse_chain(""), Error);
}
