#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dendro/omega.hpp"
#include "dendro/operads.hpp"
#include "dendro/subcomplexes.hpp"
#include "dendro/trees.hpp"

namespace dendro {

/// A map of finite pointed sets <src> -> <dst>; -1 is the basepoint, other
/// values are 0-based.
struct PointedMap {
  int src = 0;
  int dst = 0;
  std::vector<int> map;

  bool operator==(const PointedMap& o) const {
    return src == o.src && dst == o.dst && map == o.map;
  }
  bool operator<(const PointedMap& o) const {
    return std::tie(src, dst, map) < std::tie(o.src, o.dst, o.map);
  }
};

PointedMap identity_pointed(int n);
/// rho_j: <n> -> <1> sending only j to the unique element.
PointedMap rho(int n, int j);
PointedMap compose(const PointedMap& g, const PointedMap& f);
std::vector<PointedMap> all_pointed_maps(int src, int dst);

/// An arrow of the forest category: one corolla per target element with
/// ascending input labels, plus one bare edge per source element that dies.
struct ForestArrow {
  int src = 0;
  int dst = 0;
  std::vector<std::vector<int>> corolla_inputs;  // per target, ascending
  std::vector<int> eta_labels;                   // ascending

  bool operator==(const ForestArrow& o) const {
    return src == o.src && dst == o.dst && corolla_inputs == o.corolla_inputs &&
           eta_labels == o.eta_labels;
  }
};

ForestArrow arrow_from_map(const PointedMap& alpha);
PointedMap map_from_arrow(const ForestArrow& f);
/// Composition by grafting the earlier arrow's corollas onto the later
/// one's labelled leaves and contracting the identified edges.
ForestArrow compose_arrows(const ForestArrow& g, const ForestArrow& f);

/// A composable chain <n_0> -> ... -> <n_k>.
struct Chain {
  std::vector<int> objects;
  std::vector<PointedMap> maps;  // maps[i]: objects[i] -> objects[i+1]

  int k() const { return static_cast<int>(maps.size()); }
  bool operator==(const Chain& o) const {
    return objects == o.objects && maps == o.maps;
  }
  bool operator<(const Chain& o) const {
    return std::tie(objects, maps) < std::tie(o.objects, o.maps);
  }
};

Chain simplicial_face(int i, const Chain& c);
Chain simplicial_degeneracy(int i, const Chain& c);

/// Chain syntax: "5>4>3>1: 1->1,2->1,...; ...; ..." with one ','-separated
/// group per map, 1-based, '*' for the basepoint.
Chain parse_chain(const std::string& text);
std::string format_chain(const Chain& c);

/// The layered forest of a chain.  Each edge corresponds to a chain
/// position (level, index): level-0 edges are the sources, level-k edges
/// the final targets, and every edge at level >= 1 carries the vertex whose
/// inputs are its preimages one level up.
struct ForestComponent {
  Tree tree;
  int death_level = 0;  // 0 = survives; j >= 1: sent to the basepoint by map j
  std::vector<std::pair<int, int>> chain_pos;  // per edge: (level, index)
};

struct ForestSimplex {
  Chain chain;
  std::vector<ForestComponent> components;
  std::vector<std::vector<std::pair<int, int>>> pos_to_edge;  // [level][idx]

  int k() const { return chain.k(); }
  bool operator==(const ForestSimplex& o) const { return chain == o.chain; }
};

ForestSimplex chain_to_forest(const Chain& c);
/// Reconstructs the chain from the layered components and their labels.
Chain forest_to_chain(const ForestSimplex& f);
bool is_uprooted(const ForestComponent& c);

/// The i-th face as a forest plus, per face component, the validated tree
/// morphism into the component of the original forest it lands in.  Inner
/// levels contract, level 0 removes leaf layers, level k removes the root
/// layer (splitting components); components may vanish.
struct FaceInclusion {
  ForestSimplex face;
  struct CompMap {
    int original_component = 0;
    OmegaMorphism mono;
  };
  std::vector<CompMap> comps;  // indexed by face component
};
FaceInclusion face_inclusion(int i, const ForestSimplex& f);

/// Like face_inclusion for the i-th degeneracy; the maps collapse the
/// subdivision vertices (they are not injective).
struct DegeneracyInclusion {
  ForestSimplex degenerate;
  struct CompMap {
    int original_component = 0;
    OmegaMorphism collapse;
  };
  std::vector<CompMap> comps;  // indexed by degenerate component
};
DegeneracyInclusion degeneracy_inclusion(int i, const ForestSimplex& f);

/// Per-component union of the face images for faces 0 and k (requires
/// k >= 2), and for all faces except j.
std::vector<Subcomplex> rl_subcomplex(const ForestSimplex& f);
std::vector<Subcomplex> horn_subcomplex(int j, const ForestSimplex& f);

/// Componentwise extension of presheaf maps to the whole components; the
/// extensions of the forest map are the tuples, so the count is the
/// product.
struct ForestExtension {
  std::vector<std::vector<PresheafMap>> per_component;
  long long total() const;
};
ForestExtension forest_extend(const ForestSimplex& f, const std::vector<Subcomplex>& subs,
                              const std::vector<PresheafMap>& maps, const Operad& p);

/// All presheaf-map tuples on per-component subcomplexes.
std::vector<std::vector<PresheafMap>> forest_maps_to_nerve(
    const std::vector<Subcomplex>& subs, const Operad& p);

}  // namespace dendro
