#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dendro/trees.hpp"

namespace dendro {

/// An operation of the free operad on a tree: a connected region of
/// vertices closing off the edges between `output` and `inputs`.  The empty
/// region with inputs == {output} is the identity at that colour.
struct FreeOperation {
  int output = 0;
  std::vector<int> inputs;  // sorted
  std::vector<int> region;  // sorted vertex ids; empty iff identity
  bool is_identity() const { return region.empty(); }
  bool operator==(const FreeOperation& o) const {
    return output == o.output && inputs == o.inputs;
  }
  bool operator<(const FreeOperation& o) const {
    return std::tie(output, inputs) < std::tie(o.output, o.inputs);
  }
};

/// Region closure: collect every vertex weakly above `out` and not weakly
/// above any input; the operation exists iff the dangling inputs of that
/// region are exactly `ins`.
std::optional<FreeOperation> operation_exists(const Tree& s, int out,
                                              std::vector<int> ins);
/// All operations with the given output colour, identity included, sorted.
std::vector<FreeOperation> operations_with_output(const Tree& s, int out);
std::vector<FreeOperation> all_operations(const Tree& s);

/// A map of trees given by a total edge map, valid when every domain vertex
/// lands on a free operation of the codomain.
struct OmegaMorphism {
  Tree domain;
  Tree codomain;
  std::vector<int> edge_map;

  int operator()(int edge) const { return edge_map[edge]; }
  std::vector<int> image() const;  // sorted, deduplicated
};

OmegaMorphism identity_morphism(const Tree& t);
bool validate_morphism(const OmegaMorphism& m);
OmegaMorphism compose(const OmegaMorphism& g, const OmegaMorphism& f);
bool is_mono(const OmegaMorphism& m);
bool is_iso(const OmegaMorphism& m);
std::optional<OmegaMorphism> inverse(const OmegaMorphism& m);

enum class FaceKind { Inner, Leaf, Root, CorollaEdge, Composite };

struct FaceMono {
  OmegaMorphism mono;
  FaceKind kind = FaceKind::Composite;
  std::vector<int> image;  // sorted edge subset of the codomain
};

/// Contracts the inner edge e (its two vertices merge).
FaceMono inner_face(const Tree& t, int e);
/// Removes a leaf vertex together with its input leaves.
FaceMono leaf_face(const Tree& t, int v);
/// Removes the root vertex; requires exactly one inner input, whose subtree
/// becomes the domain.
FaceMono root_face(const Tree& t);
/// The edge inclusion eta -> corolla; corollas have n+1 of these and no
/// other elementary faces.
FaceMono corolla_edge_face(const Tree& t, int e);
/// The elementary faces of t under the corolla convention.
std::vector<FaceMono> elementary_faces(const Tree& t);

/// sigma_e: the morphism from the tree with e subdivided by a unary vertex
/// back onto t.
OmegaMorphism degeneracy(const Tree& t, int e);

/// Exhaustive list of tree morphisms t -> s, deterministic order.
std::vector<OmegaMorphism> hom_set(const Tree& t, const Tree& s);

}  // namespace dendro
