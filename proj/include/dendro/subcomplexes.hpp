#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dendro/omega.hpp"
#include "dendro/operads.hpp"
#include "dendro/trees.hpp"

namespace dendro {

/// A union of face images inside a representable tree.
///
/// A face composite is NOT determined by its edge image alone once stumps
/// are around (the stump corolla and the bare edge under it have the same
/// image, and removing a stump drops no edges), so cells are keyed by the
/// edge image together with the vertex-operation images.  The cell set is
/// closed under precomposition with elementary faces; each cell stores a
/// canonical representative mono.
class Subcomplex {
 public:
  /// key[0] = sorted edge image; key[i>0] = {output, inputs...} of the
  /// vertex operations hit, sorted.
  using Key = std::vector<std::vector<int>>;

  explicit Subcomplex(Tree ambient) : ambient_(std::move(ambient)) {}
  static Subcomplex closure(const Tree& ambient, const std::vector<FaceMono>& generators);
  static Subcomplex full(const Tree& ambient);

  const Tree& ambient() const { return ambient_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  bool empty() const { return cells_.empty(); }
  bool has_cell(const Key& k) const { return cells_.count(k) != 0; }
  const OmegaMorphism& cell(const Key& k) const;
  const std::map<Key, OmegaMorphism>& cells() const { return cells_; }
  std::vector<Key> maximal_cells() const;
  bool is_full() const;

 private:
  Tree ambient_;
  std::map<Key, OmegaMorphism> cells_;
};

/// Subobject key of a mono (edge image plus vertex-operation images).
Subcomplex::Key key_of(const OmegaMorphism& mono);
/// Key of the mono part of an arbitrary validated map (identity operations
/// are collapsed away by the epi part).
Subcomplex::Key map_cell_key(const OmegaMorphism& m);

/// Factor sub through `through`; nullopt when the image is not contained or
/// the factored map is not a morphism.
std::optional<OmegaMorphism> try_factor(const OmegaMorphism& sub,
                                        const OmegaMorphism& through);
/// Throwing variant.
OmegaMorphism factor_through(const OmegaMorphism& sub, const OmegaMorphism& through);

/// Every composite-of-elementary-faces mono into t (identity included),
/// deduplicated by subobject key.
std::map<Subcomplex::Key, OmegaMorphism> all_face_monos(const Tree& t);

Subcomplex boundary(const Tree& t);
Subcomplex inner_horn(const Tree& t, int e);
Subcomplex leaf_horn(const Tree& t, int v);
Subcomplex root_horn(const Tree& t);
/// Union of the vertex corolla cells (the identity cell for eta).
Subcomplex spine(const Tree& t);

Subcomplex union_of(const Subcomplex& a, const Subcomplex& b);
Subcomplex intersect(const Subcomplex& a, const Subcomplex& b);
bool is_subcomplex(const Subcomplex& a, const Subcomplex& b);

/// A map from a subcomplex into the nerve of an operad, stored as one
/// dendrex per maximal cell; pairwise agreement on intersections makes it a
/// well-defined presheaf map.
struct PresheafMap {
  std::map<Subcomplex::Key, Dendrex> values;
  bool operator==(const PresheafMap& o) const { return values == o.values; }
  bool operator<(const PresheafMap& o) const { return values < o.values; }
};

/// Checks pairwise compatibility of the stored values.
bool compatible_map(const Subcomplex& a, const Operad& p, const PresheafMap& f);

/// Value of f on an arbitrary cell of its source (restriction from a
/// containing valued cell).
Dendrex map_value_on(const Subcomplex& a, const Operad& p, const PresheafMap& f,
                     const Subcomplex::Key& key);

/// Restriction of a map on b to the subcomplex a (a must be contained in b).
PresheafMap restrict_map(const Subcomplex& b, const Operad& p, const PresheafMap& g,
                         const Subcomplex& a);

/// All maps a -> nerve(p), deterministic order.
std::vector<PresheafMap> maps_to_nerve(const Subcomplex& a, const Operad& p);

/// All extensions of f (a map on a) to b, where a is a subcomplex of b.
/// Backtracks over dendrex assignments on the missing maximal cells with
/// early pruning on face compatibility.
std::vector<PresheafMap> extend(const Subcomplex& a, const Subcomplex& b,
                                const PresheafMap& f, const Operad& p);

}  // namespace dendro
