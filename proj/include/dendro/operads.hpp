#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dendro/omega.hpp"
#include "dendro/trees.hpp"

namespace dendro {

/// An operation of a coloured operad.  The key is canonical within its
/// operad, so operations compare by key; inputs/output are colour ids.
struct Op {
  std::string key;
  int output = 0;
  std::vector<int> inputs;

  int arity() const { return static_cast<int>(inputs.size()); }
  bool operator==(const Op& o) const { return key == o.key; }
  bool operator!=(const Op& o) const { return key != o.key; }
  bool operator<(const Op& o) const { return key < o.key; }
};

/// result profile: blocks of sizes[i] reordered so block perm[b] comes b-th
std::vector<int> block_permutation(const std::vector<int>& perm,
                                   const std::vector<int>& sizes);

/// A coloured operad presented through finite per-profile operation
/// enumeration.  compose is operadic composition gamma(outer; args) and act
/// is the right symmetric action: act(p, s).profile[i] = p.profile[s[i]].
class Operad {
 public:
  virtual ~Operad() = default;
  virtual const std::string& name() const = 0;
  virtual int colour_count() const = 0;
  virtual const std::string& colour_name(int c) const = 0;
  virtual Op identity(int colour) const = 0;
  virtual bool is_identity(const Op& op) const = 0;
  /// All operations with the given output colour and arity, sorted by key.
  virtual std::vector<Op> ops_with_output(int colour, int arity) const = 0;
  virtual Op compose(const Op& outer, const std::vector<Op>& args) const = 0;
  virtual Op act(const Op& op, const std::vector<int>& perm) const = 0;

  int colour_id(const std::string& name) const;
};

/// The terminal operad: one colour, one operation per arity.
std::shared_ptr<Operad> com_operad();

/// The associative operad, As(n) = the n! orderings of n inputs.
/// Composition and the symmetric action are computed exactly at any arity;
/// enumeration is guarded by max_enumeration_arity.
std::shared_ptr<Operad> associative_operad(int max_enumeration_arity = 9);

struct ValidationReport {
  std::vector<std::string> violations;
  std::string note;
  bool ok() const { return violations.empty(); }
};

/// Explicit finite tables: the file-format operad.  Composition and
/// symmetry lookups throw on missing entries; validate_operad reports them.
class TableOperad : public Operad {
 public:
  struct TableOp {
    std::string name;
    std::vector<int> inputs;
    int output = 0;
    bool identity = false;
  };

  TableOperad(std::string name, std::vector<std::string> colours,
              std::vector<TableOp> ops);

  void set_composition(const std::string& outer, const std::vector<std::string>& slot_args,
                       const std::string& result);
  void set_symmetry(const std::string& op, const std::vector<int>& perm,
                    const std::string& result);

  const std::string& name() const override { return name_; }
  int colour_count() const override { return static_cast<int>(colours_.size()); }
  const std::string& colour_name(int c) const override { return colours_[c]; }
  Op identity(int colour) const override;
  bool is_identity(const Op& op) const override;
  std::vector<Op> ops_with_output(int colour, int arity) const override;
  Op compose(const Op& outer, const std::vector<Op>& args) const override;
  Op act(const Op& op, const std::vector<int>& perm) const override;

  ValidationReport validate() const;

  int op_count() const { return static_cast<int>(ops_.size()); }
  const TableOp& op(int i) const { return ops_[i]; }
  int op_id(const std::string& name) const;
  Op as_op(int i) const;

 private:
  std::string name_;
  std::vector<std::string> colours_;
  std::vector<TableOp> ops_;
  std::map<std::string, int> by_name_;
  std::map<std::pair<int, std::vector<int>>, int> composition_;
  std::map<std::pair<int, std::vector<int>>, int> symmetry_;
};

/// Axiom check; exhaustive for table operads, windowed for rule-backed
/// ones (arities up to `window`).
ValidationReport validate_operad(const Operad& p, int window = 3);

/// The free operad on a tree: colours are the edges of t and an operation
/// is a region with an ordering of its input set; composition is region
/// union.  Rule-backed, since the ordering count grows factorially.
std::shared_ptr<Operad> omega_as_operad(const Tree& t);

/// Free symmetric operad on one binary generator (a,a) -> b.
std::shared_ptr<TableOperad> free_binary_operad();

/// Operad file schema:
///   {"colours": [...],
///    "operations": [{"name","inputs","output","identity"?}],
///    "composition": [{"outer","slotArgs","result"}],
///    "symmetries": [{"op","permutation","result"}]}
/// Permutations are 1-based in files.
std::shared_ptr<TableOperad> operad_from_json(const std::string& text);
std::shared_ptr<TableOperad> operad_from_file(const std::string& path);

/// Resolves "builtin:com", "builtin:as", "builtin:free-binary",
/// "builtin:omega:<term>", or a path to a JSON file.
std::shared_ptr<Operad> load_operad(const std::string& spec);

/// An element of the nerve of P over a tree: an edge colouring plus an
/// operation per vertex whose profile matches the sorted input list.  A
/// dendrex is always relative to an explicitly supplied tree.
struct Dendrex {
  std::vector<int> colours;
  std::vector<Op> ops;  // indexed by Tree::vertex_index

  bool operator==(const Dendrex& o) const {
    return colours == o.colours && ops == o.ops;
  }
  bool operator<(const Dendrex& o) const;
};

std::vector<Dendrex> nerve_dendrices(const Operad& p, const Tree& t);

/// Folds composition over the region of op; the result's profile follows
/// op's sorted input list.
Op evaluate(const Operad& p, const Tree& t, const Dendrex& x, const FreeOperation& op);
/// Same, but the profile follows the given input ordering.
Op evaluate_ordered(const Operad& p, const Tree& t, const Dendrex& x, int out,
                    const std::vector<int>& ordered_ins);

/// Presheaf restriction along a validated tree morphism.
Dendrex restrict_dendrex(const Operad& p, const OmegaMorphism& m, const Dendrex& x);

/// k-simplices of the underlying-category nerve (dendrices over the linear
/// tree with k vertices).
std::vector<Dendrex> underlying_nerve(const Operad& p, int k);

}  // namespace dendro
