#include "dendro/operads.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "dendro/error.hpp"
#include "dendro/term.hpp"
#include "json.hpp"

namespace dendro {

namespace {

std::string join_ints(const std::vector<int>& v, char sep = ',') {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

std::vector<int> block_permutation(const std::vector<int>& perm,
                                   const std::vector<int>& sizes) {
  std::vector<int> offsets(sizes.size(), 0);
  for (size_t i = 1; i < sizes.size(); ++i) offsets[i] = offsets[i - 1] + sizes[i - 1];
  std::vector<int> out;
  for (int b : perm)
    for (int s = 0; s < sizes[b]; ++s) out.push_back(offsets[b] + s);
  return out;
}

int Operad::colour_id(const std::string& name) const {
  for (int c = 0; c < colour_count(); ++c)
    if (colour_name(c) == name) return c;
  throw Error("operad " + this->name() + ": unknown colour '" + name + "'");
}

// ---------------------------------------------------------------------------
// Com
// ---------------------------------------------------------------------------

namespace {

class ComOperad : public Operad {
 public:
  const std::string& name() const override {
    static const std::string n = "com";
    return n;
  }
  int colour_count() const override { return 1; }
  const std::string& colour_name(int) const override {
    static const std::string c = "*";
    return c;
  }
  Op identity(int) const override { return make(1); }
  bool is_identity(const Op& op) const override { return op.arity() == 1; }
  std::vector<Op> ops_with_output(int, int arity) const override {
    return {make(arity)};
  }
  Op compose(const Op&, const std::vector<Op>& args) const override {
    int n = 0;
    for (const Op& a : args) n += a.arity();
    return make(n);
  }
  Op act(const Op& op, const std::vector<int>& perm) const override {
    require(static_cast<int>(perm.size()) == op.arity(), "act: arity mismatch");
    return op;
  }

 private:
  static Op make(int arity) {
    Op op;
    op.key = "com:" + std::to_string(arity);
    op.output = 0;
    op.inputs.assign(arity, 0);
    return op;
  }
};

// ---------------------------------------------------------------------------
// As: operations of arity n are the n! multiplication orders
// ---------------------------------------------------------------------------

class AsOperad : public Operad {
 public:
  explicit AsOperad(int max_arity) : max_arity_(max_arity) {}

  const std::string& name() const override {
    static const std::string n = "as";
    return n;
  }
  int colour_count() const override { return 1; }
  const std::string& colour_name(int) const override {
    static const std::string c = "*";
    return c;
  }
  Op identity(int) const override { return make({0}); }
  bool is_identity(const Op& op) const override { return op.arity() == 1; }
  std::vector<Op> ops_with_output(int, int arity) const override {
    require(arity <= max_arity_, "as: arity beyond enumeration bound");
    std::vector<int> perm = identity_perm(arity);
    std::vector<Op> out;
    do {
      out.push_back(make(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    return out;
  }
  Op compose(const Op& outer, const std::vector<Op>& args) const override {
    require(static_cast<int>(args.size()) == outer.arity(), "compose: arity mismatch");
    std::vector<std::vector<int>> orders(args.size());
    for (size_t i = 0; i < args.size(); ++i) orders[i] = order_of(args[i]);
    std::vector<int> offsets(args.size(), 0);
    for (size_t i = 1; i < args.size(); ++i)
      offsets[i] = offsets[i - 1] + args[i - 1].arity();
    std::vector<int> result;
    for (int j : order_of(outer))
      for (int s : orders[j]) result.push_back(offsets[j] + s);
    return make(result);
  }
  Op act(const Op& op, const std::vector<int>& perm) const override {
    require(static_cast<int>(perm.size()) == op.arity(), "act: arity mismatch");
    // (p.s)(x) = p(x over s-inverse); multiplication order becomes
    // s-inverse composed with the old order
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    std::vector<int> result;
    for (int t : order_of(op)) result.push_back(inv[t]);
    return make(result);
  }

 private:
  int max_arity_;

  static Op make(const std::vector<int>& order) {
    Op op;
    op.key = "as:" + join_ints(order);
    op.output = 0;
    op.inputs.assign(order.size(), 0);
    return op;
  }
  static std::vector<int> order_of(const Op& op) {
    std::vector<int> out;
    const std::string& k = op.key;
    require(k.rfind("as:", 0) == 0, "as: foreign operation");
    size_t pos = 3;
    while (pos < k.size()) {
      size_t comma = k.find(',', pos);
      out.push_back(std::stoi(k.substr(pos, comma - pos)));
      pos = comma == std::string::npos ? k.size() : comma + 1;
    }
    return out;
  }
};

}  // namespace

std::shared_ptr<Operad> com_operad() { return std::make_shared<ComOperad>(); }

std::shared_ptr<Operad> associative_operad(int max_enumeration_arity) {
  return std::make_shared<AsOperad>(max_enumeration_arity);
}

// ---------------------------------------------------------------------------
// TableOperad
// ---------------------------------------------------------------------------

TableOperad::TableOperad(std::string name, std::vector<std::string> colours,
                         std::vector<TableOp> ops)
    : name_(std::move(name)), colours_(std::move(colours)), ops_(std::move(ops)) {
  for (int i = 0; i < static_cast<int>(ops_.size()); ++i) {
    require(by_name_.emplace(ops_[i].name, i).second,
            "operad " + name_ + ": duplicate operation '" + ops_[i].name + "'");
  }
}

int TableOperad::op_id(const std::string& name) const {
  auto it = by_name_.find(name);
  require(it != by_name_.end(), "operad " + name_ + ": unknown operation '" + name + "'");
  return it->second;
}

Op TableOperad::as_op(int i) const {
  Op op;
  op.key = ops_[i].name;
  op.output = ops_[i].output;
  op.inputs = ops_[i].inputs;
  return op;
}

void TableOperad::set_composition(const std::string& outer,
                                  const std::vector<std::string>& slot_args,
                                  const std::string& result) {
  std::vector<int> args;
  for (const auto& a : slot_args) args.push_back(op_id(a));
  composition_[{op_id(outer), args}] = op_id(result);
}

void TableOperad::set_symmetry(const std::string& op, const std::vector<int>& perm,
                               const std::string& result) {
  symmetry_[{op_id(op), perm}] = op_id(result);
}

Op TableOperad::identity(int colour) const {
  for (int i = 0; i < static_cast<int>(ops_.size()); ++i) {
    if (ops_[i].identity && ops_[i].output == colour) return as_op(i);
  }
  throw Error("operad " + name_ + ": no identity at colour " + colours_[colour]);
}

bool TableOperad::is_identity(const Op& op) const {
  return ops_[op_id(op.key)].identity;
}

std::vector<Op> TableOperad::ops_with_output(int colour, int arity) const {
  std::vector<Op> out;
  for (int i = 0; i < static_cast<int>(ops_.size()); ++i) {
    if (ops_[i].output == colour && static_cast<int>(ops_[i].inputs.size()) == arity)
      out.push_back(as_op(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Op TableOperad::compose(const Op& outer, const std::vector<Op>& args) const {
  require(static_cast<int>(args.size()) == outer.arity(), "compose: arity mismatch");
  std::vector<int> arg_ids;
  for (const Op& a : args) arg_ids.push_back(op_id(a.key));
  auto it = composition_.find({op_id(outer.key), arg_ids});
  if (it == composition_.end()) {
    std::string msg = "operad " + name_ + ": missing composition entry " + outer.key + "(";
    for (size_t i = 0; i < args.size(); ++i)
      msg += (i ? "," : "") + args[i].key;
    throw Error(msg + ")");
  }
  return as_op(it->second);
}

Op TableOperad::act(const Op& op, const std::vector<int>& perm) const {
  require(static_cast<int>(perm.size()) == op.arity(), "act: arity mismatch");
  if (perm == identity_perm(op.arity())) return op;
  auto it = symmetry_.find({op_id(op.key), perm});
  if (it == symmetry_.end())
    throw Error("operad " + name_ + ": missing symmetry entry for " + op.key);
  return as_op(it->second);
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

namespace {

// all tuples of operations with prescribed output colours
void for_tuples(const Operad& p, const std::vector<int>& outputs, int max_arity,
                const std::function<void(const std::vector<Op>&)>& fn) {
  std::vector<Op> tuple(outputs.size());
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == outputs.size()) {
      fn(tuple);
      return;
    }
    for (int a = 0; a <= max_arity; ++a) {
      for (const Op& q : p.ops_with_output(outputs[i], a)) {
        tuple[i] = q;
        self(self, i + 1);
      }
    }
  };
  rec(rec, 0);
}

// same, but the total arity across the tuple is capped (prunes the walk)
void for_tuples_budget(const Operad& p, const std::vector<int>& outputs, int budget,
                       const std::function<void(const std::vector<Op>&)>& fn) {
  std::vector<Op> tuple(outputs.size());
  auto rec = [&](auto&& self, size_t i, int left) -> void {
    if (i == outputs.size()) {
      fn(tuple);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      for (const Op& q : p.ops_with_output(outputs[i], a)) {
        tuple[i] = q;
        self(self, i + 1, left - a);
      }
    }
  };
  rec(rec, 0, budget);
}

ValidationReport law_report(const Operad& p, int window);

}  // namespace

ValidationReport TableOperad::validate() const {
  ValidationReport r;
  auto violate = [&](const std::string& v) { r.violations.push_back(v); };

  int max_arity = 0;
  for (const auto& op : ops_) {
    max_arity = std::max(max_arity, static_cast<int>(op.inputs.size()));
    if (op.output < 0 || op.output >= colour_count())
      violate("operation " + op.name + ": bad output colour");
    for (int c : op.inputs)
      if (c < 0 || c >= colour_count()) violate("operation " + op.name + ": bad input colour");
    if (op.identity && !(op.inputs.size() == 1 && op.inputs[0] == op.output))
      violate("operation " + op.name + ": identity flag with non-identity profile");
  }
  for (int c = 0; c < colour_count(); ++c) {
    int found = 0;
    for (const auto& op : ops_)
      if (op.identity && op.output == c) ++found;
    if (found != 1)
      violate("colour " + colours_[c] + ": expected exactly one identity operation, found " +
              std::to_string(found));
  }
  if (!r.violations.empty()) return r;  // structural errors first

  // composition totality and profile soundness
  for (int i = 0; i < op_count(); ++i) {
    const TableOp& p = ops_[i];
    for_tuples(*this, p.inputs, max_arity, [&](const std::vector<Op>& args) {
      std::vector<int> arg_ids;
      for (const Op& a : args) arg_ids.push_back(op_id(a.key));
      auto it = composition_.find({i, arg_ids});
      if (it == composition_.end()) {
        std::string t;
        for (size_t j = 0; j < args.size(); ++j) t += (j ? "," : "") + args[j].key;
        violate("missing composition entry " + p.name + "(" + t + ")");
        return;
      }
      const TableOp& res = ops_[it->second];
      std::vector<int> expect;
      for (const Op& a : args)
        expect.insert(expect.end(), a.inputs.begin(), a.inputs.end());
      if (res.output != p.output || res.inputs != expect)
        violate("composition entry " + p.name + ": result profile mismatch");
    });
  }
  // symmetry totality
  for (int i = 0; i < op_count(); ++i) {
    std::vector<int> perm = identity_perm(static_cast<int>(ops_[i].inputs.size()));
    std::sort(perm.begin(), perm.end());
    do {
      if (perm == identity_perm(static_cast<int>(perm.size()))) continue;
      if (!symmetry_.count({i, perm}))
        violate("missing symmetry entry for " + ops_[i].name + " at (" + join_ints(perm) + ")");
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (!r.violations.empty()) return r;

  ValidationReport laws = law_report(*this, max_arity);
  r.violations = laws.violations;
  return r;
}

ValidationReport validate_operad(const Operad& p, int window) {
  if (auto* table = dynamic_cast<const TableOperad*>(&p)) return table->validate();
  return law_report(p, window);
}

namespace {

ValidationReport law_report(const Operad& p, int window) {
  ValidationReport r;
  auto violate = [&](const std::string& v) { r.violations.push_back(v); };
  const int n_colours = p.colour_count();

  auto all_ops = [&](int max_arity) {
    std::vector<Op> out;
    for (int c = 0; c < n_colours; ++c)
      for (int a = 0; a <= max_arity; ++a)
        for (const Op& op : p.ops_with_output(c, a)) out.push_back(op);
    return out;
  };

  // unit laws
  for (const Op& op : all_ops(window)) {
    std::vector<Op> ids;
    for (int c : op.inputs) ids.push_back(p.identity(c));
    try {
      if (p.compose(op, ids) != op) violate("right unit law fails at " + op.key);
    } catch (const Error& e) {
      violate(e.what());
    }
    if (op.arity() >= 1) {
      try {
        Op id = p.identity(op.output);
        // gamma(id; op) = op
        if (p.compose(id, {op}) != op) violate("left unit law fails at " + op.key);
      } catch (const Error& e) {
        violate(e.what());
      }
    }
  }

  // associativity: gamma(gamma(pp; q); rr) == gamma(pp; gamma(q_i; rr_i))
  for (const Op& pp : all_ops(window)) {
    for_tuples_budget(p, pp.inputs, window, [&](const std::vector<Op>& qs) {
      std::vector<int> inner_outputs;
      for (const Op& q : qs)
        inner_outputs.insert(inner_outputs.end(), q.inputs.begin(), q.inputs.end());
      for_tuples_budget(p, inner_outputs, window, [&](const std::vector<Op>& rs) {
        try {
          Op left = p.compose(p.compose(pp, qs), rs);
          std::vector<Op> blocks;
          size_t at = 0;
          for (const Op& q : qs) {
            std::vector<Op> slice(rs.begin() + at, rs.begin() + at + q.arity());
            at += q.arity();
            blocks.push_back(p.compose(q, slice));
          }
          Op right = p.compose(pp, blocks);
          if (left != right)
            violate("associativity fails at " + pp.key + " (" + left.key + " vs " +
                    right.key + ")");
        } catch (const Error& e) {
          violate(e.what());
        }
      });
    });
  }

  // symmetric action is a right action with correct profiles
  for (const Op& op : all_ops(window)) {
    const int n = op.arity();
    if (n > 4) continue;  // action laws on a window
    std::vector<int> s = identity_perm(n);
    do {
      Op ps;
      try {
        ps = p.act(op, s);
      } catch (const Error& e) {
        violate(e.what());
        continue;
      }
      for (int i = 0; i < n; ++i)
        if (ps.inputs[i] != op.inputs[s[i]]) {
          violate("action profile mismatch at " + op.key);
          break;
        }
      std::vector<int> t = identity_perm(n);
      do {
        std::vector<int> st(n);
        for (int i = 0; i < n; ++i) st[i] = s[t[i]];
        try {
          if (p.act(ps, t) != p.act(op, st)) violate("action law fails at " + op.key);
        } catch (const Error& e) {
          violate(e.what());
        }
      } while (std::next_permutation(t.begin(), t.end()));
    } while (std::next_permutation(s.begin(), s.end()));
  }

  // equivariance: gamma(p.s; q_{s(0)},...) == gamma(p; q).blockperm(s)
  for (const Op& pp : all_ops(std::min(window, 3))) {
    const int n = pp.arity();
    for_tuples_budget(p, pp.inputs, window, [&](const std::vector<Op>& qs) {
      std::vector<int> sizes;
      for (const Op& q : qs) sizes.push_back(q.arity());
      std::vector<int> s = identity_perm(n);
      do {
        try {
          Op left_outer = p.act(pp, s);
          std::vector<Op> permuted;
          for (int i = 0; i < n; ++i) permuted.push_back(qs[s[i]]);
          Op left = p.compose(left_outer, permuted);
          Op right = p.act(p.compose(pp, qs), block_permutation(s, sizes));
          if (left != right) violate("equivariance fails at " + pp.key);
        } catch (const Error& e) {
          violate(e.what());
        }
      } while (std::next_permutation(s.begin(), s.end()));
    });
  }

  if (dynamic_cast<const TableOperad*>(&p) == nullptr)
    r.note = "rule-backed operad: laws checked for arities <= " + std::to_string(window);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// omega_as_operad
// ---------------------------------------------------------------------------

namespace {

std::string region_op_name(int out, const std::vector<int>& ordered_ins) {
  return std::to_string(out) + "<-" + join_ints(ordered_ins);
}

class OmegaTreeOperad : public Operad {
 public:
  explicit OmegaTreeOperad(Tree t)
      : tree_(std::move(t)), name_("omega(" + print_tree(tree_) + ")") {
    for (int e = 0; e < tree_.edge_count(); ++e)
      colour_names_.push_back(std::to_string(e));
  }

  const std::string& name() const override { return name_; }
  int colour_count() const override { return tree_.edge_count(); }
  const std::string& colour_name(int c) const override { return colour_names_[c]; }
  Op identity(int colour) const override { return make(colour, {colour}); }
  bool is_identity(const Op& op) const override {
    return op.inputs.size() == 1 && op.inputs[0] == op.output;
  }
  std::vector<Op> ops_with_output(int colour, int arity) const override {
    std::vector<Op> out;
    for (const FreeOperation& fo : operations_with_output(tree_, colour)) {
      if (static_cast<int>(fo.inputs.size()) != arity) continue;
      std::vector<int> order = fo.inputs;
      do {
        out.push_back(make(colour, order));
      } while (std::next_permutation(order.begin(), order.end()));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  Op compose(const Op& outer, const std::vector<Op>& args) const override {
    require(static_cast<int>(args.size()) == outer.arity(), "compose: arity mismatch");
    // regions merge; the composite profile is the concatenation of the
    // argument profiles in slot order
    std::vector<int> ins;
    for (size_t i = 0; i < args.size(); ++i) {
      require(args[i].output == outer.inputs[i], "compose: colour mismatch");
      ins.insert(ins.end(), args[i].inputs.begin(), args[i].inputs.end());
    }
    if (is_identity(outer)) return args[0];
    Op result = make(outer.output, ins);
    require(operation_exists(tree_, result.output, result.inputs).has_value(),
            "compose: result is not a free operation");
    return result;
  }
  Op act(const Op& op, const std::vector<int>& perm) const override {
    require(static_cast<int>(perm.size()) == op.arity(), "act: arity mismatch");
    std::vector<int> ins(op.inputs.size());
    for (size_t i = 0; i < perm.size(); ++i) ins[i] = op.inputs[perm[i]];
    return make(op.output, ins);
  }

 private:
  Tree tree_;
  std::string name_;
  std::vector<std::string> colour_names_;

  static Op make(int out, const std::vector<int>& ordered_ins) {
    Op op;
    op.key = region_op_name(out, ordered_ins);
    op.output = out;
    op.inputs = ordered_ins;
    return op;
  }
};

}  // namespace

std::shared_ptr<Operad> omega_as_operad(const Tree& t) {
  return std::make_shared<OmegaTreeOperad>(t);
}

std::shared_ptr<TableOperad> free_binary_operad() {
  std::vector<TableOperad::TableOp> ops = {
      {"id_a", {0}, 0, true},
      {"id_b", {1}, 1, true},
      {"g", {0, 0}, 1, false},
      {"g_swap", {0, 0}, 1, false},
  };
  auto table = std::make_shared<TableOperad>(
      "free-binary", std::vector<std::string>{"a", "b"}, ops);
  table->set_composition("id_a", {"id_a"}, "id_a");
  table->set_composition("id_b", {"id_b"}, "id_b");
  table->set_composition("id_b", {"g"}, "g");
  table->set_composition("id_b", {"g_swap"}, "g_swap");
  table->set_composition("g", {"id_a", "id_a"}, "g");
  table->set_composition("g_swap", {"id_a", "id_a"}, "g_swap");
  table->set_symmetry("g", {1, 0}, "g_swap");
  table->set_symmetry("g_swap", {1, 0}, "g");
  return table;
}

// ---------------------------------------------------------------------------
// JSON input
// ---------------------------------------------------------------------------

std::shared_ptr<TableOperad> operad_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("operad file: ") + e.what());
  }
  require(j.contains("colours") && j["colours"].is_array(), "operad file: missing colours");
  std::vector<std::string> colours = j["colours"].get<std::vector<std::string>>();
  auto colour_id = [&](const std::string& c) {
    auto it = std::find(colours.begin(), colours.end(), c);
    require(it != colours.end(), "operad file: unknown colour '" + c + "'");
    return static_cast<int>(it - colours.begin());
  };
  require(j.contains("operations") && j["operations"].is_array(),
          "operad file: missing operations");
  std::vector<TableOperad::TableOp> ops;
  for (const auto& o : j["operations"]) {
    TableOperad::TableOp top;
    top.name = o.at("name").get<std::string>();
    for (const auto& c : o.at("inputs")) top.inputs.push_back(colour_id(c));
    top.output = colour_id(o.at("output").get<std::string>());
    top.identity = o.value("identity", false);
    ops.push_back(top);
  }
  auto table = std::make_shared<TableOperad>(
      j.value("name", std::string("operad")), colours, ops);
  for (const auto& c : j.value("composition", nlohmann::json::array())) {
    table->set_composition(c.at("outer").get<std::string>(),
                           c.at("slotArgs").get<std::vector<std::string>>(),
                           c.at("result").get<std::string>());
  }
  for (const auto& s : j.value("symmetries", nlohmann::json::array())) {
    std::vector<int> perm = s.at("permutation").get<std::vector<int>>();
    for (int& v : perm) --v;  // files are 1-based
    table->set_symmetry(s.at("op").get<std::string>(), perm,
                        s.at("result").get<std::string>());
  }
  return table;
}

std::shared_ptr<TableOperad> operad_from_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "operad file: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return operad_from_json(ss.str());
}

std::shared_ptr<Operad> load_operad(const std::string& spec) {
  if (spec == "builtin:com") return com_operad();
  if (spec == "builtin:as") return associative_operad();
  if (spec == "builtin:free-binary") return free_binary_operad();
  if (spec.rfind("builtin:omega:", 0) == 0)
    return omega_as_operad(parse_tree(spec.substr(14)));
  return operad_from_file(spec);
}

// ---------------------------------------------------------------------------
// dendrices and the nerve
// ---------------------------------------------------------------------------

bool Dendrex::operator<(const Dendrex& o) const {
  if (colours != o.colours) return colours < o.colours;
  return ops < o.ops;
}

namespace {

std::vector<int> sorted_inputs(const Tree& t, int vertex) {
  std::vector<int> ins = t.inputs(vertex);
  std::sort(ins.begin(), ins.end());
  return ins;
}

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

std::vector<Dendrex> nerve_dendrices(const Operad& p, const Tree& t) {
  std::vector<Dendrex> out;
  std::vector<int> order = vertices_topdown(t);
  Dendrex x;
  x.colours.assign(t.edge_count(), -1);
  x.ops.resize(t.vertex_count());

  auto rec = [&](auto&& self, size_t idx) -> void {
    if (idx == order.size()) {
      out.push_back(x);
      return;
    }
    int w = order[idx];
    std::vector<int> ins = sorted_inputs(t, w);
    for (const Op& op : p.ops_with_output(x.colours[w], static_cast<int>(ins.size()))) {
      x.ops[t.vertex_index(w)] = op;
      for (size_t i = 0; i < ins.size(); ++i) x.colours[ins[i]] = op.inputs[i];
      self(self, idx + 1);
    }
    for (size_t i = 0; i < ins.size(); ++i) x.colours[ins[i]] = -1;
  };

  for (int c = 0; c < p.colour_count(); ++c) {
    x.colours.assign(t.edge_count(), -1);
    x.colours[t.root()] = c;
    rec(rec, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Fold {
  const Operad& p;
  const Tree& t;
  const Dendrex& x;
  const std::vector<int>& region;  // sorted vertex ids

  bool in_region(int e) const {
    return std::binary_search(region.begin(), region.end(), e);
  }

  std::pair<Op, std::vector<int>> rec(int vertex) const {
    Op op_v = x.ops[t.vertex_index(vertex)];
    std::vector<Op> args;
    std::vector<int> order;
    bool all_id = true;
    for (int f : sorted_inputs(t, vertex)) {
      if (in_region(f)) {
        auto [sub, sub_order] = rec(f);
        if (!p.is_identity(sub)) all_id = false;
        args.push_back(sub);
        order.insert(order.end(), sub_order.begin(), sub_order.end());
      } else {
        args.push_back(p.identity(x.colours[f]));
        order.push_back(f);
      }
    }
    if (all_id) return {op_v, order};
    return {p.compose(op_v, args), order};
  }
};

}  // namespace

Op evaluate_ordered(const Operad& p, const Tree& t, const Dendrex& x, int out,
                    const std::vector<int>& ordered_ins) {
  if (ordered_ins.size() == 1 && ordered_ins[0] == out)
    return p.identity(x.colours[out]);
  std::vector<int> uniq = ordered_ins;
  std::sort(uniq.begin(), uniq.end());
  require(std::adjacent_find(uniq.begin(), uniq.end()) == uniq.end(),
          "evaluate: repeated input edge");
  auto op = operation_exists(t, out, ordered_ins);
  require(op.has_value(), "evaluate: not an operation of the free operad");
  Fold fold{p, t, x, op->region};
  auto [val, order] = fold.rec(out);
  if (order == ordered_ins) return val;
  std::vector<int> perm(ordered_ins.size());
  for (size_t i = 0; i < ordered_ins.size(); ++i) {
    auto it = std::find(order.begin(), order.end(), ordered_ins[i]);
    require(it != order.end(), "evaluate: input ordering mismatch");
    perm[i] = static_cast<int>(it - order.begin());
  }
  return p.act(val, perm);
}

Op evaluate(const Operad& p, const Tree& t, const Dendrex& x, const FreeOperation& op) {
  return evaluate_ordered(p, t, x, op.output, op.inputs);
}

Dendrex restrict_dendrex(const Operad& p, const OmegaMorphism& m, const Dendrex& x) {
  const Tree& dom = m.domain;
  const Tree& cod = m.codomain;
  Dendrex y;
  y.colours.resize(dom.edge_count());
  for (int e = 0; e < dom.edge_count(); ++e) y.colours[e] = x.colours[m(e)];
  y.ops.resize(dom.vertex_count());
  for (int w : dom.vertices()) {
    std::vector<int> img;
    for (int e : sorted_inputs(dom, w)) img.push_back(m(e));
    y.ops[dom.vertex_index(w)] = evaluate_ordered(p, cod, x, m(w), img);
  }
  return y;
}

std::vector<Dendrex> underlying_nerve(const Operad& p, int k) {
  require(k >= 0, "underlying_nerve: k must be >= 0");
  return nerve_dendrices(p, Tree::linear(k));
}

}  // namespace dendro
