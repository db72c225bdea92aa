#include "dendro/term.hpp"

#include <algorithm>

#include "dendro/error.hpp"

namespace dendro {

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("tree term: " + msg + " at column " + std::to_string(pos));
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  Tree parse() {
    skip_ws();
    if (s.compare(pos, 3, "eta") == 0) {
      pos += 3;
      return Tree::eta();
    }
    if (pos < s.size() && s[pos] == 'v') {
      ++pos;
      expect('[');
      std::vector<Tree> kids;
      if (!peek(']')) {
        kids.push_back(parse());
        while (peek(',')) {
          ++pos;
          kids.push_back(parse());
        }
      }
      expect(']');
      return Tree::vertex_tree(kids);
    }
    fail("expected 'eta' or 'v['");
  }
};

void print_rec(const Tree& t, int edge, std::string& out) {
  if (!t.is_vertex(edge)) {
    out += "eta";
    return;
  }
  out += "v[";
  const auto& ins = t.inputs(edge);
  for (size_t i = 0; i < ins.size(); ++i) {
    if (i) out += ",";
    print_rec(t, ins[i], out);
  }
  out += "]";
}

}  // namespace

Tree parse_tree(const std::string& term) {
  Parser p{term};
  Tree t = p.parse();
  p.skip_ws();
  if (p.pos != term.size()) p.fail("trailing input");
  return t;
}

std::string print_tree(const Tree& t) {
  std::string out;
  print_rec(t, t.root(), out);
  return out;
}

int resolve_edge(const Tree& t, const std::string& address) {
  if (address == "r" || address.empty()) return t.root();
  int cur = t.root();
  size_t pos = 0;
  while (pos < address.size()) {
    size_t dot = address.find('.', pos);
    std::string part = address.substr(pos, dot == std::string::npos ? dot : dot - pos);
    require(!part.empty() && part.find_first_not_of("0123456789") == std::string::npos,
            "edge address: bad component '" + part + "'");
    int idx = std::stoi(part);
    require(t.is_vertex(cur), "edge address: no vertex above edge");
    require(idx >= 0 && idx < t.arity(cur), "edge address: input index out of range");
    cur = t.inputs(cur)[idx];
    pos = dot == std::string::npos ? address.size() : dot + 1;
  }
  return cur;
}

std::string edge_address(const Tree& t, int edge) {
  require(edge >= 0 && edge < t.edge_count(), "edge address: unknown edge");
  if (edge == t.root()) return "r";
  std::vector<int> parts;
  int cur = edge;
  while (cur != t.root()) {
    int p = t.parent(cur);
    const auto& ins = t.inputs(p);
    parts.push_back(static_cast<int>(std::find(ins.begin(), ins.end(), cur) - ins.begin()));
    cur = p;
  }
  std::reverse(parts.begin(), parts.end());
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(parts[i]);
  }
  return out;
}

}  // namespace dendro
