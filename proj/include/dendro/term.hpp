#pragma once

#include <string>

#include "dendro/trees.hpp"

namespace dendro {

/// Tree term grammar:  T ::= "eta" | "v[" T ("," T)* "]" | "v[]"
/// Parse errors report a column (0-based).
Tree parse_tree(const std::string& term);
std::string print_tree(const Tree& t);

/// Edge addresses: "r" is the root edge; "0.1" is input 1 of the vertex on
/// input 0 of the root vertex.  Input indices follow construction order.
int resolve_edge(const Tree& t, const std::string& address);
std::string edge_address(const Tree& t, int edge);

}  // namespace dendro
