#pragma once

// Brute-force isomorphism of CFI gadget graphs by backtracking over
// colour-preserving vertex maps.

#include <vector>

#include "choiceless/cfi.hpp"
#include "iso_oracle.hpp"

namespace choiceless::testing {

// Colours: block index for (v,X) vertices, n + edge index for pair vertices.
// Maps preserving these respect the preorder and the pairs U(e).
inline ColoredGraph colored(const cfi::GadgetGraph& gg) {
  ColoredGraph c;
  c.adj.assign(gg.size(), std::vector<bool>(gg.size(), false));
  for (std::size_t x = 0; x < gg.size(); ++x) {
    for (std::size_t y : gg.adj[x]) c.adj[x][y] = true;
    const auto& v = gg.vertices[x];
    c.color.push_back(v.is_edge_vertex ? gg.base.n + v.base : v.base);
  }
  return c;
}

inline bool brute_isomorphic(const cfi::GadgetGraph& a, const cfi::GadgetGraph& b) {
  // Pair vertices first: once they are placed, each block vertex is forced.
  std::vector<std::size_t> visit;
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a.vertices[x].is_edge_vertex) visit.push_back(x);
  for (std::size_t x = 0; x < a.size(); ++x)
    if (!a.vertices[x].is_edge_vertex) visit.push_back(x);
  return find_isomorphism(colored(a), colored(b), visit).has_value();
}

}  // namespace choiceless::testing
