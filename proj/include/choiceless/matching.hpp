#pragma once

// Complete matchings in bipartite graphs without choosing among vertices:
// stable coloring, saturation, the quotient graph, and the path algorithm run
// on the canonically ordered quotient.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/structure.hpp"

namespace choiceless {

/// A = {0..na-1}, B = {0..nb-1}, R given as an adjacency matrix.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::size_t na, std::size_t nb)
      : na_(na), nb_(nb), adj_(na, std::vector<bool>(nb, false)) {}

  std::size_t size_a() const { return na_; }
  std::size_t size_b() const { return nb_; }

  bool edge(std::size_t a, std::size_t b) const { return adj_.at(a).at(b); }
  void set_edge(std::size_t a, std::size_t b, bool on = true) {
    adj_.at(a).at(b) = on;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < na_; ++a)
      for (std::size_t b = 0; b < nb_; ++b)
        if (adj_[a][b]) out.emplace_back(a, b);
    return out;
  }

  /// The same graph with A relabelled by pa and B by pb (vertex i -> p[i]).
  BipartiteGraph permuted(const std::vector<std::size_t>& pa,
                          const std::vector<std::size_t>& pb) const {
    BipartiteGraph g(na_, nb_);
    for (std::size_t a = 0; a < na_; ++a)
      for (std::size_t b = 0; b < nb_; ++b)
        if (adj_[a][b]) g.set_edge(pa[a], pb[b]);
    return g;
  }

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::size_t na_ = 0, nb_ = 0;
  std::vector<std::vector<bool>> adj_;
};

enum class Side : std::uint8_t { A, B };

struct Vertex {
  Side side;
  std::size_t index;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// A linear order on A ∪ B, listed from first to last.
using VertexOrder = std::vector<Vertex>;

/// A by index, then B by index.
inline VertexOrder default_order(const BipartiteGraph& g) {
  VertexOrder order;
  for (std::size_t a = 0; a < g.size_a(); ++a) order.push_back({Side::A, a});
  for (std::size_t b = 0; b < g.size_b(); ++b) order.push_back({Side::B, b});
  return order;
}

/// Partial one-to-one map A -> B; mate_of_a[a] is the partner or nullopt.
struct Matching {
  std::vector<std::optional<std::size_t>> mate_of_a;
  std::vector<std::optional<std::size_t>> mate_of_b;

  std::size_t size() const {
    return static_cast<std::size_t>(std::count_if(
        mate_of_a.begin(), mate_of_a.end(), [](const auto& m) { return m; }));
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < mate_of_a.size(); ++a)
      if (mate_of_a[a]) out.emplace_back(a, *mate_of_a[a]);
    return out;
  }
};

struct PathResult {
  bool complete = false;
  /// The final matching; complete when `complete` is true.
  Matching matching;
  /// On failure, A-vertices reachable from unmatched ones; |N(X)| < |X|.
  std::vector<std::size_t> violator;
  std::size_t augmentations = 0;
  /// Matching size after each augmentation.
  std::vector<std::size_t> size_history;
};

inline std::vector<std::size_t> neighbors(const BipartiteGraph& g,
                                          const std::vector<std::size_t>& xs) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < g.size_b(); ++b)
    for (std::size_t a : xs)
      if (g.edge(a, b)) {
        out.push_back(b);
        break;
      }
  return out;
}

/// Augmenting-path search. Vertices are tried in the given order: free
/// A-vertices as starting points, and B-neighbours when extending a path.
inline PathResult path_algorithm(const BipartiteGraph& g,
                                 const VertexOrder& order) {
  std::vector<std::size_t> a_seq, b_seq;
  for (const Vertex& v : order) (v.side == Side::A ? a_seq : b_seq).push_back(v.index);
  if (a_seq.size() != g.size_a() || b_seq.size() != g.size_b())
    throw Error("vertex order does not cover A and B");

  PathResult res;
  Matching& m = res.matching;
  m.mate_of_a.assign(g.size_a(), std::nullopt);
  m.mate_of_b.assign(g.size_b(), std::nullopt);

  std::vector<bool> seen_a, seen_b;
  // Depth-first search for a path from `a` to a free B-vertex; augments on
  // success.
  auto dfs = [&](auto&& self, std::size_t a) -> bool {
    seen_a[a] = true;
    for (std::size_t b : b_seq) {
      if (!g.edge(a, b) || seen_b[b] || m.mate_of_a[a] == b) continue;
      seen_b[b] = true;
      if (!m.mate_of_b[b] || self(self, *m.mate_of_b[b])) {
        m.mate_of_a[a] = b;
        m.mate_of_b[b] = a;
        return true;
      }
    }
    return false;
  };

  while (true) {
    seen_a.assign(g.size_a(), false);
    seen_b.assign(g.size_b(), false);
    bool augmented = false;
    bool any_free = false;
    for (std::size_t a : a_seq) {
      if (m.mate_of_a[a]) continue;
      any_free = true;
      if (seen_a[a]) continue;
      if (dfs(dfs, a)) {
        augmented = true;
        break;
      }
    }
    if (!any_free) {
      res.complete = true;
      return res;
    }
    if (!augmented) {
      for (std::size_t a = 0; a < g.size_a(); ++a)
        if (seen_a[a]) res.violator.push_back(a);
      return res;
    }
    ++res.augmentations;
    res.size_history.push_back(m.size());
  }
}

inline PathResult path_algorithm(const BipartiteGraph& g) {
  return path_algorithm(g, default_order(g));
}

inline constexpr std::size_t kHallOracleMaxA = 20;

/// Checks Hall's condition over all subsets of A.
inline bool hall_oracle(const BipartiteGraph& g, bool force = false) {
  const std::size_t na = g.size_a(), nb = g.size_b();
  if (na > kHallOracleMaxA && !force)
    throw GuardError("|A| <= " + std::to_string(kHallOracleMaxA),
                     "hall_oracle enumerates all subsets of A");
  const std::size_t words = (nb + 63) / 64;
  std::vector<std::vector<std::uint64_t>> nbr(na,
                                              std::vector<std::uint64_t>(words));
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      if (g.edge(a, b)) nbr[a][b / 64] |= std::uint64_t{1} << (b % 64);

  // Depth-first over include/exclude decisions, carrying the neighbour union.
  std::vector<std::vector<std::uint64_t>> stack(na + 1,
                                                std::vector<std::uint64_t>(words));
  auto rec = [&](auto&& self, std::size_t a, std::size_t chosen) -> bool {
    if (a == na) {
      std::size_t cnt = 0;
      for (auto w : stack[a]) cnt += static_cast<std::size_t>(__builtin_popcountll(w));
      return cnt >= chosen;
    }
    stack[a + 1] = stack[a];
    if (!self(self, a + 1, chosen)) return false;
    for (std::size_t w = 0; w < words; ++w) stack[a + 1][w] = stack[a][w] | nbr[a][w];
    return self(self, a + 1, chosen + 1);
  };
  return rec(rec, 0, 0);
}

/// Ordered partitions of A and B.
struct StableColoring {
  std::vector<std::vector<std::size_t>> a_blocks;
  std::vector<std::vector<std::size_t>> b_blocks;
  std::size_t rounds = 0;

  friend bool operator==(const StableColoring&, const StableColoring&) = default;
};

namespace detail {

// Splits each block by the signature vectors of its members; sub-blocks
// appear in lexicographic order of their vectors, in place of the parent.
inline std::vector<std::vector<std::size_t>> refine_blocks(
    const std::vector<std::vector<std::size_t>>& blocks,
    const std::vector<std::vector<std::size_t>>& signature) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& block : blocks) {
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> split;
    for (std::size_t v : block) split[signature[v]].push_back(v);
    for (auto& [sig, members] : split) out.push_back(std::move(members));
  }
  return out;
}

}  // namespace detail

/// Simultaneous refinement of both sides by edge counts into the current
/// opposite blocks, until no block splits.
inline StableColoring stable_coloring(const BipartiteGraph& g) {
  StableColoring c;
  std::vector<std::size_t> all_a(g.size_a()), all_b(g.size_b());
  std::iota(all_a.begin(), all_a.end(), 0);
  std::iota(all_b.begin(), all_b.end(), 0);
  if (!all_a.empty()) c.a_blocks.push_back(all_a);
  if (!all_b.empty()) c.b_blocks.push_back(all_b);

  while (true) {
    std::vector<std::vector<std::size_t>> sig_a(g.size_a()), sig_b(g.size_b());
    for (std::size_t a = 0; a < g.size_a(); ++a)
      for (const auto& block : c.b_blocks) {
        std::size_t k = 0;
        for (std::size_t b : block) k += g.edge(a, b);
        sig_a[a].push_back(k);
      }
    for (std::size_t b = 0; b < g.size_b(); ++b)
      for (const auto& block : c.a_blocks) {
        std::size_t k = 0;
        for (std::size_t a : block) k += g.edge(a, b);
        sig_b[b].push_back(k);
      }
    auto next_a = detail::refine_blocks(c.a_blocks, sig_a);
    auto next_b = detail::refine_blocks(c.b_blocks, sig_b);
    if (next_a.size() == c.a_blocks.size() && next_b.size() == c.b_blocks.size())
      return c;
    c.a_blocks = std::move(next_a);
    c.b_blocks = std::move(next_b);
    ++c.rounds;
  }
}

/// Checks the uniform edge-count property of a coloring.
inline bool is_stable(const BipartiteGraph& g, const StableColoring& c) {
  for (const auto& ab : c.a_blocks)
    for (const auto& bb : c.b_blocks) {
      auto count_a = [&](std::size_t a) {
        std::size_t k = 0;
        for (std::size_t b : bb) k += g.edge(a, b);
        return k;
      };
      auto count_b = [&](std::size_t b) {
        std::size_t k = 0;
        for (std::size_t a : ab) k += g.edge(a, b);
        return k;
      };
      for (std::size_t a : ab)
        if (count_a(a) != count_a(ab.front())) return false;
      for (std::size_t b : bb)
        if (count_b(b) != count_b(bb.front())) return false;
    }
  return true;
}

/// R⁺: every block product A_i × B_j that meets R, in full.
inline BipartiteGraph saturate(const BipartiteGraph& g, const StableColoring& c) {
  BipartiteGraph out(g.size_a(), g.size_b());
  for (const auto& ab : c.a_blocks)
    for (const auto& bb : c.b_blocks) {
      bool meets = false;
      for (std::size_t a : ab)
        for (std::size_t b : bb) meets = meets || g.edge(a, b);
      if (!meets) continue;
      for (std::size_t a : ab)
        for (std::size_t b : bb) out.set_edge(a, b);
    }
  return out;
}

/// Vertices (0,i,r) and (1,j,s); adjacency depends only on the block pair.
struct QuotientGraph {
  std::vector<std::size_t> a_sizes;
  std::vector<std::size_t> b_sizes;
  std::vector<std::vector<bool>> block_edge;

  /// The quotient as a bipartite graph whose A (resp. B) vertices are the
  /// triples in lexicographic order.
  BipartiteGraph graph() const {
    std::vector<std::size_t> block_of_a, block_of_b;
    for (std::size_t i = 0; i < a_sizes.size(); ++i)
      block_of_a.insert(block_of_a.end(), a_sizes[i], i);
    for (std::size_t j = 0; j < b_sizes.size(); ++j)
      block_of_b.insert(block_of_b.end(), b_sizes[j], j);
    BipartiteGraph g(block_of_a.size(), block_of_b.size());
    for (std::size_t a = 0; a < block_of_a.size(); ++a)
      for (std::size_t b = 0; b < block_of_b.size(); ++b)
        if (block_edge[block_of_a[a]][block_of_b[b]]) g.set_edge(a, b);
    return g;
  }

  friend bool operator==(const QuotientGraph&, const QuotientGraph&) = default;
};

inline QuotientGraph quotient(const BipartiteGraph& g, const StableColoring& c) {
  QuotientGraph q;
  for (const auto& ab : c.a_blocks) q.a_sizes.push_back(ab.size());
  for (const auto& bb : c.b_blocks) q.b_sizes.push_back(bb.size());
  q.block_edge.assign(c.a_blocks.size(),
                      std::vector<bool>(c.b_blocks.size(), false));
  for (std::size_t i = 0; i < c.a_blocks.size(); ++i)
    for (std::size_t j = 0; j < c.b_blocks.size(); ++j)
      for (std::size_t a : c.a_blocks[i])
        for (std::size_t b : c.b_blocks[j])
          if (g.edge(a, b)) q.block_edge[i][j] = true;
  return q;
}

inline bool decide_complete_matching(const BipartiteGraph& g) {
  StableColoring c = stable_coloring(g);
  BipartiteGraph q = quotient(g, c).graph();
  // Triples (0,..) precede (1,..), so the lexicographic order is A then B.
  return path_algorithm(q, default_order(q)).complete;
}

/// |A| - s for the least s such that adding s new B-vertices joined to all of
/// A admits a complete matching.
inline std::size_t max_matching_size(const BipartiteGraph& g) {
  for (std::size_t s = 0;; ++s) {
    BipartiteGraph padded(g.size_a(), g.size_b() + s);
    for (auto [a, b] : g.edges()) padded.set_edge(a, b);
    for (std::size_t a = 0; a < g.size_a(); ++a)
      for (std::size_t k = 0; k < s; ++k) padded.set_edge(a, g.size_b() + k);
    if (decide_complete_matching(padded)) return g.size_a() - s;
  }
}

inline BipartiteGraph random_bipartite(std::size_t na, std::size_t nb,
                                       double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  BipartiteGraph g(na, nb);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      if (coin(rng)) g.set_edge(a, b);
  return g;
}

// ---------------------------------------------------------------------------
// Encoding as an input structure with unary InA, InB and binary R.

inline InputStructure to_structure(const BipartiteGraph& g) {
  InputStructure s;
  for (std::size_t a = 0; a < g.size_a(); ++a) s.add_atom("a" + std::to_string(a + 1));
  for (std::size_t b = 0; b < g.size_b(); ++b) s.add_atom("b" + std::to_string(b + 1));
  s.relation("InA", 1);
  s.relation("InB", 1);
  s.relation("R", 2);
  auto na = static_cast<std::uint32_t>(g.size_a());
  for (std::uint32_t a = 0; a < na; ++a) s.add_tuple("InA", {a});
  for (std::uint32_t b = 0; b < g.size_b(); ++b) s.add_tuple("InB", {na + b});
  for (auto [a, b] : g.edges())
    s.add_tuple("R", {static_cast<std::uint32_t>(a), na + static_cast<std::uint32_t>(b)});
  return s;
}

/// Inverse of to_structure up to renaming; throws ParseError when InA/InB do
/// not partition the atoms or R leaves A × B.
inline BipartiteGraph bipartite_from_structure(const InputStructure& s) {
  const auto* in_a = s.find_relation("InA");
  const auto* in_b = s.find_relation("InB");
  const auto* r = s.find_relation("R");
  if (!in_a || !in_b || !r || in_a->arity != 1 || in_b->arity != 1 ||
      r->arity != 2)
    throw ParseError("bipartite structure needs InA/1, InB/1 and R/2");
  std::vector<std::optional<std::size_t>> index(s.size());
  std::vector<Side> side(s.size());
  std::size_t na = 0, nb = 0;
  for (std::uint32_t x = 0; x < s.size(); ++x) {
    bool a = in_a->tuples.count({x}) > 0, b = in_b->tuples.count({x}) > 0;
    if (a == b)
      throw ParseError("atom '" + s.atom_name(x) + "' must lie in exactly one of InA, InB");
    side[x] = a ? Side::A : Side::B;
    index[x] = a ? na++ : nb++;
  }
  BipartiteGraph g(na, nb);
  for (const auto& t : r->tuples) {
    if (side[t[0]] != Side::A || side[t[1]] != Side::B)
      throw ParseError("R must relate InA atoms to InB atoms");
    g.set_edge(*index[t[0]], *index[t[1]]);
  }
  return g;
}

}  // namespace choiceless
