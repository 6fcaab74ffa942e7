#pragma once

// Cai-Fürer-Immerman gadget graphs over a base graph G: the vertices
// (v, X) for X ⊆ E_v and the edge pairs (e, +), (e, -), twisted by a vertex
// set T, plus padding, the choice-enumerating distinguisher and the ordered
// recognizer/classifier.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/structure.hpp"

namespace choiceless::cfi {

/// Connected simple graph; vertex order is the index order.
struct BaseGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // u < v

  /// Edge indices incident to v, increasing.
  std::vector<std::size_t> incident(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].first == v || edges[e].second == v) out.push_back(e);
    return out;
  }

  bool connected() const {
    if (n == 0) return true;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (auto [a, b] : edges) {
        std::size_t w = a == v ? b : b == v ? a : n;
        if (w < n && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
  }

  void validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : edges) {
      if (a >= n || b >= n) throw Error("edge endpoint outside the base graph");
      if (a == b) throw Error("base graph has a loop");
      if (!seen.insert(std::minmax(a, b)).second)
        throw Error("base graph has parallel edges");
    }
    if (!connected()) throw Error("base graph is not connected");
  }
};

inline BaseGraph complete_graph(std::size_t n) {
  BaseGraph g;
  g.n = n;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  return g;
}

/// Vertices with odd incidence in the edge subset S.
inline std::set<std::size_t> odd_boundary(const BaseGraph& g,
                                          const std::set<std::size_t>& s) {
  std::vector<int> deg(g.n, 0);
  for (std::size_t e : s) {
    ++deg[g.edges.at(e).first];
    ++deg[g.edges.at(e).second];
  }
  std::set<std::size_t> out;
  for (std::size_t v = 0; v < g.n; ++v)
    if (deg[v] % 2) out.insert(v);
  return out;
}

struct GadgetVertex {
  bool is_edge_vertex = false;
  /// Base vertex v for (v, X); edge index e for (e, ±).
  std::size_t base = 0;
  /// X as a bitmask over the positions of G.incident(v).
  std::uint32_t mask = 0;
  bool plus = false;

  friend bool operator==(const GadgetVertex&, const GadgetVertex&) = default;
};

/// G^T with its pre-order: (v,X) ⪯ (v',X') iff v ≤ v'; edge vertices lie
/// outside the field of ⪯.
struct GadgetGraph {
  BaseGraph base;
  std::set<std::size_t> twist;
  std::vector<GadgetVertex> vertices;
  std::vector<std::vector<std::size_t>> adj;  // sorted

  std::size_t size() const { return vertices.size(); }

  bool adjacent(std::size_t x, std::size_t y) const {
    return std::binary_search(adj[x].begin(), adj[x].end(), y);
  }

  std::optional<std::size_t> find_block_vertex(std::size_t v,
                                               std::uint32_t mask) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (!vertices[i].is_edge_vertex && vertices[i].base == v &&
          vertices[i].mask == mask)
        return i;
    return std::nullopt;
  }

  std::size_t find_edge_vertex(std::size_t e, bool plus) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].is_edge_vertex && vertices[i].base == e &&
          vertices[i].plus == plus)
        return i;
    throw Error("no such edge vertex");
  }
};

/// The induced subgraph of G* keeping (v,X) iff |X| is odd exactly when v ∈ T.
inline GadgetGraph build_twisted(const BaseGraph& g,
                                 const std::set<std::size_t>& twist) {
  g.validate();
  for (std::size_t v : twist)
    if (v >= g.n) throw Error("twist vertex outside the base graph");
  GadgetGraph out;
  out.base = g;
  out.twist = twist;
  std::vector<std::vector<std::size_t>> inc(g.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    inc[v] = g.incident(v);
    if (inc[v].size() > 31) throw Error("base vertex degree too large");
    bool odd_wanted = twist.count(v) > 0;
    for (std::uint32_t x = 0; x < (1u << inc[v].size()); ++x)
      if ((__builtin_popcount(x) % 2 == 1) == odd_wanted)
        out.vertices.push_back(GadgetVertex{false, v, x, false});
  }
  std::size_t first_edge_vertex = out.vertices.size();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    out.vertices.push_back(GadgetVertex{true, e, 0, true});
    out.vertices.push_back(GadgetVertex{true, e, 0, false});
  }
  out.adj.assign(out.vertices.size(), {});
  for (std::size_t i = 0; i < first_edge_vertex; ++i) {
    const GadgetVertex& x = out.vertices[i];
    const auto& edges_at = inc[x.base];
    for (std::size_t k = 0; k < edges_at.size(); ++k) {
      bool in_x = (x.mask >> k) & 1u;
      std::size_t j = first_edge_vertex + 2 * edges_at[k] + (in_x ? 0 : 1);
      out.adj[i].push_back(j);
      out.adj[j].push_back(i);
    }
  }
  for (auto& a : out.adj) std::sort(a.begin(), a.end());
  return out;
}

/// The map α_S: swaps (e,+)/(e,-) for e ∈ S and sends (v,X) to
/// (v, X △ (S ∩ E_v)), as vertex indices of build_twisted(G, T △ od S).
inline std::vector<std::size_t> automorphism_from_edges(
    const GadgetGraph& from, const GadgetGraph& to,
    const std::set<std::size_t>& s) {
  const BaseGraph& g = from.base;
  std::vector<std::size_t> map(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    const GadgetVertex& x = from.vertices[i];
    if (x.is_edge_vertex) {
      bool plus = s.count(x.base) ? !x.plus : x.plus;
      map[i] = to.find_edge_vertex(x.base, plus);
    } else {
      auto inc = g.incident(x.base);
      std::uint32_t flip = 0;
      for (std::size_t k = 0; k < inc.size(); ++k)
        if (s.count(inc[k])) flip |= 1u << k;
      auto j = to.find_block_vertex(x.base, x.mask ^ flip);
      if (!j) throw Error("target graph lacks the image vertex");
      map[i] = *j;
    }
  }
  return map;
}

inline std::set<std::size_t> symmetric_difference(const std::set<std::size_t>& a,
                                                  const std::set<std::size_t>& b) {
  std::set<std::size_t> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Unlabelled structures: a graph plus a binary pre-order relation.

struct CfiStructure {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> adj;  // sorted
  std::set<std::pair<std::size_t, std::size_t>> pre;  // (x, y) means x ⪯ y

  /// Vertex i becomes perm[i].
  CfiStructure permuted(const std::vector<std::size_t>& perm) const {
    CfiStructure out;
    out.n = n;
    out.adj.assign(n, {});
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y : adj[x]) out.adj[perm[x]].push_back(perm[y]);
    for (auto& a : out.adj) std::sort(a.begin(), a.end());
    for (auto [x, y] : pre) out.pre.emplace(perm[x], perm[y]);
    return out;
  }
};

inline CfiStructure to_cfi_structure(const GadgetGraph& gg,
                                     std::size_t padding = 0) {
  CfiStructure s;
  s.n = gg.size() + padding;
  s.adj = gg.adj;
  s.adj.resize(s.n);
  for (std::size_t x = 0; x < gg.size(); ++x)
    for (std::size_t y = 0; y < gg.size(); ++y) {
      const auto& vx = gg.vertices[x];
      const auto& vy = gg.vertices[y];
      if (!vx.is_edge_vertex && !vy.is_edge_vertex && vx.base <= vy.base)
        s.pre.emplace(x, y);
    }
  return s;
}

inline constexpr std::size_t kPadMaxM = 5;
inline constexpr std::size_t kDistinguishMaxM = 4;

inline std::size_t padding_count(std::size_t m) {
  return std::size_t{1} << (m * m);
}

/// G^T over K_{m+1} with 2^{m²} isolated vertices outside the field of ⪯.
inline CfiStructure pad(const GadgetGraph& gg, std::size_t m, bool force = false) {
  if (gg.base.n != m + 1 || gg.base.edges.size() != m * (m + 1) / 2)
    throw Error("pad expects a gadget graph over K_{m+1}");
  if (m > kPadMaxM && !force)
    throw GuardError("m <= " + std::to_string(kPadMaxM),
                     "padding materializes 2^(m^2) vertices");
  return to_cfi_structure(gg, padding_count(m));
}

namespace detail {

/// Blocks U(v) and pairs U(e) recovered from an unlabelled structure.
struct Shape {
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> blocks;  // in ⪯ order
  std::vector<std::size_t> block_of;             // SIZE_MAX outside the field
  /// Per pair: its two vertices and its two blocks (i < j).
  struct Pair {
    std::size_t x, y;
    std::size_t bi, bj;
  };
  std::vector<Pair> pairs;
};

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

/// Every m whose padded or unpadded vertex count is n. Counts can collide
/// (padded m = 2 and unpadded m = 3 both have 28 vertices).
inline std::vector<std::size_t> candidate_ms(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t m = 2; m < 24; ++m) {
    std::size_t unpadded = (m + 1) * ((std::size_t{1} << (m - 1)) + m);
    if (unpadded > n) break;
    if (n == unpadded || (m * m < 48 && n == unpadded + padding_count(m)))
      out.push_back(m);
  }
  return out;
}

/// Checks that ⪯ is a linear pre-order with m+1 classes of size 2^{m-1} and
/// that the other non-isolated vertices come in pairs U(e), one per pair of
/// classes, with complementary neighbourhoods. Returns nullopt otherwise.
inline std::optional<Shape> analyze_for(const CfiStructure& s,
                                        std::size_t m) {
  Shape sh;
  sh.m = m;
  const std::size_t classes = m + 1;
  const std::size_t block_size = std::size_t{1} << (m - 1);

  std::vector<bool> in_field(s.n, false);
  for (auto [x, y] : s.pre) {
    if (x >= s.n || y >= s.n) return std::nullopt;
    in_field[x] = in_field[y] = true;
  }
  std::vector<std::size_t> field;
  for (std::size_t x = 0; x < s.n; ++x)
    if (in_field[x]) field.push_back(x);
  auto le = [&](std::size_t x, std::size_t y) { return s.pre.count({x, y}) > 0; };
  // Reflexive and total on the field.
  for (std::size_t x : field)
    for (std::size_t y : field)
      if (!le(x, y) && !le(y, x)) return std::nullopt;
  // Group into classes, then order classes and check transitivity between them.
  std::vector<std::vector<std::size_t>> cls;
  for (std::size_t x : field) {
    bool placed = false;
    for (auto& c : cls)
      if (le(x, c.front()) && le(c.front(), x)) {
        c.push_back(x);
        placed = true;
        break;
      }
    if (!placed) cls.push_back({x});
  }
  for (const auto& c : cls)
    for (std::size_t x : c)
      for (std::size_t y : c)
        if (!le(x, y)) return std::nullopt;
  // Position of a class = number of classes below or equal to it.
  std::vector<std::vector<std::size_t>> sorted(cls.size());
  for (const auto& c : cls) {
    std::size_t below = 0;
    for (const auto& d : cls) below += le(d.front(), c.front());
    if (below == 0 || below > cls.size() || !sorted[below - 1].empty())
      return std::nullopt;
    sorted[below - 1] = c;
  }
  cls = std::move(sorted);
  for (std::size_t i = 0; i < cls.size(); ++i)
    for (std::size_t j = i + 1; j < cls.size(); ++j)
      for (std::size_t x : cls[i])
        for (std::size_t y : cls[j])
          if (!le(x, y) || le(y, x)) return std::nullopt;
  if (cls.size() != classes) return std::nullopt;
  for (const auto& c : cls)
    if (c.size() != block_size) return std::nullopt;
  sh.blocks = cls;
  sh.block_of.assign(s.n, kNone);
  for (std::size_t i = 0; i < cls.size(); ++i)
    for (std::size_t x : cls[i]) sh.block_of[x] = i;

  // Edges may only join field vertices to non-field ones.
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y : s.adj[x]) {
      if (y >= s.n || std::find(s.adj[y].begin(), s.adj[y].end(), x) == s.adj[y].end())
        return std::nullopt;
      if (in_field[x] == in_field[y]) return std::nullopt;
    }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_blocks;
  std::size_t isolated = 0;
  for (std::size_t x = 0; x < s.n; ++x) {
    if (in_field[x]) continue;
    if (s.adj[x].empty()) {
      ++isolated;
      continue;
    }
    std::set<std::size_t> touched;
    for (std::size_t y : s.adj[x]) touched.insert(sh.block_of[y]);
    if (touched.size() != 2) return std::nullopt;
    by_blocks[{*touched.begin(), *touched.rbegin()}].push_back(x);
  }
  if (isolated != 0 && isolated != padding_count(sh.m)) return std::nullopt;
  if (by_blocks.size() != classes * (classes - 1) / 2) return std::nullopt;
  for (const auto& [bp, xs] : by_blocks) {
    if (xs.size() != 2) return std::nullopt;
    // Complementary within U(v) ∪ U(w).
    std::set<std::size_t> a(s.adj[xs[0]].begin(), s.adj[xs[0]].end());
    std::set<std::size_t> b(s.adj[xs[1]].begin(), s.adj[xs[1]].end());
    if (a.size() + b.size() != 2 * block_size) return std::nullopt;
    for (std::size_t y : a)
      if (b.count(y)) return std::nullopt;
    sh.pairs.push_back({xs[0], xs[1], bp.first, bp.second});
  }
  return sh;
}

inline std::optional<Shape> analyze(const CfiStructure& s) {
  for (std::size_t m : candidate_ms(s.n))
    if (auto sh = analyze_for(s, m)) return sh;
  return std::nullopt;
}

}  // namespace detail

/// Tries every choice of one vertex from each pair U(e); returns 0 iff some
/// choice leaves every block with a vertex all of whose neighbours are chosen.
inline int distinguish_padded(const CfiStructure& h, bool force = false) {
  auto shape = detail::analyze(h);
  if (!shape) throw Error("input is not a CFI structure");
  if (shape->m > kDistinguishMaxM && !force)
    throw GuardError("m <= " + std::to_string(kDistinguishMaxM),
                     "distinguish_padded enumerates 2^#edges choices");
  const std::size_t k = shape->pairs.size();
  std::vector<bool> chosen(h.n, false);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    for (std::size_t p = 0; p < k; ++p) {
      bool first = (bits >> p) & 1u;
      chosen[shape->pairs[p].x] = first;
      chosen[shape->pairs[p].y] = !first;
    }
    bool all_good = true;
    for (const auto& block : shape->blocks) {
      bool good = false;
      for (std::size_t x : block) {
        bool ok = true;
        for (std::size_t y : h.adj[x]) ok = ok && chosen[y];
        if (ok) {
          good = true;
          break;
        }
      }
      if (!good) {
        all_good = false;
        break;
      }
    }
    if (all_good) return 0;
  }
  return 1;
}

/// Size parameter of a recognized structure over K_{m+1}, and whether it
/// carries the isolated padding vertices.
struct CfiShapeInfo {
  std::size_t m = 0;
  bool padded = false;
};

inline std::optional<CfiShapeInfo> cfi_shape(const CfiStructure& x) {
  auto shape = detail::analyze(x);
  if (!shape) return std::nullopt;
  std::size_t used = 2 * shape->pairs.size();
  for (const auto& b : shape->blocks) used += b.size();
  return CfiShapeInfo{shape->m, used < x.n};
}

enum class CfiVerdict { Even, Odd, NotCfi };

inline const char* to_string(CfiVerdict v) {
  switch (v) {
    case CfiVerdict::Even:
      return "0";
    case CfiVerdict::Odd:
      return "1";
    case CfiVerdict::NotCfi:
      return "not-CFI";
  }
  return "?";
}

/// `order` lists the universe from first to last.
inline CfiVerdict recognize_and_classify(const CfiStructure& x,
                                         const std::vector<std::size_t>& order) {
  if (order.size() != x.n) throw Error("order must list every vertex once");
  std::vector<std::size_t> rank(x.n, detail::kNone);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= x.n || rank[order[i]] != detail::kNone)
      throw Error("order must list every vertex once");
    rank[order[i]] = i;
  }
  auto shape = detail::analyze(x);
  if (!shape) return CfiVerdict::NotCfi;

  // Label each pair: + is the order-earlier vertex.
  std::vector<int> sign(x.n, 0);            // +1 / -1 on pair vertices
  std::vector<std::size_t> pair_of(x.n, detail::kNone);
  for (std::size_t p = 0; p < shape->pairs.size(); ++p) {
    const auto& pr = shape->pairs[p];
    bool x_first = rank[pr.x] < rank[pr.y];
    sign[pr.x] = x_first ? 1 : -1;
    sign[pr.y] = x_first ? -1 : 1;
    pair_of[pr.x] = pair_of[pr.y] = p;
  }

  std::size_t bad = 0;
  for (std::size_t b = 0; b < shape->blocks.size(); ++b) {
    // Pairs at this block, in the order of the other block.
    std::vector<std::size_t> local;
    for (std::size_t p = 0; p < shape->pairs.size(); ++p)
      if (shape->pairs[p].bi == b || shape->pairs[p].bj == b) local.push_back(p);
    std::set<std::vector<int>> seqs;
    std::optional<int> parity;
    bool good = false;
    for (std::size_t v : shape->blocks[b]) {
      std::vector<int> seq(local.size(), 0);
      for (std::size_t y : x.adj[v]) {
        auto it = std::find(local.begin(), local.end(), pair_of[y]);
        if (it == local.end()) return CfiVerdict::NotCfi;
        std::size_t k = static_cast<std::size_t>(it - local.begin());
        if (seq[k] != 0) return CfiVerdict::NotCfi;
        seq[k] = sign[y];
      }
      int pluses = 0;
      for (int s : seq) {
        if (s == 0) return CfiVerdict::NotCfi;
        pluses += s > 0;
      }
      // Distinct sequences in a block differ in a nonzero even number of
      // places exactly when they are distinct and share the parity of +'s.
      if (!seqs.insert(seq).second) return CfiVerdict::NotCfi;
      if (parity && *parity != pluses % 2) return CfiVerdict::NotCfi;
      parity = pluses % 2;
      if (pluses == 0) good = true;
    }
    if (!good) ++bad;
  }
  return bad % 2 ? CfiVerdict::Odd : CfiVerdict::Even;
}

inline CfiVerdict recognize_and_classify(const CfiStructure& x) {
  std::vector<std::size_t> order(x.n);
  for (std::size_t i = 0; i < x.n; ++i) order[i] = i;
  return recognize_and_classify(x, order);
}

// ---------------------------------------------------------------------------
// Encoding with binary relations Edge (symmetric) and Pre.

inline std::string gadget_vertex_name(const GadgetGraph& gg, std::size_t i) {
  const GadgetVertex& x = gg.vertices[i];
  if (x.is_edge_vertex) {
    auto [a, b] = gg.base.edges[x.base];
    return "e" + std::to_string(a) + "_" + std::to_string(b) + (x.plus ? "p" : "m");
  }
  std::string name = "v" + std::to_string(x.base) + "_";
  auto inc = gg.base.incident(x.base);
  for (std::size_t k = 0; k < inc.size(); ++k) name += ((x.mask >> k) & 1u) ? '1' : '0';
  return name;
}

inline InputStructure to_structure(const CfiStructure& s,
                                   const std::vector<std::string>& names = {}) {
  InputStructure out;
  for (std::size_t x = 0; x < s.n; ++x)
    out.add_atom(x < names.size() ? names[x] : "x" + std::to_string(x));
  out.relation("Edge", 2);
  out.relation("Pre", 2);
  for (std::size_t x = 0; x < s.n; ++x)
    for (std::size_t y : s.adj[x])
      out.add_tuple("Edge", {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)});
  for (auto [x, y] : s.pre)
    out.add_tuple("Pre", {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)});
  return out;
}

inline std::vector<std::string> padded_names(const GadgetGraph& gg, std::size_t padding) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < gg.size(); ++i) names.push_back(gadget_vertex_name(gg, i));
  for (std::size_t k = 0; k < padding; ++k) names.push_back("pad" + std::to_string(k));
  return names;
}

/// Reads Edge/2 (made symmetric) and Pre/2; missing relations count as empty.
inline CfiStructure cfi_from_structure(const InputStructure& in) {
  CfiStructure s;
  s.n = in.size();
  s.adj.assign(s.n, {});
  if (const auto* e = in.find_relation("Edge")) {
    if (e->arity != 2) throw ParseError("Edge must be binary");
    for (const auto& t : e->tuples) {
      if (t[0] == t[1]) continue;
      s.adj[t[0]].push_back(t[1]);
      s.adj[t[1]].push_back(t[0]);
    }
  }
  for (auto& a : s.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  if (const auto* p = in.find_relation("Pre")) {
    if (p->arity != 2) throw ParseError("Pre must be binary");
    for (const auto& t : p->tuples) s.pre.emplace(t[0], t[1]);
  }
  return s;
}

}  // namespace choiceless::cfi
