#pragma once

// Multipedes: segments, two feet per segment, hyperedges (3-sets of
// segments) and positive foot triples. Over each hyperedge the eight foot
// triples split into two classes by the parity of the set of segments at
// which a triple uses the "other" foot; the positives are one class.
//
// A 3-multipede adds a linear order on segments, a 4-multipede adds the
// power-set sort of segments, and a shoe is a distinguished foot on the
// first segment.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/linalg/field.hpp"
#include "choiceless/linalg/matrix.hpp"
#include "choiceless/structure.hpp"

namespace choiceless::multipede {

using Triple = std::array<std::size_t, 3>;

inline constexpr std::size_t kExhaustiveMaxSegments = 16;
inline constexpr std::size_t kSetsMaxSegments = 16;

struct Multipede2 {
  std::size_t segments = 0;
  std::vector<std::size_t> foot_segment;  // S
  std::vector<Triple> hyperedges;         // sorted triples, sorted list
  std::set<Triple> positives;             // sorted foot triples

  std::size_t feet() const { return foot_segment.size(); }

  /// The two feet of segment s in increasing index order. Assumes the
  /// two-feet axiom.
  std::array<std::size_t, 2> feet_of(std::size_t s) const {
    std::array<std::size_t, 2> out{feet(), feet()};
    std::size_t k = 0;
    for (std::size_t f = 0; f < feet() && k < 2; ++f)
      if (foot_segment[f] == s) out[k++] = f;
    return out;
  }

  friend bool operator==(const Multipede2&, const Multipede2&) = default;
};

struct Multipede3 {
  Multipede2 base;
  std::vector<std::size_t> order;  // order[k] is the k-th segment

  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> r(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) r[order[k]] = k;
    return r;
  }

  friend bool operator==(const Multipede3&, const Multipede3&) = default;
};

struct Shod3 {
  Multipede3 m;
  std::size_t shoe = 0;
};

/// A 3-multipede plus the sets sort. The sets are materialized only for
/// small segment counts; isomorphism never needs them.
struct Multipede4 {
  Multipede3 m;
  bool sets_materialized = false;
};

struct Shod4 {
  Multipede4 m;
  std::size_t shoe = 0;
};

inline Triple sorted_triple(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

struct Violation {
  std::string axiom;
  std::string witness;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline std::string triple_str(const Triple& t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
         std::to_string(t[2]) + ")";
}

/// Foot triples over hyperedge h: bit k of `choice` picks the second foot
/// of the k-th segment of h.
inline Triple triple_over(const Multipede2& m, const Triple& h, unsigned choice) {
  Triple t;
  for (int k = 0; k < 3; ++k) t[k] = m.feet_of(h[k])[(choice >> k) & 1u];
  return sorted_triple(t);
}

}  // namespace detail

/// All violated axioms with witnesses; empty iff M is a 2-multipede.
inline std::vector<Violation> validate(const Multipede2& m) {
  std::vector<Violation> out;
  std::vector<std::size_t> count(m.segments, 0);
  for (std::size_t f = 0; f < m.feet(); ++f) {
    if (m.foot_segment[f] >= m.segments)
      out.push_back({"two-feet", "foot " + std::to_string(f) + " has no segment"});
    else
      ++count[m.foot_segment[f]];
  }
  std::vector<bool> segment_ok(m.segments, true);
  for (std::size_t s = 0; s < m.segments; ++s)
    if (count[s] != 2) {
      segment_ok[s] = false;
      out.push_back({"two-feet", "segment " + std::to_string(s) + " has " +
                                     std::to_string(count[s]) + " feet"});
    }
  std::set<Triple> hyper;
  for (const auto& h : m.hyperedges) {
    bool ok = h[0] < h[1] && h[1] < h[2] && h[2] < m.segments;
    if (!ok)
      out.push_back({"hyperedge-shape", detail::triple_str(h)});
    else if (!hyper.insert(h).second)
      out.push_back({"hyperedge-shape", "duplicate " + detail::triple_str(h)});
  }
  std::map<Triple, std::vector<Triple>> by_edge;
  for (const auto& p : m.positives) {
    bool ok = p[0] < p[1] && p[1] < p[2] && p[2] < m.feet();
    Triple image{};
    if (ok) {
      for (int k = 0; k < 3; ++k) image[k] = m.foot_segment[p[k]];
      image = sorted_triple(image);
      ok = image[0] < image[1] && image[1] < image[2] && hyper.count(image);
    }
    if (!ok) {
      out.push_back({"positive-shape", detail::triple_str(p)});
      continue;
    }
    by_edge[image].push_back(p);
  }
  for (const auto& h : hyper) {
    if (!segment_ok[h[0]] || !segment_ok[h[1]] || !segment_ok[h[2]]) continue;
    const auto& pos = by_edge[h];
    if (pos.size() != 4)
      out.push_back({"four-of-eight", detail::triple_str(h) + " has " +
                                          std::to_string(pos.size()) +
                                          " positive triples"});
    // Two triples over h differ at an even number of segments.
    for (std::size_t a = 0; a < pos.size(); ++a)
      for (std::size_t b = a + 1; b < pos.size(); ++b) {
        std::size_t shared = 0;
        for (auto f : pos[a])
          shared += std::count(pos[b].begin(), pos[b].end(), f);
        if ((3 - shared) % 2 == 1)
          out.push_back({"even-difference", detail::triple_str(pos[a]) + " vs " +
                                                detail::triple_str(pos[b])});
      }
  }
  return out;
}

/// Throws Error unless `order` is a permutation of the segments and M
/// is a valid 2-multipede.
inline void check(const Multipede3& m) {
  auto v = validate(m.base);
  if (!v.empty())
    throw Error("not a multipede: " + v.front().axiom + " " + v.front().witness);
  std::vector<std::size_t> sorted = m.order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> expect(m.base.segments);
  std::iota(expect.begin(), expect.end(), 0);
  if (sorted != expect) throw Error("segment order is not a linear order");
}

/// Attaches a shoe; rejects a foot that is not on the first segment.
inline Shod3 make_shod(Multipede3 m, std::size_t shoe) {
  check(m);
  if (m.order.empty()) throw Error("a multipede without segments has no shoe");
  if (shoe >= m.base.feet() || m.base.foot_segment[shoe] != m.order[0])
    throw Error("the shoe must be a foot of the first segment");
  return {std::move(m), shoe};
}

inline Shod4 make_shod(Multipede4 m, std::size_t shoe) {
  Shod3 s = make_shod(m.m, shoe);
  return {std::move(m), s.shoe};
}

inline Multipede4 with_sets(Multipede3 m) {
  bool small = m.base.segments <= kSetsMaxSegments;
  return {std::move(m), small};
}

/// Hyperedge-by-segment incidence matrix over Z/2; rows "h<i>" follow
/// `hyperedges`, columns "s<j>" the segment indices.
inline linalg::FieldMatrix incidence_matrix(const Multipede2& m) {
  std::vector<std::string> rows, cols;
  for (std::size_t i = 0; i < m.hyperedges.size(); ++i)
    rows.push_back("h" + std::to_string(i));
  for (std::size_t s = 0; s < m.segments; ++s) cols.push_back("s" + std::to_string(s));
  linalg::FieldMatrix a(rows, cols);
  for (std::size_t i = 0; i < m.hyperedges.size(); ++i)
    for (auto s : m.hyperedges[i]) a.at(i, s) = 1;
  return a;
}

/// Every nonempty segment set meets some hyperedge in an odd number of
/// segments, i.e. the incidence matrix has trivial kernel.
inline bool is_odd(const Multipede2& m) {
  return linalg::rank_gaussian(linalg::FiniteField::prime(2), incidence_matrix(m)) ==
         m.segments;
}

namespace detail {

/// Image of a foot triple after swapping the feet of every segment in `flip`.
inline Triple flipped(const Multipede2& m, const Triple& t,
                      const std::vector<bool>& flip) {
  Triple out;
  for (int k = 0; k < 3; ++k) {
    auto feet = m.feet_of(m.foot_segment[t[k]]);
    out[k] = flip[m.foot_segment[t[k]]] ? (feet[0] == t[k] ? feet[1] : feet[0]) : t[k];
  }
  return sorted_triple(out);
}

inline void guard_exhaustive(std::size_t n, bool force, const char* what) {
  if (n > kExhaustiveMaxSegments && !force)
    throw GuardError("segments <= " + std::to_string(kExhaustiveMaxSegments),
                     std::string(what) + " enumerates 2^segments foot maps");
}

}  // namespace detail

/// Automorphisms of a 3-multipede. They fix every segment, so each one is
/// a set of segments whose feet are swapped; count those preserving
/// positivity.
inline std::uint64_t automorphism_count(const Multipede3& m, bool force = false) {
  check(m);
  const std::size_t n = m.base.segments;
  detail::guard_exhaustive(n, force, "automorphism_count");
  std::uint64_t count = 0;
  std::vector<bool> flip(n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    for (std::size_t s = 0; s < n; ++s) flip[s] = (x >> s) & 1u;
    bool ok = true;
    for (const auto& p : m.base.positives)
      if (!m.base.positives.count(detail::flipped(m.base, p, flip))) {
        ok = false;
        break;
      }
    count += ok;
  }
  return count;
}

namespace detail {

/// Shared front end of both isomorphism tests: checks segment counts and
/// that the order-induced segment bijection carries hyperedges onto
/// hyperedges.
inline bool same_skeleton(const Shod3& a, const Shod3& b) {
  const auto& ma = a.m.base;
  const auto& mb = b.m.base;
  if (ma.segments != mb.segments || ma.hyperedges.size() != mb.hyperedges.size())
    return false;
  std::vector<std::size_t> sigma(ma.segments);
  for (std::size_t k = 0; k < ma.segments; ++k) sigma[a.m.order[k]] = b.m.order[k];
  std::vector<Triple> mapped;
  for (const auto& h : ma.hyperedges)
    mapped.push_back(sorted_triple({sigma[h[0]], sigma[h[1]], sigma[h[2]]}));
  std::sort(mapped.begin(), mapped.end());
  return mapped == mb.hyperedges;
}

/// Left foot of segment s: the lower-indexed foot, except that the shoe is
/// always left.
inline std::size_t left_foot(const Shod3& a, std::size_t s) {
  if (a.m.base.foot_segment[a.shoe] == s) return a.shoe;
  return a.m.base.feet_of(s)[0];
}

inline bool is_left(const Shod3& a, std::size_t f) {
  return left_foot(a, a.m.base.foot_segment[f]) == f;
}

/// Positivity of the all-left triple over h.
inline bool left_positive(const Shod3& a, const Triple& h) {
  Triple t{left_foot(a, h[0]), left_foot(a, h[1]), left_foot(a, h[2])};
  return a.m.base.positives.count(sorted_triple(t)) > 0;
}

}  // namespace detail

/// Isomorphism of shod 3-multipedes as a linear system over Z/2.
///
/// The segment bijection is forced by the orders. Let μ map left feet to
/// left feet. Every isomorphism is μ followed by swapping the feet of some
/// segment set x, with the first segment excluded so the shoe stays put.
/// On hyperedge H the swap changes positivity iff |x ∩ H| is odd, so an
/// isomorphism exists iff A·x = v is solvable, A the hyperedge-segment
/// incidence matrix and v_H = 1 iff μ does not preserve positivity on H.
inline bool iso3_decide(const Shod3& a, const Shod3& b) {
  check(a.m);
  check(b.m);
  make_shod(a.m, a.shoe);
  make_shod(b.m, b.shoe);
  if (!detail::same_skeleton(a, b)) return false;
  const std::size_t n = a.m.base.segments;
  auto rank_a = a.m.ranks();
  std::vector<std::size_t> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[a.m.order[k]] = b.m.order[k];

  // Hyperedges as rank triples, in lexicographic order.
  std::vector<std::pair<Triple, Triple>> rows;  // (ranks, segments of A)
  for (const auto& h : a.m.base.hyperedges)
    rows.push_back({sorted_triple({rank_a[h[0]], rank_a[h[1]], rank_a[h[2]]}), h});
  std::sort(rows.begin(), rows.end());

  // Unknowns: one per segment after the first, indexed by rank.
  std::vector<std::string> row_names, col_names;
  for (std::size_t i = 0; i < rows.size(); ++i) row_names.push_back("h" + std::to_string(i));
  for (std::size_t k = 1; k < n; ++k) col_names.push_back("r" + std::to_string(k));
  linalg::FieldMatrix system(row_names, col_names);
  std::vector<linalg::Elem> v(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [ranks, h] = rows[i];
    for (auto r : ranks)
      if (r > 0) system.at(i, r - 1) = 1;
    Triple hb{sigma[h[0]], sigma[h[1]], sigma[h[2]]};
    v[i] = detail::left_positive(a, h) != detail::left_positive(b, hb);
  }
  return linalg::solve(linalg::FiniteField::prime(2), system, v).has_value();
}

/// Isomorphism of shod 4-multipedes by trying all 2^n foot matchings that
/// respect S and the orders and keep the shoe on the shoe.
inline bool iso4_decide(const Shod4& a4, const Shod4& b4, bool force = false) {
  Shod3 a{a4.m.m, a4.shoe}, b{b4.m.m, b4.shoe};
  check(a.m);
  check(b.m);
  make_shod(a.m, a.shoe);
  make_shod(b.m, b.shoe);
  const std::size_t n = a.m.base.segments;
  detail::guard_exhaustive(n, force, "iso4_decide");
  if (!detail::same_skeleton(a, b)) return false;
  if (a.m.base.positives.size() != b.m.base.positives.size()) return false;
  std::vector<std::size_t> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[a.m.order[k]] = b.m.order[k];
  const auto& fa = a.m.base;
  const auto& fb = b.m.base;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    // Bit s of x: foot matching on segment s is crossed.
    auto image = [&](std::size_t f) {
      std::size_t s = fa.foot_segment[f];
      bool left = detail::is_left(a, f) != (((x >> s) & 1u) != 0);
      std::size_t lb = detail::left_foot(b, sigma[s]);
      if (left) return lb;
      auto feet = fb.feet_of(sigma[s]);
      return feet[0] == lb ? feet[1] : feet[0];
    };
    if (n > 0 && image(a.shoe) != b.shoe) continue;
    bool ok = true;
    for (const auto& p : fa.positives)
      if (!fb.positives.count(sorted_triple({image(p[0]), image(p[1]), image(p[2])}))) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

/// The two shod versions of M: shoe on the lower- and on the higher-indexed
/// foot of the first segment.
inline std::pair<Shod3, Shod3> shoe_expansions(const Multipede3& m) {
  check(m);
  if (m.order.empty()) throw Error("a multipede without segments has no shoe");
  auto feet = m.base.feet_of(m.order[0]);
  return {make_shod(m, feet[0]), make_shod(m, feet[1])};
}

/// Random multipede on n segments (feet 2s and 2s+1 on segment s) with k
/// distinct hyperedges, a random positivity class on each, and a random
/// segment order.
inline Multipede3 random_multipede(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<Triple> all;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) all.push_back({x, y, z});
  if (k > all.size())
    throw Error("cannot place " + std::to_string(k) + " hyperedges on " +
                std::to_string(n) + " segments");
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  Multipede3 m;
  m.base.segments = n;
  for (std::size_t s = 0; s < n; ++s) {
    m.base.foot_segment.push_back(s);
    m.base.foot_segment.push_back(s);
  }
  m.base.hyperedges.assign(all.begin(), all.begin() + k);
  std::sort(m.base.hyperedges.begin(), m.base.hyperedges.end());
  for (const auto& h : m.base.hyperedges) {
    unsigned cls = rng() & 1u;
    for (unsigned c = 0; c < 8; ++c)
      if ((std::popcount(c) & 1u) == cls)
        m.base.positives.insert(detail::triple_over(m.base, h, c));
  }
  m.order.resize(n);
  std::iota(m.order.begin(), m.order.end(), 0);
  std::shuffle(m.order.begin(), m.order.end(), rng);
  return m;
}

/// Swaps the feet of the given segments inside the positivity relation.
inline Multipede3 flip_feet(Multipede3 m, const std::set<std::size_t>& segments) {
  std::vector<bool> flip(m.base.segments, false);
  for (auto s : segments) flip.at(s) = true;
  std::set<Triple> pos;
  for (const auto& p : m.base.positives) pos.insert(detail::flipped(m.base, p, flip));
  m.base.positives = std::move(pos);
  return m;
}

/// Moves hyperedge `index` to its other positivity class.
inline Multipede3 twist_positivity(Multipede3 m, std::size_t index) {
  const Triple h = m.base.hyperedges.at(index);
  for (unsigned c = 0; c < 8; ++c) {
    Triple t = detail::triple_over(m.base, h, c);
    if (!m.base.positives.erase(t)) m.base.positives.insert(t);
  }
  return m;
}

/// Renames segments (s ↦ seg_perm[s]) and feet (f ↦ foot_perm[f]).
inline Multipede3 relabeled(const Multipede3& m,
                            const std::vector<std::size_t>& seg_perm,
                            const std::vector<std::size_t>& foot_perm) {
  Multipede3 out;
  out.base.segments = m.base.segments;
  out.base.foot_segment.assign(m.base.feet(), 0);
  for (std::size_t f = 0; f < m.base.feet(); ++f)
    out.base.foot_segment[foot_perm.at(f)] = seg_perm.at(m.base.foot_segment[f]);
  for (const auto& h : m.base.hyperedges)
    out.base.hyperedges.push_back(
        sorted_triple({seg_perm[h[0]], seg_perm[h[1]], seg_perm[h[2]]}));
  std::sort(out.base.hyperedges.begin(), out.base.hyperedges.end());
  for (const auto& p : m.base.positives)
    out.base.positives.insert(
        sorted_triple({foot_perm[p[0]], foot_perm[p[1]], foot_perm[p[2]]}));
  for (auto s : m.order) out.order.push_back(seg_perm[s]);
  return out;
}

// ---- .str encoding ----------------------------------------------------

/// A multipede read from a structure: the 2-multipede, plus the segment
/// order, shoe and sets sort when present.
struct MultipedeData {
  Multipede2 base;
  std::optional<std::vector<std::size_t>> order;
  std::optional<std::size_t> shoe;
  bool has_sets = false;
};

/// Atoms s<i> (Segment), f<i> (Foot) and, for 4-multipedes with at most
/// kSetsMaxSegments segments, X<mask> (Set) with Eps(segment, set).
/// Hyper and Positive are listed under all six permutations.
inline InputStructure to_structure(const Multipede2& m,
                                   const std::vector<std::size_t>* order = nullptr,
                                   std::optional<std::size_t> shoe = std::nullopt,
                                   bool sets = false) {
  InputStructure out;
  auto id = [](std::size_t x) { return static_cast<std::uint32_t>(x); };
  for (std::size_t s = 0; s < m.segments; ++s) out.add_atom("s" + std::to_string(s));
  for (std::size_t f = 0; f < m.feet(); ++f) out.add_atom("f" + std::to_string(f));
  const std::size_t foot0 = m.segments;
  for (const char* r : {"Segment", "Foot"}) out.relation(r, 1);
  out.relation("S", 2);
  out.relation("Hyper", 3);
  out.relation("Positive", 3);
  for (std::size_t s = 0; s < m.segments; ++s) out.add_tuple("Segment", {id(s)});
  for (std::size_t f = 0; f < m.feet(); ++f) {
    out.add_tuple("Foot", {id(foot0 + f)});
    out.add_tuple("S", {id(foot0 + f), id(m.foot_segment[f])});
  }
  auto symmetric = [&](const char* rel, Triple t, std::size_t offset) {
    std::sort(t.begin(), t.end());
    do out.add_tuple(rel, {id(offset + t[0]), id(offset + t[1]), id(offset + t[2])});
    while (std::next_permutation(t.begin(), t.end()));
  };
  for (const auto& h : m.hyperedges) symmetric("Hyper", h, 0);
  for (const auto& p : m.positives) symmetric("Positive", p, foot0);
  if (order) {
    out.relation("Le", 2);
    for (std::size_t i = 0; i < order->size(); ++i)
      for (std::size_t j = i; j < order->size(); ++j)
        out.add_tuple("Le", {id((*order)[i]), id((*order)[j])});
  }
  if (shoe) {
    out.relation("Shoe", 1);
    out.add_tuple("Shoe", {id(foot0 + *shoe)});
  }
  if (sets && m.segments <= kSetsMaxSegments) {
    out.relation("Set", 1);
    out.relation("Eps", 2);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.segments); ++mask) {
      auto x = out.add_atom("X" + std::to_string(mask));
      out.add_tuple("Set", {x});
      for (std::size_t s = 0; s < m.segments; ++s)
        if ((mask >> s) & 1u) out.add_tuple("Eps", {id(s), x});
    }
  }
  return out;
}

inline InputStructure to_structure(const Multipede3& m) {
  return to_structure(m.base, &m.order);
}
inline InputStructure to_structure(const Shod3& m) {
  return to_structure(m.m.base, &m.m.order, m.shoe);
}
inline InputStructure to_structure(const Shod4& m) {
  return to_structure(m.m.m.base, &m.m.m.order, m.shoe, m.m.sets_materialized);
}

/// Reads the encoding above. Segments and feet are numbered in atom order.
/// Throws ParseError for malformed relations (asymmetric Hyper/Positive,
/// a non-linear Le, a shoe that is not a foot, a Set sort that is not the
/// power set of the segments).
inline MultipedeData multipede_from_structure(const InputStructure& in) {
  auto rel = [&](const char* name, std::size_t arity) -> const RelationTable* {
    const RelationTable* r = in.find_relation(name);
    if (r && r->arity != arity)
      throw ParseError(std::string(name) + " must have arity " + std::to_string(arity));
    return r;
  };
  const auto* seg = rel("Segment", 1);
  const auto* foot = rel("Foot", 1);
  if (!seg || !foot) throw ParseError("a multipede needs Segment and Foot");
  std::vector<std::optional<std::size_t>> seg_ix(in.size()), foot_ix(in.size());
  MultipedeData d;
  std::size_t nf = 0;
  for (std::uint32_t x = 0; x < in.size(); ++x) {
    bool is_seg = seg->tuples.count({x}), is_foot = foot->tuples.count({x});
    if (is_seg && is_foot) throw ParseError("atom " + in.atom_name(x) + " is both segment and foot");
    if (is_seg) seg_ix[x] = d.base.segments++;
    if (is_foot) foot_ix[x] = nf++;
  }
  d.base.foot_segment.assign(nf, d.base.segments);  // unset marker
  if (const auto* s = rel("S", 2)) {
    for (const auto& t : s->tuples) {
      if (!foot_ix[t[0]] || !seg_ix[t[1]])
        throw ParseError("S must relate a foot to a segment");
      auto& slot = d.base.foot_segment[*foot_ix[t[0]]];
      if (slot != d.base.segments) throw ParseError("S is not a function");
      slot = *seg_ix[t[1]];
    }
  }
  for (std::size_t f = 0; f < nf; ++f)
    if (d.base.foot_segment[f] == d.base.segments)
      throw ParseError("a foot without a segment");
  auto read_symmetric = [&](const char* name,
                            const std::vector<std::optional<std::size_t>>& ix) {
    std::set<Triple> out;
    const auto* r = rel(name, 3);
    if (!r) return out;
    for (const auto& t : r->tuples) {
      Triple v;
      for (int k = 0; k < 3; ++k) {
        if (!ix[t[k]]) throw ParseError(std::string(name) + " relates the wrong sort");
        v[k] = *ix[t[k]];
      }
      if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
        throw ParseError(std::string(name) + " must be irreflexive");
      out.insert(sorted_triple(v));
    }
    if (r->tuples.size() != 6 * out.size())
      throw ParseError(std::string(name) + " must be symmetric");
    return out;
  };
  auto hyper = read_symmetric("Hyper", seg_ix);
  d.base.hyperedges.assign(hyper.begin(), hyper.end());
  d.base.positives = read_symmetric("Positive", foot_ix);
  if (const auto* le = rel("Le", 2)) {
    // Rank = number of segments below or equal.
    std::vector<std::size_t> below(d.base.segments, 0);
    for (const auto& t : le->tuples) {
      if (!seg_ix[t[0]] || !seg_ix[t[1]]) throw ParseError("Le must relate segments");
      ++below[*seg_ix[t[1]]];
    }
    std::size_t n = d.base.segments;
    if (le->tuples.size() != n * (n + 1) / 2)
      throw ParseError("Le is not a linear order");
    std::vector<std::size_t> order(n, n);
    for (std::size_t s = 0; s < n; ++s) {
      if (below[s] < 1 || below[s] > n || order[below[s] - 1] != n)
        throw ParseError("Le is not a linear order");
      order[below[s] - 1] = s;
    }
    // Check the relation really is the order just read off.
    for (const auto& t : le->tuples)
      if (below[*seg_ix[t[0]]] > below[*seg_ix[t[1]]])
        throw ParseError("Le is not a linear order");
    d.order = order;
  }
  if (const auto* sh = rel("Shoe", 1)) {
    if (sh->tuples.size() != 1) throw ParseError("Shoe must hold of exactly one foot");
    auto x = (*sh->tuples.begin())[0];
    if (!foot_ix[x]) throw ParseError("the shoe must be a foot");
    d.shoe = *foot_ix[x];
  }
  if (const auto* set = rel("Set", 1)) {
    const auto* eps = rel("Eps", 2);
    std::map<std::uint32_t, std::uint64_t> mask;
    for (const auto& t : set->tuples) mask[t[0]] = 0;
    if (eps)
      for (const auto& t : eps->tuples) {
        if (!seg_ix[t[0]] || !mask.count(t[1]))
          throw ParseError("Eps must relate a segment to a set");
        mask[t[1]] |= std::uint64_t{1} << *seg_ix[t[0]];
      }
    std::set<std::uint64_t> seen;
    for (auto [x, m] : mask) seen.insert(m);
    if (d.base.segments > 63 || seen.size() != mask.size() ||
        mask.size() != (std::uint64_t{1} << d.base.segments))
      throw ParseError("the Set sort is not the power set of the segments");
    d.has_sets = true;
  }
  return d;
}

}  // namespace choiceless::multipede
