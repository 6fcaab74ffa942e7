#pragma once

// Exhaustive references for multipedes: oddness by enumerating segment
// sets, and isomorphism of shod 3-multipedes by trying every foot
// bijection compatible with the order-induced segment bijection.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>

#include "choiceless/multipede.hpp"

namespace choiceless::testing {

inline bool brute_is_odd(const multipede::Multipede2& m) {
  for (std::uint64_t x = 1; x < (std::uint64_t{1} << m.segments); ++x) {
    bool met_oddly = false;
    for (const auto& h : m.hyperedges) {
      int meet = 0;
      for (auto s : h) meet += (x >> s) & 1u;
      if (meet % 2 == 1) {
        met_oddly = true;
        break;
      }
    }
    if (!met_oddly) return false;
  }
  return true;
}

inline bool brute_iso(const multipede::Shod3& a, const multipede::Shod3& b) {
  using multipede::Triple;
  const auto& ma = a.m.base;
  const auto& mb = b.m.base;
  const std::size_t n = ma.segments;
  if (n != mb.segments || ma.feet() != mb.feet()) return false;
  std::vector<std::size_t> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[a.m.order[k]] = b.m.order[k];
  std::set<Triple> hb(mb.hyperedges.begin(), mb.hyperedges.end());
  if (hb.size() != ma.hyperedges.size()) return false;
  for (const auto& h : ma.hyperedges)
    if (!hb.count(multipede::sorted_triple({sigma[h[0]], sigma[h[1]], sigma[h[2]]})))
      return false;
  if (ma.positives.size() != mb.positives.size()) return false;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    std::vector<std::size_t> phi(ma.feet());
    for (std::size_t s = 0; s < n; ++s) {
      auto fa = ma.feet_of(s);
      auto fb = mb.feet_of(sigma[s]);
      bool cross = (x >> s) & 1u;
      phi[fa[0]] = fb[cross ? 1 : 0];
      phi[fa[1]] = fb[cross ? 0 : 1];
    }
    if (phi[a.shoe] != b.shoe) continue;
    bool ok = true;
    for (const auto& p : ma.positives)
      if (!mb.positives.count(
              multipede::sorted_triple({phi[p[0]], phi[p[1]], phi[p[2]]}))) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

/// A random odd multipede with n segments (4 <= n); retries seeds.
inline multipede::Multipede3 random_odd_multipede(std::size_t n, std::mt19937_64& rng) {
  std::size_t max_edges = n * (n - 1) * (n - 2) / 6;
  for (;;) {
    std::size_t k = std::min(max_edges, n + rng() % (n + 1));
    auto m = multipede::random_multipede(n, k, rng());
    if (multipede::is_odd(m.base)) return m;
  }
}

/// A relabeled copy of m: segments and feet renamed at random. `shoe`, if
/// given, is renamed along with the feet.
inline multipede::Multipede3 random_relabel(const multipede::Multipede3& m,
                                            std::mt19937_64& rng,
                                            std::size_t* shoe = nullptr) {
  std::vector<std::size_t> seg(m.base.segments), foot(m.base.feet());
  std::iota(seg.begin(), seg.end(), 0);
  std::iota(foot.begin(), foot.end(), 0);
  std::shuffle(seg.begin(), seg.end(), rng);
  std::shuffle(foot.begin(), foot.end(), rng);
  if (shoe) *shoe = foot[*shoe];
  return multipede::relabeled(m, seg, foot);
}

/// A test pair for the isomorphism deciders. kind 0: identical; 1: feet
/// swapped on random segments, then relabeled; 2: one hyperedge twisted,
/// then relabeled; 3: an unrelated multipede of the same shape.
inline std::pair<multipede::Shod3, multipede::Shod3> random_iso_pair(
    int kind, std::size_t n, std::mt19937_64& rng) {
  std::size_t max_edges = n * (n - 1) * (n - 2) / 6;
  std::size_t k = max_edges == 0 ? 0 : 1 + rng() % std::min(max_edges, 2 * n);
  auto a = multipede::random_multipede(n, k, rng());
  auto feet = a.base.feet_of(a.order[0]);
  std::size_t shoe_a = feet[rng() % 2];
  multipede::Multipede3 b = a;
  if (kind == 1) {
    std::set<std::size_t> flip;
    for (std::size_t s = 0; s < n; ++s)
      if (rng() % 2) flip.insert(s);
    b = multipede::flip_feet(b, flip);
  } else if (kind == 2 && k > 0) {
    b = multipede::twist_positivity(b, rng() % k);
  } else if (kind == 3) {
    b = multipede::random_multipede(n, k, rng());
  }
  auto fb = b.base.feet_of(b.order[0]);
  std::size_t shoe_b = kind == 3 ? fb[rng() % 2] : shoe_a;
  if (kind != 0) b = random_relabel(b, rng, &shoe_b);
  return {multipede::make_shod(a, shoe_a), multipede::make_shod(b, shoe_b)};
}

}  // namespace choiceless::testing
