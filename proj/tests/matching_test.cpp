#include "choiceless/matching.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "test_util.hpp"

namespace choiceless {
namespace {

BipartiteGraph from_edges(std::size_t na, std::size_t nb,
                          std::vector<std::pair<std::size_t, std::size_t>> es) {
  BipartiteGraph g(na, nb);
  for (auto [a, b] : es) g.set_edge(a, b);
  return g;
}

BipartiteGraph gang_instance() {
  return bipartite_from_structure(
      parse_structure(testing::read_sample("structures/gang.str")));
}

BipartiteGraph complete(std::size_t na, std::size_t nb) {
  BipartiteGraph g(na, nb);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) g.set_edge(a, b);
  return g;
}

// Largest matching by trying every injective assignment.
std::size_t brute_max_matching(const BipartiteGraph& g) {
  std::vector<bool> used(g.size_b(), false);
  auto rec = [&](auto&& self, std::size_t a) -> std::size_t {
    if (a == g.size_a()) return 0;
    std::size_t best = self(self, a + 1);
    for (std::size_t b = 0; b < g.size_b(); ++b) {
      if (used[b] || !g.edge(a, b)) continue;
      used[b] = true;
      best = std::max(best, 1 + self(self, a + 1));
      used[b] = false;
    }
    return best;
  };
  return rec(rec, 0);
}

bool is_matching_within(const BipartiteGraph& g, const Matching& m) {
  std::vector<bool> used(g.size_b(), false);
  for (auto [a, b] : m.pairs()) {
    if (!g.edge(a, b) || used[b]) return false;
    used[b] = true;
  }
  return true;
}

// The three-vertex / two-vertex example: a2 has degree two, a1 and a3 one.
BipartiteGraph small_example() {
  return from_edges(3, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 1}});
}

TEST(PathAlgorithmTest, PerfectOnDiagonal) {
  BipartiteGraph g = from_edges(2, 2, {{0, 0}, {1, 1}});
  PathResult r = path_algorithm(g);
  ASSERT_TRUE(r.complete);
  EXPECT_EQ(r.matching.pairs(), g.edges());
}

TEST(PathAlgorithmTest, GangInstanceHasNoCompleteMatching) {
  BipartiteGraph g = gang_instance();
  ASSERT_EQ(g.size_a(), 4u);
  ASSERT_EQ(g.size_b(), 4u);
  PathResult r = path_algorithm(g);
  EXPECT_FALSE(r.complete);
  EXPECT_LT(neighbors(g, r.violator).size(), r.violator.size());
}

TEST(PathAlgorithmTest, EachAugmentationAddsOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    BipartiteGraph g = random_bipartite(1 + rng() % 8, 1 + rng() % 8, 0.35, rng());
    PathResult r = path_algorithm(g);
    for (std::size_t k = 0; k < r.size_history.size(); ++k)
      EXPECT_EQ(r.size_history[k], k + 1);
    EXPECT_TRUE(is_matching_within(g, r.matching));
    if (r.complete) {
      EXPECT_EQ(r.matching.size(), g.size_a());
    } else {
      EXPECT_LT(neighbors(g, r.violator).size(), r.violator.size());
    }
  }
}

TEST(PathAlgorithmTest, RespectsVertexOrder) {
  BipartiteGraph g = complete(1, 2);
  VertexOrder order = {{Side::B, 1}, {Side::A, 0}, {Side::B, 0}};
  PathResult r = path_algorithm(g, order);
  ASSERT_TRUE(r.complete);
  EXPECT_EQ(r.matching.mate_of_a[0], 1u);
}

TEST(HallOracleTest, Examples) {
  EXPECT_TRUE(hall_oracle(complete(2, 2)));
  EXPECT_FALSE(hall_oracle(gang_instance()));
  EXPECT_FALSE(hall_oracle(complete(3, 2)));
  EXPECT_TRUE(hall_oracle(BipartiteGraph(0, 3)));
}

TEST(HallOracleTest, Guard) {
  EXPECT_THROW(hall_oracle(BipartiteGraph(21, 1)), GuardError);
}

TEST(StableColoringTest, EmptyRelationGivesOneBlockPerSide) {
  StableColoring c = stable_coloring(BipartiteGraph(3, 4));
  EXPECT_EQ(c.a_blocks.size(), 1u);
  EXPECT_EQ(c.b_blocks.size(), 1u);
}

TEST(StableColoringTest, SmallExample) {
  StableColoring c = stable_coloring(small_example());
  EXPECT_EQ(c.a_blocks,
            (std::vector<std::vector<std::size_t>>{{0, 2}, {1}}));
  EXPECT_EQ(c.b_blocks, (std::vector<std::vector<std::size_t>>{{0, 1}}));
  EXPECT_TRUE(is_stable(small_example(), c));
}

TEST(StableColoringTest, StableAndBoundedRounds) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t na = rng() % 9, nb = rng() % 9;
    BipartiteGraph g = random_bipartite(na, nb, 0.4, rng());
    StableColoring c = stable_coloring(g);
    EXPECT_TRUE(is_stable(g, c));
    EXPECT_LE(c.rounds, na + nb);
  }
}

TEST(StableColoringTest, InvariantUnderRenaming) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t na = 1 + rng() % 7, nb = 1 + rng() % 7;
    BipartiteGraph g = random_bipartite(na, nb, 0.4, rng());
    std::vector<std::size_t> pa(na), pb(nb);
    std::iota(pa.begin(), pa.end(), 0);
    std::iota(pb.begin(), pb.end(), 0);
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(pb.begin(), pb.end(), rng);
    StableColoring c = stable_coloring(g);
    StableColoring d = stable_coloring(g.permuted(pa, pb));
    ASSERT_EQ(c.a_blocks.size(), d.a_blocks.size());
    ASSERT_EQ(c.b_blocks.size(), d.b_blocks.size());
    for (std::size_t i = 0; i < c.a_blocks.size(); ++i) {
      std::vector<std::size_t> mapped;
      for (std::size_t a : c.a_blocks[i]) mapped.push_back(pa[a]);
      std::sort(mapped.begin(), mapped.end());
      EXPECT_EQ(mapped, d.a_blocks[i]);
    }
    for (std::size_t j = 0; j < c.b_blocks.size(); ++j) {
      std::vector<std::size_t> mapped;
      for (std::size_t b : c.b_blocks[j]) mapped.push_back(pb[b]);
      std::sort(mapped.begin(), mapped.end());
      EXPECT_EQ(mapped, d.b_blocks[j]);
    }
    EXPECT_EQ(quotient(g, c), quotient(g.permuted(pa, pb), d));
  }
}

TEST(SaturateTest, Examples) {
  BipartiteGraph k = complete(2, 3);
  EXPECT_EQ(saturate(k, stable_coloring(k)), k);
  BipartiteGraph e(2, 2);
  EXPECT_EQ(saturate(e, stable_coloring(e)), e);
  BipartiteGraph g = small_example();
  BipartiteGraph plus = saturate(g, stable_coloring(g));
  EXPECT_TRUE(plus.edge(0, 1));
  EXPECT_TRUE(plus.edge(2, 0));
  EXPECT_EQ(plus, complete(3, 2));
}

TEST(QuotientTest, Examples) {
  BipartiteGraph g = small_example();
  QuotientGraph q = quotient(g, stable_coloring(g));
  BipartiteGraph qg = q.graph();
  EXPECT_EQ(qg.size_a(), 3u);
  EXPECT_EQ(qg.size_b(), 2u);
  EXPECT_EQ(qg, complete(3, 2));

  EXPECT_EQ(quotient(complete(1, 1), stable_coloring(complete(1, 1))).graph(),
            complete(1, 1));
  BipartiteGraph none(1, 1);
  EXPECT_EQ(quotient(none, stable_coloring(none)).graph(), none);
}

TEST(DecideTest, Examples) {
  EXPECT_FALSE(decide_complete_matching(gang_instance()));
  EXPECT_TRUE(decide_complete_matching(complete(3, 3)));
  EXPECT_TRUE(decide_complete_matching(BipartiteGraph(0, 0)));
  EXPECT_FALSE(decide_complete_matching(BipartiteGraph(2, 0)));
}

TEST(DecideTest, AgreesWithHallOnRandomGraphs) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    BipartiteGraph g =
        random_bipartite(rng() % 8, rng() % 8, 0.15 + 0.1 * (rng() % 5), rng());
    EXPECT_EQ(decide_complete_matching(g), hall_oracle(g));
  }
}

TEST(MaxMatchingTest, Examples) {
  EXPECT_EQ(max_matching_size(complete(2, 2)), 2u);
  EXPECT_EQ(max_matching_size(BipartiteGraph(2, 3)), 0u);
  EXPECT_EQ(brute_max_matching(gang_instance()), 3u);
  EXPECT_EQ(max_matching_size(gang_instance()), 3u);
}

TEST(MaxMatchingTest, AgreesWithBruteForce) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    BipartiteGraph g = random_bipartite(rng() % 7, rng() % 7, 0.3, rng());
    EXPECT_EQ(max_matching_size(g), brute_max_matching(g));
  }
}

TEST(EncodingTest, StructureRoundTrip) {
  BipartiteGraph g = small_example();
  InputStructure s = to_structure(g);
  EXPECT_EQ(bipartite_from_structure(s), g);
  EXPECT_EQ(bipartite_from_structure(parse_structure(write_structure(s))), g);
  EXPECT_THROW(bipartite_from_structure(parse_structure(
                   "atoms: x y\nrel InA/1: (x)\nrel InB/1: (y)\nrel R/2: (y,x)")),
               ParseError);
}

}  // namespace
}  // namespace choiceless
