#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dmg/edge_list.hpp"
#include "dmg/families.hpp"
#include "dmg/graph.hpp"
#include "dmg/testing/cycles.hpp"

using namespace dmg;

namespace {

LandmarkedGraph gen(Family f, std::size_t p) { return generate({f, p}); }

// Brute force over all t-subsets of N(v) for every v.
bool induced_star_brute(const Graph& g, std::size_t t) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto nb = std::vector<Vertex>(g.neighbors(v).begin(), g.neighbors(v).end());
    if (nb.size() < t) continue;
    std::vector<char> pick(nb.size(), 0);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(t), pick.end(), 1);
    do {
      bool ok = true;
      for (std::size_t a = 0; a < nb.size() && ok; ++a)
        for (std::size_t b = a + 1; b < nb.size() && ok; ++b)
          if (pick[a] && pick[b] && g.adjacent(nb[a], nb[b])) ok = false;
      if (ok) return true;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return false;
}

}  // namespace

TEST(BuildGraph, PathOnTwoVertices) {
  const auto g = Graph::build(2, {{0, 1}});
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 1u);
}

TEST(BuildGraph, Claw) {
  const auto g = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(g.max_degree(), 3u);
}

TEST(BuildGraph, RejectsSelfLoopDuplicateAndRange) {
  EXPECT_THROW(Graph::build(3, {{0, 0}}), GraphError);
  EXPECT_THROW(Graph::build(3, {{0, 1}, {1, 0}}), GraphError);
  EXPECT_THROW(Graph::build(3, {{0, 3}}), GraphError);
}

TEST(Generate, GPrimeTwoIsTheFourteenCycle) {
  const auto lg = gen(Family::GPrime, 2);
  EXPECT_EQ(lg.graph.vertex_count(), 14u);
  EXPECT_EQ(lg.graph.edge_count(), 14u);
  // Every vertex has degree 2 and the graph is connected, so it is C14.
  for (Vertex v = 0; v < 14; ++v) EXPECT_EQ(lg.graph.degree(v), 2u);
  EXPECT_TRUE(is_connected(lg.graph));
}

TEST(Generate, GPrimeFour) {
  const auto lg = gen(Family::GPrime, 4);
  EXPECT_EQ(lg.graph.vertex_count(), 26u);
  EXPECT_EQ(lg.graph.edge_count(), 28u);
  EXPECT_EQ(lg.graph.degree(lg.landmarks->v1), 4u);
  EXPECT_EQ(lg.graph.degree(lg.landmarks->v2), 4u);
  EXPECT_EQ(lg.graph.max_degree(), 4u);
}

TEST(Generate, GEight) {
  const auto lg = gen(Family::G, 8);
  EXPECT_EQ(lg.graph.vertex_count(), 50u);
  EXPECT_EQ(lg.graph.edge_count(), 64u);
  EXPECT_EQ(lg.graph.max_degree(), 8u);
  EXPECT_EQ(lg.graph.max_degree(), 2u * 6u - 4u);
}

TEST(Generate, RejectsOddGAndTinyFamilies) {
  EXPECT_THROW(gen(Family::G, 3), GraphError);
  EXPECT_THROW(gen(Family::GPrime, 1), GraphError);
  EXPECT_THROW(gen(Family::Cycle, 2), GraphError);
}

TEST(Generate, LandmarksDescribeThePaths) {
  for (auto fam : {Family::GPrime, Family::G}) {
    const auto lg = gen(fam, 4);
    const auto& lm = *lg.landmarks;
    ASSERT_EQ(lm.path_count(), 4u);
    std::set<Vertex> seen;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& p = lm.paths[i];
      ASSERT_EQ(p.size(), 8u);
      EXPECT_EQ(p.front(), lm.v1);
      EXPECT_EQ(p.back(), lm.v2);
      EXPECT_EQ(p[1], lm.w[i]);
      EXPECT_EQ(p[6], lm.u[i]);
      for (std::size_t k = 0; k + 1 < p.size(); ++k) EXPECT_TRUE(lg.graph.adjacent(p[k], p[k + 1]));
      for (std::size_t k = 1; k < 7; ++k) {
        EXPECT_TRUE(seen.insert(p[k]).second);
        EXPECT_EQ(lm.path_of(p[k]), i);
      }
    }
    EXPECT_FALSE(lm.path_of(lm.v1).has_value());
  }
}

TEST(Degree, Examples) {
  EXPECT_EQ(gen(Family::Star, 3).graph.max_degree(), 3u);
  EXPECT_EQ(gen(Family::Cycle, 14).graph.max_degree(), 2u);
  EXPECT_EQ(gen(Family::G, 8).graph.max_degree(), 8u);
}

TEST(InducedStar, Claw) {
  const auto s = find_induced_star(gen(Family::Star, 3).graph, 3);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->center, 0u);
  EXPECT_EQ(s->leaves, (std::vector<Vertex>{1, 2, 3}));
}

TEST(InducedStar, TriangleHasNoTwoStar) {
  EXPECT_FALSE(find_induced_star(gen(Family::Complete, 3).graph, 2));
}

TEST(InducedStar, GEightLeavesArePairwiseNonAdjacent) {
  const auto g = gen(Family::G, 8).graph;
  for (std::size_t t = 1; t <= 6; ++t) {
    const auto s = find_induced_star(g, t);
    EXPECT_EQ(s.has_value(), induced_star_brute(g, t)) << "t=" << t;
    if (!s) continue;
    ASSERT_EQ(s->leaves.size(), t);
    for (Vertex x : s->leaves) EXPECT_TRUE(g.adjacent(s->center, x));
    for (std::size_t a = 0; a < t; ++a)
      for (std::size_t b = a + 1; b < t; ++b) EXPECT_FALSE(g.adjacent(s->leaves[a], s->leaves[b]));
  }
  // One w from each matched pair: four leaves at a hub, never five.
  EXPECT_TRUE(find_induced_star(g, 4));
  EXPECT_FALSE(find_induced_star(g, 5));
}

TEST(GreatCycles, Counts) {
  EXPECT_EQ(great_cycles(gen(Family::GPrime, 4)).size(), 6u);
  EXPECT_EQ(great_cycles(gen(Family::G, 4)).size(), 4u);
  EXPECT_EQ(great_cycles(gen(Family::G, 8)).size(), 24u);
  EXPECT_THROW(great_cycles(gen(Family::Star, 3)), GraphError);
}

TEST(GreatCycles, AgreeWithBruteForceChordlessCycles) {
  for (auto [fam, l] : {std::pair{Family::GPrime, 4u}, std::pair{Family::G, 4u}, std::pair{Family::G, 6u}}) {
    const auto lg = gen(fam, l);
    const auto brute = dmg::testing::chordless_cycles_through(lg.graph, 0, 1, 14);
    std::set<std::set<Vertex>> a, b;
    for (const auto& c : brute) a.insert(std::set<Vertex>(c.begin(), c.end()));
    for (const auto& c : great_cycles(lg)) {
      EXPECT_EQ(c.vertices.size(), 14u);
      for (std::size_t k = 0; k < 14; ++k) EXPECT_TRUE(lg.graph.adjacent(c.at(k), c.at(k + 1)));
      b.insert(std::set<Vertex>(c.vertices.begin(), c.vertices.end()));
    }
    EXPECT_EQ(a, b);
  }
}

TEST(GreatCycles, CyclicIndexing) {
  const auto c = great_cycles(gen(Family::GPrime, 2)).front();
  EXPECT_EQ(c.at(0), 0u);
  EXPECT_EQ(c.at(-1), c.vertices.back());
  EXPECT_EQ(c.at(14), c.at(0));
  EXPECT_EQ(c.index_of(1), 7u);
}

TEST(Distance, BlockedCycleGoesTheLongWay) {
  const auto g = gen(Family::Cycle, 14).graph;
  EXPECT_EQ(distance(g, 0, 1), 1u);
  VertexSet forbidden(14);
  forbidden.insert(1);
  const auto p = shortest_path(g, 0, 2, forbidden);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->size() - 1, 12u);
  const auto q = shortest_path(g, 0, 1, [] {
    VertexSet f(14);
    f.insert(13);
    return f;
  }());
  ASSERT_TRUE(q);
  EXPECT_EQ(q->size() - 1, 1u);
  VertexSet wall(14);
  wall.insert(1);
  wall.insert(13);
  EXPECT_FALSE(shortest_path(g, 0, 5, wall));
  EXPECT_FALSE(shortest_path(g, 1, 5, wall));
}

TEST(Distance, Unreachable) {
  const auto g = Graph::build(3, {{0, 1}});
  EXPECT_FALSE(distance(g, 0, 2));
  EXPECT_FALSE(is_connected(g));
}

TEST(EdgeList, ParseAndSerialize) {
  const auto g = parse_edge_list("2 1\n0 1\n");
  EXPECT_EQ(g, gen(Family::Path, 2).graph);
  EXPECT_EQ(serialize_edge_list(gen(Family::Star, 3).graph), "4 3\n0 1\n0 2\n0 3\n");
}

TEST(EdgeList, WrongEdgeCountReportsLine) {
  try {
    parse_edge_list("3 2\n0 1\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseErrc::WrongEdgeCount);
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(EdgeList, MalformedInput) {
  EXPECT_THROW(parse_edge_list(""), ParseError);
  EXPECT_THROW(parse_edge_list("2 1\n0 x\n"), ParseError);
  EXPECT_THROW(parse_edge_list("2 1\n0 0\n"), std::exception);
}

TEST(EdgeList, RoundTripsGeneratedFamilies) {
  for (auto [fam, p] : {std::pair{Family::GPrime, 4u}, std::pair{Family::G, 8u}, std::pair{Family::Complete, 5u}}) {
    const auto g = gen(fam, p).graph;
    EXPECT_EQ(parse_edge_list(serialize_edge_list(g)), g);
  }
}

TEST(EdgeList, LandmarksJsonRoundTrip) {
  const auto lm = *gen(Family::G, 6).landmarks;
  const auto back = landmarks_from_json(nlohmann::json::parse(landmarks_to_json(lm).dump()));
  EXPECT_EQ(back.paths, lm.paths);
  EXPECT_EQ(back.w, lm.w);
  EXPECT_EQ(back.u, lm.u);
  EXPECT_EQ(back.spec.family, Family::G);
}

TEST(Dot, ContainsEveryEdgeAndOverlay) {
  const auto g = gen(Family::Star, 3).graph;
  DotOverlay ov{0, {2, 2}, VertexSet(4)};
  ov.damaged.insert(3);
  const auto dot = export_dot(g, ov);
  EXPECT_NE(dot.find("0 -- 3;"), std::string::npos);
  EXPECT_NE(dot.find("R2"), std::string::npos);
  EXPECT_NE(dot.find("fillcolor=gray"), std::string::npos);
}

TEST(TriangleFree, GPrimeUpToEight) {
  for (std::size_t l = 2; l <= 8; ++l) {
    const auto g = gen(Family::GPrime, l).graph;
    EXPECT_TRUE(is_triangle_free(g));
    EXPECT_FALSE(dmg::testing::has_triangle_brute(g));
  }
  EXPECT_FALSE(is_triangle_free(gen(Family::G, 4).graph));
}

TEST(CentralEdge, IsAnEdge) {
  for (auto [fam, p] : {std::pair{Family::Path, 5u}, std::pair{Family::GPrime, 4u}, std::pair{Family::Star, 4u}}) {
    const auto g = gen(fam, p).graph;
    const auto e = central_edge(g);
    ASSERT_TRUE(e);
    EXPECT_TRUE(g.adjacent(e->first, e->second));
  }
  EXPECT_FALSE(central_edge(gen(Family::Path, 1).graph));
}
