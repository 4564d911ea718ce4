#include <gtest/gtest.h>

#include <random>

#include "magpag/mag_ops.hpp"
#include "magpag/msep.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace magpag;
namespace mt = magpag::testing;
using magpag::testing::graph;

namespace {

VertexSet given(const MixedGraph& g, std::vector<std::string> labels) { return vertex_set(g, labels); }

std::vector<bool> as_bools(const VertexSet& z) {
  std::vector<bool> out(z.universe());
  for (Vertex v = 0; v < z.universe(); ++v) out[v] = z.contains(v);
  return out;
}

/// Every (x, y, Z) query on g with x < y.
template <class F>
void for_each_query(const MixedGraph& g, F f) {
  const std::size_t n = g.size();
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y)
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        if ((mask >> x) & 1 || (mask >> y) & 1) continue;
        VertexSet z(n);
        for (Vertex v = 0; v < n; ++v)
          if ((mask >> v) & 1) z.insert(v);
        f(x, y, z);
      }
}

}  // namespace

TEST(MConnecting, Chain) {
  MixedGraph g = mt::fixture("chain.mag");
  Vertex a = g.index_of("A"), c = g.index_of("C");
  EXPECT_FALSE(m_connecting_exists(g, a, c, given(g, {"B"})));
  EXPECT_TRUE(m_connecting_exists(g, a, c, given(g, {})));
}

TEST(MConnecting, InducingFixtureNeverSeparated) {
  MixedGraph g = mt::fixture("inducing.mag");
  Vertex c = g.index_of("C"), d = g.index_of("D");
  for (auto s : std::vector<std::vector<std::string>>{{}, {"A"}, {"B"}, {"A", "B"}}) {
    EXPECT_TRUE(m_connecting_exists(g, c, d, given(g, s)));
    EXPECT_TRUE(msep_oracle(g, c, d, given(g, s)));
  }
}

TEST(MConnecting, ColliderOpensUnderConditioning) {
  MixedGraph g = mt::fixture("collider.mag");
  Vertex a = g.index_of("A"), c = g.index_of("C");
  EXPECT_FALSE(m_connecting_exists(g, a, c, given(g, {})));
  EXPECT_TRUE(m_connecting_exists(g, a, c, given(g, {"B"})));
}

TEST(MConnecting, DescendantOfColliderOpensIt) {
  MixedGraph g = graph("mag\nA --> B\nC --> B\nB --> D\n");
  EXPECT_TRUE(m_connecting_exists(g, g.index_of("A"), g.index_of("C"), given(g, {"D"})));
}

TEST(MConnecting, Errors) {
  MixedGraph g = mt::fixture("chain.mag");
  EXPECT_GRAPH_ERROR(m_connecting_exists(g, 0, 2, VertexSet(3, {0})), ErrorCode::OverlappingSets);
  EXPECT_GRAPH_ERROR(m_connecting_exists(g, 0, 0, VertexSet(3)), ErrorCode::OverlappingSets);
  EXPECT_GRAPH_ERROR(m_connecting_exists(g, 0, 5, VertexSet(3)), ErrorCode::UnknownVertex);
}

TEST(MSeparated, SetQueries) {
  MixedGraph g = mt::fixture("chain.mag");
  EXPECT_TRUE(m_separated(g, given(g, {"A"}), given(g, {"C"}), given(g, {"B"})));
  EXPECT_FALSE(m_separated(g, given(g, {"A"}), given(g, {"B", "C"}), given(g, {})));
  EXPECT_GRAPH_ERROR(m_separated(g, given(g, {"A"}), given(g, {"A", "C"}), given(g, {})), ErrorCode::OverlappingSets);
  EXPECT_GRAPH_ERROR(m_separated(g, given(g, {}), given(g, {"C"}), given(g, {})), ErrorCode::OverlappingSets);
}

TEST(MSeparated, DrugTrialProjectionKeepsACorrelatedWithR) {
  MixedGraph dag = mt::fixture("drug_trial.dag");
  MixedGraph g = project_dag({dag, vertex_set(dag, {"H"}), vertex_set(dag, {"Sel"})});
  EXPECT_FALSE(m_separated(g, given(g, {"A"}), given(g, {"R"}), given(g, {})));
}

TEST(Oracle, CapExceeded) {
  MixedGraph g = random_mag(11, 12, 0.0, 3);
  EXPECT_GRAPH_ERROR(msep_oracle(g, 0, 1, VertexSet(11)), ErrorCode::CapExceeded);
  EXPECT_NO_THROW(msep_oracle(g, 0, 1, VertexSet(11), 11));
}

TEST(Oracle, AgreesOnChainAndFixtures) {
  for (const char* name : {"chain.mag", "collider.mag", "inducing.mag", "discriminating.mag", "cycle4.mag",
                           "pendant.mag"}) {
    MixedGraph g = mt::fixture(name);
    for_each_query(g, [&](Vertex x, Vertex y, const VertexSet& z) {
      EXPECT_EQ(m_connecting_exists(g, x, y, z), msep_oracle(g, x, y, z)) << name;
    });
  }
}

TEST(Oracle, AgreesOnRandomMagsUpToSixVertices) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::size_t n = 3 + seed % 4;
    MixedGraph g = random_mag(n, std::min<std::size_t>(2 + seed % 6, n * (n - 1) / 2), seed % 3 ? 0.0 : 0.3, seed);
    for_each_query(g, [&](Vertex x, Vertex y, const VertexSet& z) {
      bool engine = m_connecting_exists(g, x, y, z);
      ASSERT_EQ(engine, msep_oracle(g, x, y, z)) << serialize_graph(g);
      ASSERT_EQ(engine, mt::m_connected(g, x, y, as_bools(z))) << serialize_graph(g);
      ASSERT_EQ(engine, m_connecting_exists(g, y, x, z));
    });
  }
}

TEST(Oracle, AgreesOnNonMaximalAndNonAncestralGraphs) {
  // The engine is defined for any mark-complete graph, not only MAGs.
  for (const MixedGraph& g : mt::orientations(graph("ug\nA --- B\nB --- C\nC --- D\nA --- C\n")))
    for_each_query(g, [&](Vertex x, Vertex y, const VertexSet& z) {
      ASSERT_EQ(m_connecting_exists(g, x, y, z), msep_oracle(g, x, y, z)) << serialize_graph(g);
    });
}

TEST(Oracle, RandomSevenVertexQueries) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 60; ++round) {
    MixedGraph g = random_mag(7, 6 + round % 10, round % 2 ? 0.3 : 0.0, rng());
    for (int q = 0; q < 30; ++q) {
      Vertex x = rng() % 7, y = rng() % 7;
      if (x == y) continue;
      VertexSet z(7);
      for (Vertex v = 0; v < 7; ++v)
        if (v != x && v != y && rng() % 3 == 0) z.insert(v);
      ASSERT_EQ(m_connecting_exists(g, x, y, z), msep_oracle(g, x, y, z));
    }
  }
}

TEST(Properties, AdjacentNeverSeparated) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    MixedGraph g = random_mag(5, 6, 0.3, seed);
    for_each_query(g, [&](Vertex x, Vertex y, const VertexSet& z) {
      if (g.adjacent(x, y)) EXPECT_TRUE(m_connecting_exists(g, x, y, z));
    });
  }
}

TEST(Properties, NoSeparatorIffInducingPath) {
  // For ancestral graphs: nonadjacent x, y have no separating set exactly
  // when an inducing path joins them.
  std::vector<MixedGraph> graphs;
  for (const MixedGraph& g : mt::all_skeletons(4))
    for (const MixedGraph& h : mt::orientations(g))
      if (check_ancestral(h).ok()) graphs.push_back(h);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    // Removing edges keeps a graph ancestral and usually breaks maximality.
    MixedGraph g = random_mag(5 + seed % 2, 6 + seed % 5, 0.3, seed);
    auto edges = g.edges();
    if (edges.empty()) continue;
    MarkEditor editor = MarkEditor::empty(g.labels(), GraphKind::Mag);
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (i % 3 != seed % 3) editor.add_edge(edges[i].u, edges[i].v, edges[i].at_u, edges[i].at_v);
    graphs.push_back(editor.finish());
  }
  for (const MixedGraph& g : graphs) {
    ASSERT_TRUE(check_ancestral(g).ok());
    const std::size_t n = g.size();
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = x + 1; y < n; ++y) {
        if (g.adjacent(x, y)) continue;
        bool separable = false;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n) && !separable; ++mask) {
          if ((mask >> x) & 1 || (mask >> y) & 1) continue;
          std::vector<bool> z(n);
          for (Vertex v = 0; v < n; ++v) z[v] = (mask >> v) & 1;
          separable = !mt::m_connected(g, x, y, z);
        }
        bool inducing = false;
        for (const Path& p : all_simple_paths(g, x, y)) inducing = inducing || is_inducing_path(g, p);
        ASSERT_EQ(separable, !inducing) << serialize_graph(g);
        EXPECT_EQ(find_inducing_path(g, x, y).has_value(), inducing);
      }
  }
}
