#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "magpag/mag_ops.hpp"
#include "magpag/msep.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace magpag;
namespace mt = magpag::testing;
using magpag::testing::graph;

namespace {

std::vector<std::string> witness(const MixedGraph& g, const Violation& v) { return labels_of(g, v.witness); }

/// d-separation in the DAG given Sel and Z against m-separation in the MAG
/// given Z, over all observed queries.
void expect_projection_preserves_separation(const DagSpec& spec, const MixedGraph& mag) {
  const MixedGraph& dag = spec.dag;
  const std::size_t n = mag.size();
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y)
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        if ((mask >> x) & 1 || (mask >> y) & 1) continue;
        VertexSet z(n);
        std::vector<bool> dz(dag.size(), false);
        for (Vertex s : spec.selection.members()) dz[s] = true;
        for (Vertex v = 0; v < n; ++v)
          if ((mask >> v) & 1) {
            z.insert(v);
            dz[dag.index_of(mag.label(v))] = true;
          }
        ASSERT_EQ(m_connecting_exists(mag, x, y, z),
                  mt::m_connected(dag, dag.index_of(mag.label(x)), dag.index_of(mag.label(y)), dz))
            << serialize_graph(dag);
      }
}

}  // namespace

TEST(CheckAncestral, DirectedCycle) {
  MixedGraph g = graph("mag\nA --> B\nB --> C\nC --> A\n");
  ValidationReport r = check_ancestral(g);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].code, ViolationCode::DirectedCycle);
  EXPECT_EQ(witness(g, r.violations[0]), (std::vector<std::string>{"A", "B", "C", "A"}));
}

TEST(CheckAncestral, AlmostDirectedCycle) {
  MixedGraph g = graph("mag\nA --> B\nB --> C\nA <-> C\n");
  ValidationReport r = check_ancestral(g);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].code, ViolationCode::AlmostDirectedCycle);
  EXPECT_EQ(witness(g, r.violations[0]), (std::vector<std::string>{"A", "B", "C", "A"}));
}

TEST(CheckAncestral, ArrowIntoUndirectedComponent) {
  MixedGraph g = graph("mag\nA --- B\nC --> B\n");
  ValidationReport r = check_ancestral(g);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].code, ViolationCode::ArrowIntoUndirectedComponent);
  EXPECT_EQ(witness(g, r.violations[0]), (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(describe(g, r.violations[0]), "ArrowIntoUndirectedComponent A,B,C");
}

TEST(CheckAncestral, WitnessesRecheck) {
  for (const MixedGraph& g : mt::orientations(graph("ug\nA --- B\nB --- C\nC --- A\nC --- D\n"))) {
    auto reach = mt::directed_closure(g);
    bool cyclic = false, almost = false, into_undirected = false;
    for (Vertex u = 0; u < g.size(); ++u)
      for (Vertex v : g.neighbors(u)) {
        cyclic = cyclic || (g.is_directed(u, v) && reach[v][u]);
        almost = almost || (g.is_bidirected(u, v) && reach[u][v]);
        if (g.is_undirected(u, v))
          for (Vertex w : g.neighbors(u)) into_undirected = into_undirected || g.mark(u, w) == Mark::Arrow;
      }
    ValidationReport r = check_ancestral(g);
    EXPECT_EQ(r.ok(), !cyclic && !almost && !into_undirected);
    for (const Violation& v : r.violations) {
      const auto& w = v.witness;
      switch (v.code) {
        case ViolationCode::DirectedCycle:
          ASSERT_EQ(w.front(), w.back());
          for (std::size_t i = 0; i + 1 < w.size(); ++i) EXPECT_TRUE(g.is_directed(w[i], w[i + 1]));
          break;
        case ViolationCode::AlmostDirectedCycle:
          for (std::size_t i = 0; i + 2 < w.size(); ++i) EXPECT_TRUE(g.is_directed(w[i], w[i + 1]));
          EXPECT_TRUE(g.is_bidirected(w[w.size() - 2], w.back()));
          break;
        case ViolationCode::ArrowIntoUndirectedComponent:
          EXPECT_TRUE(g.is_undirected(w[0], w[1]));
          EXPECT_EQ(g.mark(w[1], w[2]), Mark::Arrow);
          break;
        default: ADD_FAILURE();
      }
    }
  }
}

TEST(CheckAncestral, RejectsCircles) {
  EXPECT_GRAPH_ERROR(check_ancestral(graph("pmg\nA o-> B\n")), ErrorCode::PartialGraphUnsupported);
}

TEST(CheckMaximal, InducingFixture) {
  MixedGraph g = mt::fixture("inducing.mag");
  ASSERT_TRUE(check_ancestral(g).ok());
  ValidationReport r = check_maximal(g);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].code, ViolationCode::MissingSeparator);
  EXPECT_EQ(witness(g, r.violations[0]), (std::vector<std::string>{"C", "A", "B", "D"}));
  EXPECT_TRUE(is_inducing_path(g, Path{r.violations[0].witness}));
}

TEST(CheckMaximal, ChainAndCompletedFixture) {
  EXPECT_TRUE(check_maximal(mt::fixture("chain.mag")).ok());
  MixedGraph g = graph(mt::fixture_text("inducing.mag") + "C <-> D\n");
  EXPECT_TRUE(check_maximal(g).ok());
  EXPECT_TRUE(is_mag(g));
}

TEST(CheckMaximal, RequiresAncestral) {
  EXPECT_GRAPH_ERROR(check_maximal(graph("mag\nA --> B\nB --> C\nC --> A\n")), ErrorCode::NotAncestral);
}

TEST(Completion, InducingFixtureGainsBidirectedEdge) {
  MixedGraph g = mt::fixture("inducing.mag");
  MixedGraph h = maximal_completion(g);
  EXPECT_EQ(h, graph(mt::fixture_text("inducing.mag") + "C <-> D\n"));
  EXPECT_GRAPH_ERROR(maximal_completion(graph("mag\nA --> B\nB --> C\nC --> A\n")), ErrorCode::NotAncestral);
}

TEST(Completion, MaximalGraphUnchanged) {
  for (const MixedGraph& g : mt::all_mags(3)) EXPECT_EQ(maximal_completion(g), g);
}

TEST(Completion, IndependentOfScanOrder) {
  // Ancestral but non-maximal orientations of every 4-vertex skeleton.
  std::mt19937_64 rng(5);
  std::size_t nonmaximal = 0;
  for (const MixedGraph& skeleton : mt::all_skeletons(4))
    for (const MixedGraph& g : mt::orientations(skeleton)) {
      if (!check_ancestral(g).ok() || is_mag(g)) continue;
      ++nonmaximal;
      MixedGraph reference = maximal_completion(g);
      ASSERT_TRUE(is_mag(reference)) << serialize_graph(g);
      std::vector<VertexPair> order;
      for (Vertex u = 0; u < g.size(); ++u)
        for (Vertex v = u + 1; v < g.size(); ++v) order.emplace_back(u, v);
      for (int k = 0; k < 10; ++k) {
        std::shuffle(order.begin(), order.end(), rng);
        EXPECT_EQ(maximal_completion(g, order), reference) << serialize_graph(g);
      }
    }
  EXPECT_GT(nonmaximal, 10u);
}

TEST(ProjectDag, DrugTrial) {
  MixedGraph dag = mt::fixture("drug_trial.dag");
  DagSpec spec{dag, vertex_set(dag, {"H"}), vertex_set(dag, {"Sel"})};
  MixedGraph g = project_dag(spec);
  EXPECT_EQ(g, graph("mag\nA --- Ef\nEf --> R\nA --> R\n"));
  expect_projection_preserves_separation(spec, g);
}

TEST(ProjectDag, IdentityWithoutLatentsOrSelection) {
  MixedGraph dag = graph("dag\nA --> B\nB --> C\nA --> C\nnode D\n");
  MixedGraph g = project_dag({dag, VertexSet(4), VertexSet(4)});
  EXPECT_EQ(g.kind(), GraphKind::Mag);
  EXPECT_TRUE(g.same_marks(dag));
}

TEST(ProjectDag, Confounder) {
  MixedGraph dag = graph("dag\nL --> A\nL --> B\n");
  EXPECT_EQ(project_dag({dag, vertex_set(dag, {"L"}), VertexSet(3)}), graph("mag\nA <-> B\n"));
}

TEST(ProjectDag, Errors) {
  MixedGraph dag = graph("dag\nA --> B\n");
  EXPECT_GRAPH_ERROR(project_dag({dag, VertexSet(2, {0}), VertexSet(2, {0})}), ErrorCode::InvalidSpec);
  EXPECT_GRAPH_ERROR(project_dag({dag, VertexSet(5), VertexSet(2)}), ErrorCode::InvalidSpec);
  MixedGraph mixed = graph("mag\nA <-> B\n");
  EXPECT_GRAPH_ERROR(project_dag({mixed, VertexSet(2), VertexSet(2)}), ErrorCode::InvalidSpec);
  MixedGraph cyclic = graph("dag\nA --> B\nB --> C\nC --> A\n");
  EXPECT_GRAPH_ERROR(project_dag({cyclic, VertexSet(3), VertexSet(3)}), ErrorCode::CyclicInput);
}

TEST(ProjectDag, RandomSpecsMatchDefinition) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    DagSpec spec = random_dag_spec(4 + seed % 3, 3 + seed % 6, 0.3, seed);
    MixedGraph g = project_dag(spec);
    ASSERT_TRUE(is_mag(g)) << serialize_graph(spec.dag);
    EXPECT_FALSE(g.has_circles());
    auto reach = mt::directed_closure(spec.dag);
    for (Vertex i = 0; i < g.size(); ++i)
      for (Vertex j = 0; j < g.size(); ++j) {
        if (i == j) continue;
        Vertex di = spec.dag.index_of(g.label(i)), dj = spec.dag.index_of(g.label(j));
        bool adj = mt::dag_inducing_oracle(spec.dag, di, dj, spec.latent, spec.selection);
        ASSERT_EQ(g.adjacent(i, j), adj) << serialize_graph(spec.dag);
        if (!adj) continue;
        bool tail = reach[di][dj];
        for (Vertex s : spec.selection.members()) tail = tail || reach[di][s];
        EXPECT_EQ(g.mark(i, j) == Mark::Tail, tail);
      }
    expect_projection_preserves_separation(spec, g);
  }
}

TEST(RandomMag, Examples) {
  MixedGraph g = random_mag(4, 4, 0.0, 1);
  for (const Edge& e : g.edges()) EXPECT_FALSE(g.is_undirected(e.u, e.v));
  MixedGraph h = random_mag(5, 6, 0.3, 7);
  EXPECT_TRUE(check_ancestral(h).ok());
  EXPECT_TRUE(check_maximal(h).ok());
  EXPECT_EQ(random_mag(5, 6, 0.3, 7), h);
}

TEST(RandomMag, NoSelectionMeansNoUndirectedEdges) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    MixedGraph g = random_mag(6, 8, 0.0, seed);
    EXPECT_TRUE(is_mag(g));
    for (const Edge& e : g.edges()) EXPECT_FALSE(g.is_undirected(e.u, e.v)) << seed;
  }
}

TEST(RandomMag, InfeasibleParams) {
  EXPECT_GRAPH_ERROR(random_mag(3, 4, 0.0, 1), ErrorCode::InfeasibleParams);
  EXPECT_GRAPH_ERROR(random_mag(0, 0, 0.0, 1), ErrorCode::InfeasibleParams);
  EXPECT_GRAPH_ERROR(random_mag(3, 2, 1.5, 1), ErrorCode::InfeasibleParams);
}
