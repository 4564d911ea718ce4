#pragma once

#include <deque>
#include <vector>

#include "magpag/graph.hpp"
#include "magpag/paths.hpp"

namespace magpag {

namespace detail {

inline void require_separation_query(const MixedGraph& g, Vertex x, Vertex y, const VertexSet& z) {
  g.require_vertex(x);
  g.require_vertex(y);
  if (z.universe() != g.size()) throw GraphError(ErrorCode::UnknownVertex, "conditioning set over another graph");
  if (x == y) throw GraphError(ErrorCode::OverlappingSets, "x and y are the same vertex '" + g.label(x) + "'");
  if (z.contains(x) || z.contains(y))
    throw GraphError(ErrorCode::OverlappingSets, "endpoint inside the conditioning set");
}

}  // namespace detail

/// Decides whether an m-connecting path between x and y relative to z exists.
///
/// Searches walks over states (vertex, whether the edge we arrived on has an
/// arrowhead at that vertex). A vertex may be passed as a collider when it has
/// a descendant in z and as a non-collider when it is outside z; the walk form
/// is equivalent to the path form for m-separation.
inline bool m_connecting_exists(const MixedGraph& g, Vertex x, Vertex y, const VertexSet& z) {
  detail::require_separation_query(g, x, y, z);
  if (g.has_circles()) throw GraphError(ErrorCode::PartialGraphUnsupported, "m-separation on a graph with circles");
  const std::size_t n = g.size();
  VertexSet an_z = ancestors_of(g, z);

  std::vector<char> seen(2 * n, 0);
  std::deque<std::pair<Vertex, bool>> queue;
  auto push = [&](Vertex v, bool into) {
    char& s = seen[2 * v + (into ? 1 : 0)];
    if (!s) {
      s = 1;
      queue.emplace_back(v, into);
    }
  };
  for (Vertex u : g.neighbors(x)) push(u, g.mark(u, x) == Mark::Arrow);

  while (!queue.empty()) {
    auto [w, into] = queue.front();
    queue.pop_front();
    if (w == y) return true;
    if (w == x) continue;  // walks through x restart from x
    for (Vertex u : g.neighbors(w)) {
      bool collider = into && g.mark(w, u) == Mark::Arrow;
      if (collider ? !an_z.contains(w) : z.contains(w)) continue;
      push(u, g.mark(u, w) == Mark::Arrow);
    }
  }
  return false;
}

/// Set-level m-separation: every x in xs is separated from every y in ys.
inline bool m_separated(const MixedGraph& g, const VertexSet& xs, const VertexSet& ys, const VertexSet& z) {
  if (xs.empty() || ys.empty()) throw GraphError(ErrorCode::OverlappingSets, "empty endpoint set");
  if (xs.intersects(ys) || xs.intersects(z) || ys.intersects(z))
    throw GraphError(ErrorCode::OverlappingSets, "query sets are not disjoint");
  for (Vertex x : xs.members())
    for (Vertex y : ys.members())
      if (m_connecting_exists(g, x, y, z)) return false;
  return true;
}

inline constexpr std::size_t kDefaultOracleVertexCap = 10;

/// Reference for m_connecting_exists: enumerates every simple path between x
/// and y and tests the two activity clauses literally. True when one is active.
inline bool msep_oracle(const MixedGraph& g, Vertex x, Vertex y, const VertexSet& z,
                        std::size_t vertex_cap = kDefaultOracleVertexCap) {
  if (g.size() > vertex_cap)
    throw GraphError(ErrorCode::CapExceeded,
                     std::to_string(g.size()) + " vertices exceeds oracle cap " + std::to_string(vertex_cap));
  detail::require_separation_query(g, x, y, z);
  for (const Path& p : all_simple_paths(g, x, y)) {
    bool active = true;
    const auto& vs = p.vertices;
    for (std::size_t i = 1; active && i + 1 < vs.size(); ++i) {
      Vertex v = vs[i];
      if (is_collider(g, vs[i - 1], v, vs[i + 1])) {
        active = descendants_of(g, v).intersects(z);
      } else {
        active = !z.contains(v);
      }
    }
    if (active) return true;
  }
  return false;
}

}  // namespace magpag
