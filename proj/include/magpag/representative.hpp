#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "magpag/equivalence.hpp"
#include "magpag/graph.hpp"
#include "magpag/mag_ops.hpp"

namespace magpag {

/// Undirected graph of the circle-circle edges of a partial graph. `host`
/// maps each component vertex to its index in the partial graph.
struct CircleComponent {
  MixedGraph graph;
  std::vector<Vertex> host;
};

inline CircleComponent circle_component(const MixedGraph& p) {
  std::vector<bool> touched(p.size(), false);
  std::vector<Edge> cc;
  for (const Edge& e : p.edges())
    if (e.at_u == Mark::Circle && e.at_v == Mark::Circle) {
      cc.push_back(e);
      touched[e.u] = touched[e.v] = true;
    }
  CircleComponent out;
  std::vector<std::string> labels;
  for (Vertex v = 0; v < p.size(); ++v)
    if (touched[v]) {
      out.host.push_back(v);
      labels.push_back(p.label(v));
    }
  MarkEditor editor = MarkEditor::empty(std::move(labels), GraphKind::Ug);
  auto local = [&](Vertex v) {
    return static_cast<Vertex>(std::lower_bound(out.host.begin(), out.host.end(), v) - out.host.begin());
  };
  for (const Edge& e : cc) editor.add_edge(local(e.u), local(e.v), Mark::Tail, Mark::Tail);
  out.graph = editor.finish();
  return out;
}

/// Maximum cardinality search. `seeds` are visited first, in the given
/// order; ties among the rest go to the smallest label.
inline std::vector<Vertex> mcs_order(const MixedGraph& g, const std::vector<Vertex>& seeds = {}) {
  const std::size_t n = g.size();
  std::vector<std::size_t> weight(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<Vertex> order;
  order.reserve(n);
  auto visit = [&](Vertex v) {
    visited[v] = true;
    order.push_back(v);
    for (Vertex u : g.neighbors(v))
      if (!visited[u]) ++weight[u];
  };
  for (Vertex s : seeds)
    if (!visited[s]) visit(s);
  while (order.size() < n) {
    Vertex best = n;
    for (Vertex v = 0; v < n; ++v)
      if (!visited[v] && (best == n || weight[v] > weight[best])) best = v;
    visit(best);
  }
  return order;
}

struct ChordalityResult {
  bool chordal = true;
  /// Chordless cycle of length >= 4, first vertex repeated at the end.
  std::vector<Vertex> witness;
};

namespace detail {

/// Chordless cycle through some vertex v and two nonadjacent neighbors a, b:
/// a shortest a-b path avoiding v's other neighbors closes it.
inline std::vector<Vertex> find_chordless_cycle(const MixedGraph& g) {
  const std::size_t n = g.size();
  for (Vertex v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        Vertex a = nb[i], b = nb[j];
        if (g.adjacent(a, b)) continue;
        std::vector<bool> blocked(n, false);
        blocked[v] = true;
        for (Vertex u : nb)
          if (u != a && u != b) blocked[u] = true;
        std::vector<Vertex> parent(n, n);
        std::deque<Vertex> queue{a};
        parent[a] = a;
        while (!queue.empty() && parent[b] == n) {
          Vertex u = queue.front();
          queue.pop_front();
          for (Vertex w : g.neighbors(u)) {
            if (blocked[w] || parent[w] != n) continue;
            if (u == a && w == b) continue;
            parent[w] = u;
            queue.push_back(w);
          }
        }
        if (parent[b] == n) continue;
        std::vector<Vertex> cycle{v};
        std::vector<Vertex> back;
        for (Vertex w = b; w != a; w = parent[w]) back.push_back(w);
        back.push_back(a);
        std::reverse(back.begin(), back.end());
        cycle.insert(cycle.end(), back.begin(), back.end());
        cycle.push_back(v);
        return cycle;
      }
  }
  return {};
}

}  // namespace detail

/// True when every cycle of length four or more has a chord: the neighbors
/// visited before each vertex in a maximum cardinality search form a clique.
inline ChordalityResult is_chordal(const MixedGraph& g) {
  auto order = mcs_order(g);
  std::vector<std::size_t> position(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  for (Vertex v : order) {
    std::vector<Vertex> earlier;
    for (Vertex u : g.neighbors(v))
      if (position[u] < position[v]) earlier.push_back(u);
    for (std::size_t i = 0; i < earlier.size(); ++i)
      for (std::size_t j = i + 1; j < earlier.size(); ++j)
        if (!g.adjacent(earlier[i], earlier[j])) return {false, detail::find_chordless_cycle(g)};
  }
  return {};
}

inline ChordalityResult is_chordal(const CircleComponent& c) { return is_chordal(c.graph); }

/// Orients a chordal undirected graph into a DAG without unshielded colliders
/// by directing every edge along a maximum cardinality search order. A forced
/// pair (a, b) seeds the search with a then b, so a --> b appears.
inline MixedGraph orient_no_collider_dag(const MixedGraph& ug, std::optional<std::pair<Vertex, Vertex>> forced = {}) {
  std::vector<Vertex> seeds;
  if (forced) {
    auto [a, b] = *forced;
    ug.require_vertex(a);
    ug.require_vertex(b);
    if (!ug.adjacent(a, b))
      throw GraphError(ErrorCode::ForcedPairNonadjacent, "'" + ug.label(a) + "' and '" + ug.label(b) + "'");
    seeds = {a, b};
  }
  if (!is_chordal(ug).chordal) throw GraphError(ErrorCode::NotChordal, "circle component has a chordless cycle");
  auto order = mcs_order(ug, seeds);
  std::vector<std::size_t> position(ug.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  MarkEditor editor(ug, GraphKind::Dag);
  for (const Edge& e : ug.edges()) {
    bool forward = position[e.u] < position[e.v];
    editor.set_edge_unchecked(e.u, e.v, forward ? Mark::Tail : Mark::Arrow, forward ? Mark::Arrow : Mark::Tail);
  }
  return editor.finish();
}

inline MixedGraph orient_no_collider_dag(const CircleComponent& c,
                                         std::optional<std::pair<Vertex, Vertex>> forced = {}) {
  return orient_no_collider_dag(c.graph, forced);
}

/// Representative MAG of a completed PAG. Circles opposite an arrowhead become
/// tails, circles opposite a tail become arrowheads, and the circle component
/// is oriented as a DAG without unshielded colliders. `forced` is an optional
/// circle-circle edge (host indices) that must come out as a --> b.
inline MixedGraph representative_mag(const MixedGraph& p, std::optional<std::pair<Vertex, Vertex>> forced = {}) {
  MarkEditor editor(p, GraphKind::Pmg);
  for (const Edge& e : p.edges()) {
    if (e.at_u == Mark::Circle && e.at_v == Mark::Arrow) editor.set_edge_unchecked(e.u, e.v, Mark::Tail, Mark::Arrow);
    if (e.at_v == Mark::Circle && e.at_u == Mark::Arrow) editor.set_edge_unchecked(e.u, e.v, Mark::Arrow, Mark::Tail);
    if (e.at_u == Mark::Circle && e.at_v == Mark::Tail) editor.set_edge_unchecked(e.u, e.v, Mark::Arrow, Mark::Tail);
    if (e.at_v == Mark::Circle && e.at_u == Mark::Tail) editor.set_edge_unchecked(e.u, e.v, Mark::Tail, Mark::Arrow);
  }
  CircleComponent cc = circle_component(p);
  std::optional<std::pair<Vertex, Vertex>> local;
  if (forced) {
    auto find_local = [&](Vertex v) -> Vertex {
      auto it = std::lower_bound(cc.host.begin(), cc.host.end(), v);
      if (it == cc.host.end() || *it != v)
        throw GraphError(ErrorCode::ForcedPairNonadjacent, "'" + p.label(v) + "' has no circle-circle edge");
      return static_cast<Vertex>(it - cc.host.begin());
    };
    local = std::pair{find_local(forced->first), find_local(forced->second)};
  }
  if (!is_chordal(cc).chordal) throw GraphError(ErrorCode::NotChordal, "circle component has a chordless cycle");
  MixedGraph dag = orient_no_collider_dag(cc, local);
  for (const Edge& e : dag.edges()) editor.set_edge_unchecked(cc.host[e.u], cc.host[e.v], e.at_u, e.at_v);

  MixedGraph h = MarkEditor(editor.finish(), GraphKind::Mag).finish();
  if (h.has_circles() || !is_mag(h)) throw GraphError(ErrorCode::ResultNotMag, "representative is not a MAG");
  return h;
}

}  // namespace magpag
