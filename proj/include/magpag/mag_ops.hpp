#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "magpag/graph.hpp"
#include "magpag/paths.hpp"

namespace magpag {

enum class ViolationCode {
  DirectedCycle,
  AlmostDirectedCycle,
  ArrowIntoUndirectedComponent,
  MissingSeparator,
  CircleMarkPresent,
};

inline const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::DirectedCycle: return "DirectedCycle";
    case ViolationCode::AlmostDirectedCycle: return "AlmostDirectedCycle";
    case ViolationCode::ArrowIntoUndirectedComponent: return "ArrowIntoUndirectedComponent";
    case ViolationCode::MissingSeparator: return "MissingSeparator";
    case ViolationCode::CircleMarkPresent: return "CircleMarkPresent";
  }
  return "Unknown";
}

enum class WitnessKind { Cycle, Path, Triple, Edge };

/// One failed condition. Cycles repeat their first vertex at the end; triples
/// are <neighbor, vertex, vertex with the arrowhead edge>.
struct Violation {
  ViolationCode code;
  WitnessKind witness_kind;
  std::vector<Vertex> witness;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

inline std::string describe(const MixedGraph& g, const Violation& v) {
  return std::string(to_string(v.code)) + " " + describe(g, v.witness);
}

/// Shortest directed path from `from` to `to` (both included), if any.
inline std::optional<std::vector<Vertex>> directed_path(const MixedGraph& g, Vertex from, Vertex to) {
  std::vector<Vertex> parent(g.size(), g.size());
  std::vector<bool> seen(g.size(), false);
  std::deque<Vertex> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    if (v == to) {
      std::vector<Vertex> out;
      for (Vertex w = to; w != from; w = parent[w]) out.push_back(w);
      out.push_back(from);
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (Vertex u : g.neighbors(v))
      if (!seen[u] && g.is_directed(v, u)) {
        seen[u] = true;
        parent[u] = v;
        queue.push_back(u);
      }
  }
  return std::nullopt;
}

namespace detail {

inline void require_no_circles(const MixedGraph& g, const char* what) {
  if (g.has_circles()) throw GraphError(ErrorCode::PartialGraphUnsupported, std::string(what) + " on a graph with circles");
}

inline std::vector<Vertex> canonical_cycle(std::vector<Vertex> cycle) {
  cycle.pop_back();
  auto min_it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), min_it, cycle.end());
  cycle.push_back(cycle.front());
  return cycle;
}

}  // namespace detail

/// Reports directed cycles, almost directed cycles and arrowheads into
/// vertices that have undirected edges.
inline ValidationReport check_ancestral(const MixedGraph& g) {
  detail::require_no_circles(g, "ancestrality check");
  ValidationReport report;

  std::set<std::vector<Vertex>> cycles;
  for (const Edge& e : g.edges()) {
    for (auto [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      if (!g.is_directed(u, v)) continue;
      if (auto back = directed_path(g, v, u)) {
        std::vector<Vertex> cycle{u};
        cycle.insert(cycle.end(), back->begin(), back->end());
        cycles.insert(detail::canonical_cycle(std::move(cycle)));
      }
    }
  }
  for (const auto& c : cycles) report.violations.push_back({ViolationCode::DirectedCycle, WitnessKind::Cycle, c});

  for (const Edge& e : g.edges()) {
    if (!g.is_bidirected(e.u, e.v)) continue;
    for (auto [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      if (auto path = directed_path(g, u, v)) {
        std::vector<Vertex> cycle = *path;
        cycle.push_back(u);
        report.violations.push_back({ViolationCode::AlmostDirectedCycle, WitnessKind::Cycle, std::move(cycle)});
      }
    }
  }

  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v : g.neighbors(u)) {
      if (!g.is_undirected(u, v)) continue;
      for (Vertex w : g.neighbors(u))
        if (g.mark(u, w) == Mark::Arrow)
          report.violations.push_back(
              {ViolationCode::ArrowIntoUndirectedComponent, WitnessKind::Triple, {v, u, w}});
    }
  }
  return report;
}

/// An inducing path between x and y, if one exists. Uses a walk search over
/// (vertex, arrived-with-arrowhead) states restricted to colliders that are
/// ancestors of x or y, then erases loops; loop erasure keeps every interior
/// vertex a collider.
inline std::optional<Path> find_inducing_path(const MixedGraph& g, Vertex x, Vertex y) {
  detail::require_no_circles(g, "inducing path search");
  g.require_vertex(x);
  g.require_vertex(y);
  if (x == y) return std::nullopt;
  if (g.adjacent(x, y)) return Path{{x, y}};
  const std::size_t n = g.size();
  VertexSet an = ancestors_of(g, VertexSet(n, {x, y}));

  const std::size_t none = 2 * n;
  std::vector<std::size_t> parent(2 * n, none);
  std::vector<bool> seen(2 * n, false);
  std::deque<std::size_t> queue;
  auto state = [](Vertex v, bool into) { return 2 * v + (into ? 1 : 0); };
  for (Vertex u : g.neighbors(x)) {
    std::size_t s = state(u, g.mark(u, x) == Mark::Arrow);
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  std::optional<std::size_t> hit;
  while (!queue.empty() && !hit) {
    std::size_t s = queue.front();
    queue.pop_front();
    Vertex w = s / 2;
    bool into = s % 2;
    if (!into || !an.contains(w)) continue;
    for (Vertex u : g.neighbors(w)) {
      if (u == x || g.mark(w, u) != Mark::Arrow) continue;
      std::size_t t = state(u, g.mark(u, w) == Mark::Arrow);
      if (seen[t]) continue;
      seen[t] = true;
      parent[t] = s;
      if (u == y) {
        hit = t;
        break;
      }
      queue.push_back(t);
    }
  }
  if (!hit) return std::nullopt;

  std::vector<Vertex> walk;
  for (std::size_t s = *hit; s != none; s = parent[s]) walk.push_back(s / 2);
  walk.push_back(x);
  std::reverse(walk.begin(), walk.end());

  std::vector<Vertex> path;
  std::vector<std::size_t> position(n, n);
  for (Vertex v : walk) {
    if (position[v] != n) {
      for (std::size_t i = position[v] + 1; i < path.size(); ++i) position[path[i]] = n;
      path.resize(position[v] + 1);
    } else {
      position[v] = path.size();
      path.push_back(v);
    }
  }
  return Path{std::move(path)};
}

/// Reports each nonadjacent pair joined by an inducing path.
inline ValidationReport check_maximal(const MixedGraph& g) {
  if (!check_ancestral(g).ok()) throw GraphError(ErrorCode::NotAncestral, "maximality requires an ancestral graph");
  ValidationReport report;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      if (!g.adjacent(u, v))
        if (auto p = find_inducing_path(g, u, v))
          report.violations.push_back({ViolationCode::MissingSeparator, WitnessKind::Path, p->vertices});
  return report;
}

inline bool is_mag(const MixedGraph& g) {
  return !g.has_circles() && check_ancestral(g).ok() && check_maximal(g).ok();
}

using VertexPair = std::pair<Vertex, Vertex>;

/// Adds bidirected edges between nonadjacent pairs joined by an inducing
/// path until none remain. `scan_order` lists the pairs in the order they are
/// examined on every rescan; empty means label order.
inline MixedGraph maximal_completion(const MixedGraph& g, std::span<const VertexPair> scan_order = {}) {
  if (!check_ancestral(g).ok()) throw GraphError(ErrorCode::NotAncestral, "completion requires an ancestral graph");
  std::vector<VertexPair> order(scan_order.begin(), scan_order.end());
  if (order.empty())
    for (Vertex u = 0; u < g.size(); ++u)
      for (Vertex v = u + 1; v < g.size(); ++v) order.emplace_back(u, v);

  MarkEditor editor(g, g.kind() == GraphKind::Pmg ? GraphKind::Pmg : GraphKind::Mag);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [u, v] : order) {
      const MixedGraph& cur = editor.view();
      if (u == v || cur.adjacent(u, v)) continue;
      if (find_inducing_path(cur, u, v)) {
        editor.add_edge(u, v, Mark::Arrow, Mark::Arrow);
        changed = true;
        break;
      }
    }
  }
  MixedGraph out = editor.finish();
  if (!check_ancestral(out).ok())
    throw GraphError(ErrorCode::CompletionBrokeAncestrality, "added bidirected edges created an ancestral violation");
  return out;
}

/// A DAG over observed, latent and selection variables.
struct DagSpec {
  MixedGraph dag;
  VertexSet latent;
  VertexSet selection;
};

namespace detail {

/// Inducing path relative to <latent, selection> in a DAG: interior vertices
/// are latent non-colliders or colliders that are ancestors of the endpoints
/// or of the selection set.
inline bool dag_inducing_path_exists(const MixedGraph& dag, Vertex a, Vertex b, const VertexSet& latent,
                                     const VertexSet& selection) {
  if (dag.adjacent(a, b)) return true;
  const std::size_t n = dag.size();
  VertexSet targets = selection;
  targets.insert(a);
  targets.insert(b);
  VertexSet an = ancestors_of(dag, targets);
  std::vector<bool> seen(2 * n, false);
  std::deque<std::pair<Vertex, bool>> queue;
  auto push = [&](Vertex v, bool into) {
    if (!seen[2 * v + into]) {
      seen[2 * v + into] = true;
      queue.emplace_back(v, into);
    }
  };
  for (Vertex u : dag.neighbors(a)) push(u, dag.mark(u, a) == Mark::Arrow);
  while (!queue.empty()) {
    auto [w, into] = queue.front();
    queue.pop_front();
    if (w == b) return true;
    for (Vertex u : dag.neighbors(w)) {
      if (u == a) continue;
      bool collider = into && dag.mark(w, u) == Mark::Arrow;
      if (collider ? !an.contains(w) : !latent.contains(w)) continue;
      push(u, dag.mark(u, w) == Mark::Arrow);
    }
  }
  return false;
}

}  // namespace detail

/// Marginalizes latent and conditions on selection variables of a DAG,
/// yielding the MAG over the observed variables.
inline MixedGraph project_dag(const DagSpec& spec) {
  const MixedGraph& dag = spec.dag;
  const std::size_t n = dag.size();
  if (spec.latent.universe() != n || spec.selection.universe() != n)
    throw GraphError(ErrorCode::InvalidSpec, "latent/selection sets over another graph");
  if (spec.latent.intersects(spec.selection)) throw GraphError(ErrorCode::InvalidSpec, "latent and selection overlap");
  for (const Edge& e : dag.edges()) {
    bool forward = dag.is_directed(e.u, e.v);
    if (!forward && !dag.is_directed(e.v, e.u))
      throw GraphError(ErrorCode::InvalidSpec,
                       "non-directed edge '" + dag.label(e.u) + "' - '" + dag.label(e.v) + "'");
    Vertex from = forward ? e.u : e.v, to = forward ? e.v : e.u;
    if (directed_path(dag, to, from))
      throw GraphError(ErrorCode::CyclicInput, "cycle through '" + dag.label(from) + "'");
  }

  std::vector<Vertex> observed;
  for (Vertex v = 0; v < n; ++v)
    if (!spec.latent.contains(v) && !spec.selection.contains(v)) observed.push_back(v);

  std::vector<std::string> labels = labels_of(dag, observed);
  MarkEditor editor = MarkEditor::empty(labels, GraphKind::Mag);
  for (std::size_t i = 0; i < observed.size(); ++i) {
    for (std::size_t j = i + 1; j < observed.size(); ++j) {
      Vertex a = observed[i], b = observed[j];
      if (!detail::dag_inducing_path_exists(dag, a, b, spec.latent, spec.selection)) continue;
      VertexSet to_b = spec.selection;
      to_b.insert(b);
      VertexSet to_a = spec.selection;
      to_a.insert(a);
      Mark at_a = ancestors_of(dag, to_b).contains(a) ? Mark::Tail : Mark::Arrow;
      Mark at_b = ancestors_of(dag, to_a).contains(b) ? Mark::Tail : Mark::Arrow;
      editor.add_edge(i, j, at_a, at_b);
    }
  }
  return editor.finish();
}

inline constexpr double kLatentShare = 0.3;

inline std::string observed_label(std::size_t i, std::size_t n) {
  if (n <= 26) return std::string(1, static_cast<char>('A' + i));
  std::string digits = std::to_string(i + 1);
  return "V" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

inline DagSpec random_dag_spec(std::size_t n_vertices, std::size_t n_edges, double selection_fraction,
                               std::uint64_t seed) {
  if (n_vertices == 0) throw GraphError(ErrorCode::InfeasibleParams, "no vertices");
  if (n_edges > n_vertices * (n_vertices - 1) / 2)
    throw GraphError(ErrorCode::InfeasibleParams, std::to_string(n_edges) + " edges over " +
                                                      std::to_string(n_vertices) + " vertices");
  if (!(selection_fraction >= 0.0 && selection_fraction <= 1.0))
    throw GraphError(ErrorCode::InfeasibleParams, "selection fraction outside [0, 1]");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n_vertices);
  for (std::size_t i = 0; i < n_vertices; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> rank(n_vertices);
  for (std::size_t i = 0; i < n_vertices; ++i) rank[order[i]] = i;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n_vertices; ++i)
    for (std::size_t j = i + 1; j < n_vertices; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(n_edges);
  std::sort(pairs.begin(), pairs.end());

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n_vertices; ++i) labels.push_back(observed_label(i, n_vertices));
  std::vector<EdgeSpec> edges;
  std::vector<std::string> latent, selection;
  for (auto [i, j] : pairs) {
    const std::string& first = labels[rank[i] < rank[j] ? i : j];
    const std::string& second = labels[rank[i] < rank[j] ? j : i];
    double kind = unit(rng);
    if (kind < selection_fraction) {
      std::string s = "S" + std::to_string(selection.size() + 1);
      edges.push_back({first, s, Mark::Tail, Mark::Arrow});
      edges.push_back({second, s, Mark::Tail, Mark::Arrow});
      selection.push_back(s);
    } else if (unit(rng) < kLatentShare) {
      std::string l = "L" + std::to_string(latent.size() + 1);
      edges.push_back({l, first, Mark::Tail, Mark::Arrow});
      edges.push_back({l, second, Mark::Tail, Mark::Arrow});
      latent.push_back(l);
    } else {
      edges.push_back({first, second, Mark::Tail, Mark::Arrow});
    }
  }
  std::vector<std::string> all = labels;
  all.insert(all.end(), latent.begin(), latent.end());
  all.insert(all.end(), selection.begin(), selection.end());
  MixedGraph dag = build_graph(all, edges, GraphKind::Dag);
  return DagSpec{dag, vertex_set(dag, latent), vertex_set(dag, selection)};
}

/// Random MAG obtained by projecting a random DAG. Each of `n_edges` sampled
/// vertex pairs becomes a selection-conditioned pair with probability
/// `selection_fraction`, otherwise a latent-confounded pair with probability
/// kLatentShare, otherwise a directed edge along a random causal order.
/// Projection can add adjacencies, so the MAG may have more than `n_edges`.
inline MixedGraph random_mag(std::size_t n_vertices, std::size_t n_edges, double selection_fraction,
                             std::uint64_t seed) {
  return project_dag(random_dag_spec(n_vertices, n_edges, selection_fraction, seed));
}

}  // namespace magpag
