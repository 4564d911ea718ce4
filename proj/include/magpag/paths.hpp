#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <string>
#include <vector>

#include "magpag/graph.hpp"

namespace magpag {

/// Simple path given by its vertex sequence.
struct Path {
  std::vector<Vertex> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }

  friend auto operator<=>(const Path&, const Path&) = default;
  friend bool operator==(const Path&, const Path&) = default;
};

struct Triple {
  Vertex a = 0;
  Vertex b = 0;
  Vertex c = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline std::string describe(const MixedGraph& g, const std::vector<Vertex>& vs, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += sep;
    out += g.label(vs[i]);
  }
  return out;
}

inline bool is_valid_path(const MixedGraph& g, const Path& p) {
  if (p.vertices.size() < 2) return false;
  for (Vertex v : p.vertices)
    if (v >= g.size()) return false;
  std::vector<Vertex> sorted = p.vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
    if (!g.adjacent(p.vertices[i], p.vertices[i + 1])) return false;
  return true;
}

inline void require_valid_path(const MixedGraph& g, const Path& p) {
  if (!is_valid_path(g, p))
    throw GraphError(ErrorCode::InvalidPath, "not a simple path: " +
                                                 (std::all_of(p.vertices.begin(), p.vertices.end(),
                                                              [&](Vertex v) { return v < g.size(); })
                                                      ? describe(g, p.vertices)
                                                      : std::string("<out of range>")));
}

/// True when both edges prev-mid and mid-next carry an arrowhead at mid.
inline bool is_collider(const MixedGraph& g, Vertex prev, Vertex mid, Vertex next) {
  return g.has_mark(mid, prev, Mark::Arrow) && g.has_mark(mid, next, Mark::Arrow);
}

inline bool is_collider_on(const MixedGraph& g, const Path& p, Vertex v) {
  require_valid_path(g, p);
  auto it = std::find(p.vertices.begin(), p.vertices.end(), v);
  if (it == p.vertices.end()) throw GraphError(ErrorCode::NotOnPath, "'" + g.label(v) + "'");
  if (it == p.vertices.begin() || it + 1 == p.vertices.end())
    throw GraphError(ErrorCode::IsEndpoint, "'" + g.label(v) + "'");
  return is_collider(g, *(it - 1), v, *(it + 1));
}

/// Edge u-w may be traversed as a step of a potentially directed path from u
/// to w: it is neither into u nor out of w.
inline bool is_pd_step(const MixedGraph& g, Vertex u, Vertex w) {
  return g.adjacent(u, w) && g.mark(u, w) != Mark::Arrow && g.mark(w, u) != Mark::Tail;
}

struct PathClass {
  bool uncovered = false;
  bool potentially_directed = false;
  bool circle_path = false;
  bool directed = false;
};

/// All four path flags in one walk. Potential and actual directedness are
/// read from the first vertex towards the last.
inline PathClass classify_path(const MixedGraph& g, const Path& p) {
  require_valid_path(g, p);
  PathClass out{true, true, true, true};
  const auto& vs = p.vertices;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    Vertex u = vs[i], w = vs[i + 1];
    if (!is_pd_step(g, u, w)) out.potentially_directed = false;
    if (!(g.mark(u, w) == Mark::Circle && g.mark(w, u) == Mark::Circle)) out.circle_path = false;
    if (!g.is_directed(u, w)) out.directed = false;
    if (i + 2 < vs.size() && g.adjacent(u, vs[i + 2])) out.uncovered = false;
  }
  return out;
}

/// Every non-endpoint is a collider on the path and an ancestor of one of
/// the endpoints. Requires a mark-complete graph.
inline bool is_inducing_path(const MixedGraph& g, const Path& p) {
  require_valid_path(g, p);
  if (g.has_circles()) throw GraphError(ErrorCode::PartialGraphUnsupported, "inducing path on a graph with circles");
  const auto& vs = p.vertices;
  if (vs.size() == 2) return true;
  VertexSet an = ancestors_of(g, VertexSet(g.size(), {vs.front(), vs.back()}));
  for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
    if (!is_collider(g, vs[i - 1], vs[i], vs[i + 1])) return false;
    if (!an.contains(vs[i])) return false;
  }
  return true;
}

/// Checks every clause of a discriminating path for the second-to-last
/// vertex against the current marks of `g` (works for partial graphs).
inline bool is_discriminating_path(const MixedGraph& g, const Path& p) {
  if (!is_valid_path(g, p) || p.vertices.size() < 4) return false;
  const auto& vs = p.vertices;
  Vertex x = vs.front(), y = vs.back();
  if (g.adjacent(x, y)) return false;
  for (std::size_t i = 1; i + 2 < vs.size(); ++i) {
    if (!is_collider(g, vs[i - 1], vs[i], vs[i + 1])) return false;
    if (!g.is_directed(vs[i], y)) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultDiscriminatingCap = 10000;

/// All discriminating paths <X, ..., W, V, Y> for `v`, found by a backward
/// search from V through colliders that are parents of Y.
inline std::vector<Path> discriminating_paths(const MixedGraph& g, Vertex v, Vertex y,
                                              std::size_t cap = kDefaultDiscriminatingCap) {
  g.require_vertex(v);
  g.require_vertex(y);
  std::vector<Path> found;
  if (!g.adjacent(v, y)) return found;

  // chain holds V, W1, W2, ... walking away from Y.
  std::vector<Vertex> chain{v};
  std::vector<bool> on_chain(g.size(), false);
  on_chain[v] = on_chain[y] = true;

  std::function<void()> extend = [&]() {
    Vertex last = chain.back();
    for (Vertex t : g.neighbors(last)) {
      if (on_chain[t]) continue;
      if (chain.size() >= 2) {
        // `last` sits strictly between X and V and must be a collider.
        if (!is_collider(g, chain[chain.size() - 2], last, t)) continue;
      }
      if (!g.adjacent(t, y)) {
        if (chain.size() < 2) continue;
        Path p;
        p.vertices.assign(chain.rbegin(), chain.rend());
        p.vertices.insert(p.vertices.begin(), t);
        p.vertices.push_back(y);
        if (found.size() >= cap)
          throw GraphError(ErrorCode::EnumerationCapExceeded, "more than " + std::to_string(cap) + " paths");
        found.push_back(std::move(p));
      } else if (g.is_directed(t, y)) {
        chain.push_back(t);
        on_chain[t] = true;
        extend();
        on_chain[t] = false;
        chain.pop_back();
      }
    }
  };
  extend();
  std::sort(found.begin(), found.end());
  return found;
}

/// Every simple path between x and y, in lexicographic DFS order. Test and
/// oracle helper; exponential in general.
inline std::vector<Path> all_simple_paths(const MixedGraph& g, Vertex x, Vertex y) {
  std::vector<Path> out;
  std::vector<Vertex> cur{x};
  std::vector<bool> used(g.size(), false);
  used[x] = true;
  std::function<void(Vertex)> dfs = [&](Vertex u) {
    for (Vertex w : g.neighbors(u)) {
      if (used[w]) continue;
      cur.push_back(w);
      if (w == y) {
        out.push_back(Path{cur});
      } else {
        used[w] = true;
        dfs(w);
        used[w] = false;
      }
      cur.pop_back();
    }
  };
  if (x != y) dfs(x);
  return out;
}

}  // namespace magpag
