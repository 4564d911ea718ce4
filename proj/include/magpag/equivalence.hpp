#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "magpag/graph.hpp"
#include "magpag/mag_ops.hpp"
#include "magpag/paths.hpp"

namespace magpag {

/// Triples <a, b, c> with a < c nonadjacent and arrowheads at b on both edges.
inline std::vector<Triple> unshielded_colliders(const MixedGraph& g) {
  if (g.has_circles()) throw GraphError(ErrorCode::PartialGraphUnsupported, "colliders on a graph with circles");
  std::vector<Triple> out;
  for (Vertex b = 0; b < g.size(); ++b) {
    const auto& nb = g.neighbors(b);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        Vertex a = nb[i], c = nb[j];
        if (!g.adjacent(a, c) && is_collider(g, a, b, c)) out.push_back({a, b, c});
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Every discriminating path of `g`, over all adjacent ordered pairs.
inline std::vector<Path> all_discriminating_paths(const MixedGraph& g,
                                                  std::size_t cap = kDefaultDiscriminatingCap) {
  std::vector<Path> out;
  for (Vertex v = 0; v < g.size(); ++v)
    for (Vertex y : g.neighbors(v)) {
      auto found = discriminating_paths(g, v, y, cap);
      out.insert(out.end(), found.begin(), found.end());
      if (out.size() > cap)
        throw GraphError(ErrorCode::EnumerationCapExceeded, "more than " + std::to_string(cap) + " paths");
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct EquivalenceResult {
  bool equivalent = true;
  std::string clause;  // "e1", "e2" or "e3" when not equivalent
  std::vector<Vertex> witness;

  std::string reason(const MixedGraph& g) const {
    if (equivalent) return "equivalent";
    return clause + " witness " + describe(g, witness);
  }
};

namespace detail {

/// Equivalence test without validating inputs. `g1_paths` may carry the
/// precomputed discriminating paths of g1.
inline EquivalenceResult compare_mags(const MixedGraph& g1, const MixedGraph& g2,
                                      const std::vector<Path>* g1_paths = nullptr) {
  for (Vertex u = 0; u < g1.size(); ++u)
    for (Vertex v = u + 1; v < g1.size(); ++v)
      if (g1.adjacent(u, v) != g2.adjacent(u, v)) return {false, "e1", {u, v}};

  auto c1 = unshielded_colliders(g1);
  auto c2 = unshielded_colliders(g2);
  if (c1 != c2) {
    auto [m1, m2] = std::mismatch(c1.begin(), c1.end(), c2.begin(), c2.end());
    Triple t = (m2 == c2.end() || (m1 != c1.end() && *m1 < *m2)) ? *m1 : *m2;
    return {false, "e2", {t.a, t.b, t.c}};
  }

  std::vector<Path> local;
  if (!g1_paths) {
    local = all_discriminating_paths(g1);
    g1_paths = &local;
  }
  for (const Path& p : *g1_paths) {
    if (!is_discriminating_path(g2, p)) continue;
    const auto& vs = p.vertices;
    std::size_t k = vs.size() - 2;
    if (is_collider(g1, vs[k - 1], vs[k], vs[k + 1]) != is_collider(g2, vs[k - 1], vs[k], vs[k + 1]))
      return {false, "e3", vs};
  }
  return {};
}

inline void require_same_vertices(const MixedGraph& g1, const MixedGraph& g2) {
  if (g1.labels() != g2.labels()) throw GraphError(ErrorCode::VertexSetMismatch, "graphs over different vertex sets");
}

/// Ancestrality as a yes/no answer, without building witnesses.
inline bool is_ancestral_fast(const MixedGraph& g) {
  const std::size_t n = g.size();
  for (Vertex u = 0; u < n; ++u) {
    bool has_undirected = false, has_arrow = false;
    for (Vertex v : g.neighbors(u)) {
      if (g.is_undirected(u, v)) has_undirected = true;
      if (g.mark(u, v) == Mark::Arrow) has_arrow = true;
    }
    if (has_undirected && has_arrow) return false;
  }
  std::vector<std::size_t> indegree(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u))
      if (g.is_directed(u, v)) ++indegree[v];
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v)
    if (!indegree[v]) stack.push_back(v);
  std::size_t processed = 0;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    ++processed;
    for (Vertex v : g.neighbors(u))
      if (g.is_directed(u, v) && --indegree[v] == 0) stack.push_back(v);
  }
  if (processed != n) return false;
  for (Vertex u = 0; u < n; ++u) {
    bool has_spouse = false;
    for (Vertex v : g.neighbors(u)) has_spouse = has_spouse || g.is_bidirected(u, v);
    if (!has_spouse) continue;
    VertexSet desc = descendants_of(g, u);
    for (Vertex v : g.neighbors(u))
      if (g.is_bidirected(u, v) && desc.contains(v)) return false;
  }
  return true;
}

inline bool is_maximal_fast(const MixedGraph& g) {
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      if (!g.adjacent(u, v) && find_inducing_path(g, u, v)) return false;
  return true;
}

}  // namespace detail

/// Markov equivalence of two MAGs over the same vertices via adjacencies,
/// unshielded colliders and discriminating paths shared by both graphs.
inline EquivalenceResult markov_equivalent(const MixedGraph& g1, const MixedGraph& g2) {
  detail::require_same_vertices(g1, g2);
  if (!is_mag(g1)) throw GraphError(ErrorCode::NotAMag, "first graph is not a MAG");
  if (!is_mag(g2)) throw GraphError(ErrorCode::NotAMag, "second graph is not a MAG");
  return detail::compare_mags(g1, g2);
}

struct EquivalenceClass {
  std::vector<MixedGraph> members;
  MixedGraph skeleton;
};

inline constexpr std::size_t kDefaultClassCap = 5'000'000;

/// Brute-force equivalence class: every assignment of -->, <--, <-> and ---
/// to the skeleton's edges that is a MAG equivalent to `g`.
inline EquivalenceClass enumerate_class(const MixedGraph& g, std::size_t cap = kDefaultClassCap) {
  if (!is_mag(g)) throw GraphError(ErrorCode::NotAMag, "class enumeration requires a MAG");
  const std::vector<Edge> edges = g.edges();
  std::size_t total = 1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (total > cap / 4) throw GraphError(ErrorCode::CapExceeded, "4^" + std::to_string(edges.size()) + " candidates");
    total *= 4;
  }
  if (total > cap) throw GraphError(ErrorCode::CapExceeded, std::to_string(total) + " candidates");

  struct TripleCheck {
    Triple t;
    bool collider;
  };
  std::vector<TripleCheck> triples;
  for (Vertex b = 0; b < g.size(); ++b) {
    const auto& nb = g.neighbors(b);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!g.adjacent(nb[i], nb[j])) triples.push_back({{nb[i], b, nb[j]}, is_collider(g, nb[i], b, nb[j])});
  }
  const std::vector<Path> disc = all_discriminating_paths(g);

  static constexpr Mark kAtU[4] = {Mark::Tail, Mark::Arrow, Mark::Arrow, Mark::Tail};
  static constexpr Mark kAtV[4] = {Mark::Arrow, Mark::Tail, Mark::Arrow, Mark::Tail};

  EquivalenceClass out{{}, with_uniform_marks(g, Mark::Tail, GraphKind::Ug)};
  MarkEditor editor(g, GraphKind::Mag);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (const Edge& e : edges) {
      std::size_t t = rest % 4;
      rest /= 4;
      editor.set_edge_unchecked(e.u, e.v, kAtU[t], kAtV[t]);
    }
    const MixedGraph& h = editor.view();
    bool ok = std::all_of(triples.begin(), triples.end(), [&](const TripleCheck& c) {
      return is_collider(h, c.t.a, c.t.b, c.t.c) == c.collider;
    });
    if (!ok) continue;
    for (const Path& p : disc) {
      if (!is_discriminating_path(h, p)) continue;
      const auto& vs = p.vertices;
      std::size_t k = vs.size() - 2;
      if (is_collider(h, vs[k - 1], vs[k], vs[k + 1]) != is_collider(g, vs[k - 1], vs[k], vs[k + 1])) {
        ok = false;
        break;
      }
    }
    if (!ok || !detail::is_ancestral_fast(h) || !detail::is_maximal_fast(h)) continue;
    out.members.push_back(editor.finish());
  }
  return out;
}

/// Marks shared by every member of a class; all other endpoints get Circle.
struct PagVerdict {
  MixedGraph pag;
  std::size_t class_size = 0;
};

inline PagVerdict invariant_marks(const EquivalenceClass& cls) {
  if (cls.members.empty()) throw GraphError(ErrorCode::NotAMag, "empty equivalence class");
  const MixedGraph& first = cls.members.front();
  MarkEditor editor(first, GraphKind::Pmg);
  for (const Edge& e : first.edges()) {
    Mark at_u = e.at_u, at_v = e.at_v;
    for (const MixedGraph& m : cls.members) {
      if (m.mark(e.u, e.v) != at_u) at_u = Mark::Circle;
      if (m.mark(e.v, e.u) != at_v) at_v = Mark::Circle;
    }
    editor.set_edge_unchecked(e.u, e.v, at_u, at_v);
  }
  return {editor.finish(), cls.members.size()};
}

inline PagVerdict invariant_marks(const MixedGraph& g, std::size_t cap = kDefaultClassCap) {
  return invariant_marks(enumerate_class(g, cap));
}

}  // namespace magpag
