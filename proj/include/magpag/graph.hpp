#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace magpag {

using Vertex = std::size_t;

enum class Mark : std::uint8_t { Tail, Arrow, Circle };

/// Document kind of a graph. Mag, Dag and Ug are mark-complete (no circles);
/// Dag admits only directed edges, Ug only undirected ones.
enum class GraphKind : std::uint8_t { Mag, Dag, Ug, Pmg };

inline bool is_mark_complete(GraphKind kind) { return kind != GraphKind::Pmg; }

enum class ErrorCode {
  InvalidLabel,
  DuplicateVertex,
  DuplicateEdge,
  SelfLoop,
  UnknownEndpoint,
  UnknownVertex,
  IllegalMarkForKind,
  NotOnPath,
  IsEndpoint,
  InvalidPath,
  PartialGraphUnsupported,
  EnumerationCapExceeded,
  OverlappingSets,
  CapExceeded,
  NotAncestral,
  CompletionBrokeAncestrality,
  InvalidSpec,
  CyclicInput,
  InfeasibleParams,
  VertexSetMismatch,
  NotAMag,
  SkeletonMismatch,
  MarkConflict,
  NonTermination,
  NotChordal,
  ForcedPairNonadjacent,
  ResultNotMag,
  SyntaxError,
  UnknownMarkToken,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::IllegalMarkForKind: return "IllegalMarkForKind";
    case ErrorCode::NotOnPath: return "NotOnPath";
    case ErrorCode::IsEndpoint: return "IsEndpoint";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::PartialGraphUnsupported: return "PartialGraphUnsupported";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotAncestral: return "NotAncestral";
    case ErrorCode::CompletionBrokeAncestrality: return "CompletionBrokeAncestrality";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CyclicInput: return "CyclicInput";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::VertexSetMismatch: return "VertexSetMismatch";
    case ErrorCode::NotAMag: return "NotAMag";
    case ErrorCode::SkeletonMismatch: return "SkeletonMismatch";
    case ErrorCode::MarkConflict: return "MarkConflict";
    case ErrorCode::NonTermination: return "NonTermination";
    case ErrorCode::NotChordal: return "NotChordal";
    case ErrorCode::ForcedPairNonadjacent: return "ForcedPairNonadjacent";
    case ErrorCode::ResultNotMag: return "ResultNotMag";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownMarkToken: return "UnknownMarkToken";
  }
  return "Unknown";
}

/// Every domain failure in the library is reported as a GraphError carrying a
/// machine-checkable code and a message naming the offending element.
class GraphError : public std::runtime_error {
 public:
  GraphError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Labels are nonempty tokens without whitespace and without any character
/// used by the edge grammar or comments.
inline bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (c == '<' || c == '>' || c == 'o' || c == '-' || c == '#') return false;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
  }
  return true;
}

/// A set of vertices of one graph, stored as a membership mask over the
/// graph's vertex indices.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe, false) {}
  VertexSet(std::size_t universe, std::initializer_list<Vertex> members) : bits_(universe, false) {
    for (Vertex v : members) insert(v);
  }
  VertexSet(std::size_t universe, const std::vector<Vertex>& members) : bits_(universe, false) {
    for (Vertex v : members) insert(v);
  }

  std::size_t universe() const { return bits_.size(); }
  bool contains(Vertex v) const { return v < bits_.size() && bits_[v]; }
  void insert(Vertex v) {
    if (v >= bits_.size()) throw GraphError(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v));
    bits_[v] = true;
  }
  void erase(Vertex v) {
    if (v < bits_.size()) bits_[v] = false;
  }
  std::size_t size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }
  bool empty() const { return std::find(bits_.begin(), bits_.end(), true) == bits_.end(); }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < bits_.size(); ++v)
      if (bits_[v]) out.push_back(v);
    return out;
  }

  bool intersects(const VertexSet& other) const {
    for (Vertex v = 0; v < bits_.size(); ++v)
      if (bits_[v] && other.contains(v)) return true;
    return false;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<bool> bits_;
};

/// One edge with a mark at each endpoint. `u` and `v` are vertex indices.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Mark at_u = Mark::Tail;
  Mark at_v = Mark::Tail;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge given by labels, as accepted by build_graph.
struct EdgeSpec {
  std::string u;
  std::string v;
  Mark at_u = Mark::Tail;
  Mark at_v = Mark::Tail;
};

class MarkEditor;

/// Simple graph over labelled vertices whose edges carry one mark per
/// endpoint. Vertex indices follow label order, so every iteration over
/// indices is deterministic. Values are immutable; use MarkEditor to derive
/// modified copies.
class MixedGraph {
 public:
  MixedGraph() : labels_(std::make_shared<const std::vector<std::string>>()) {}

  std::size_t size() const { return labels_->size(); }
  GraphKind kind() const { return kind_; }
  const std::vector<std::string>& labels() const { return *labels_; }
  const std::string& label(Vertex v) const { return labels_->at(v); }

  std::optional<Vertex> find(std::string_view label) const {
    auto it = std::lower_bound(labels_->begin(), labels_->end(), label,
                               [](const std::string& a, std::string_view b) { return a < b; });
    if (it == labels_->end() || *it != label) return std::nullopt;
    return static_cast<Vertex>(it - labels_->begin());
  }

  Vertex index_of(std::string_view label) const {
    auto v = find(label);
    if (!v) throw GraphError(ErrorCode::UnknownVertex, "no vertex '" + std::string(label) + "'");
    return *v;
  }

  void require_vertex(Vertex v) const {
    if (v >= size()) throw GraphError(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v));
  }

  bool adjacent(Vertex x, Vertex y) const { return x != y && marks_[x * size() + y] >= 0; }

  /// Mark at `at` on the edge between `at` and `other`; empty when nonadjacent.
  std::optional<Mark> mark_at(Vertex at, Vertex other) const {
    require_vertex(at);
    require_vertex(other);
    if (!adjacent(at, other)) return std::nullopt;
    return static_cast<Mark>(marks_[at * size() + other]);
  }

  /// Unchecked mark lookup for hot loops; the pair must be adjacent.
  Mark mark(Vertex at, Vertex other) const { return static_cast<Mark>(marks_[at * size() + other]); }

  bool has_mark(Vertex at, Vertex other, Mark m) const {
    return adjacent(at, other) && marks_[at * size() + other] == static_cast<std::int8_t>(m);
  }

  /// at --> other
  bool is_directed(Vertex from, Vertex to) const {
    return has_mark(from, to, Mark::Tail) && has_mark(to, from, Mark::Arrow);
  }
  bool is_bidirected(Vertex x, Vertex y) const {
    return has_mark(x, y, Mark::Arrow) && has_mark(y, x, Mark::Arrow);
  }
  bool is_undirected(Vertex x, Vertex y) const {
    return has_mark(x, y, Mark::Tail) && has_mark(y, x, Mark::Tail);
  }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }

  std::size_t edge_count() const { return edge_count_; }

  /// Edges with u < v, sorted by (u, v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < size(); ++u)
      for (Vertex v : adjacency_[u])
        if (u < v) out.push_back({u, v, mark(u, v), mark(v, u)});
    return out;
  }

  bool has_circles() const {
    return std::find(marks_.begin(), marks_.end(), static_cast<std::int8_t>(Mark::Circle)) != marks_.end();
  }

  bool same_adjacencies(const MixedGraph& other) const {
    if (labels() != other.labels()) return false;
    for (Vertex u = 0; u < size(); ++u)
      if (adjacency_[u] != other.adjacency_[u]) return false;
    return true;
  }

  /// Equality compares labels, kind, adjacencies and every mark.
  friend bool operator==(const MixedGraph& a, const MixedGraph& b) {
    return a.kind_ == b.kind_ && a.labels() == b.labels() && a.marks_ == b.marks_;
  }

  /// Marks only; kind is ignored. Used to compare graphs of different kinds.
  bool same_marks(const MixedGraph& other) const { return labels() == other.labels() && marks_ == other.marks_; }

  /// Compact key over the mark matrix, handy for hashing or memoizing.
  std::string mark_key() const { return std::string(marks_.begin(), marks_.end()); }

 private:
  friend class MarkEditor;

  std::shared_ptr<const std::vector<std::string>> labels_;
  GraphKind kind_ = GraphKind::Mag;
  std::vector<std::int8_t> marks_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

inline bool mark_legal_for_kind(GraphKind kind, Mark at_u, Mark at_v) {
  switch (kind) {
    case GraphKind::Pmg: return true;
    case GraphKind::Mag: return at_u != Mark::Circle && at_v != Mark::Circle;
    case GraphKind::Dag:
      return (at_u == Mark::Tail && at_v == Mark::Arrow) || (at_u == Mark::Arrow && at_v == Mark::Tail);
    case GraphKind::Ug: return at_u == Mark::Tail && at_v == Mark::Tail;
  }
  return false;
}

/// Working copy of a graph whose marks and edges can be changed. Produces a
/// new immutable MixedGraph with finish(); the source graph is untouched.
class MarkEditor {
 public:
  explicit MarkEditor(MixedGraph g) : g_(std::move(g)) {}
  MarkEditor(MixedGraph g, GraphKind kind) : g_(std::move(g)) { g_.kind_ = kind; }

  /// Fresh graph over sorted, unique, valid labels with no edges.
  static MarkEditor empty(std::vector<std::string> sorted_labels, GraphKind kind) {
    MixedGraph g;
    std::size_t n = sorted_labels.size();
    g.labels_ = std::make_shared<const std::vector<std::string>>(std::move(sorted_labels));
    g.kind_ = kind;
    g.marks_.assign(n * n, -1);
    g.adjacency_.assign(n, {});
    return MarkEditor(std::move(g));
  }

  const MixedGraph& view() const { return g_; }

  void set_mark(Vertex at, Vertex other, Mark m) {
    if (!g_.adjacent(at, other))
      throw GraphError(ErrorCode::UnknownEndpoint,
                       "no edge between '" + g_.label(at) + "' and '" + g_.label(other) + "'");
    if (m == Mark::Circle && is_mark_complete(g_.kind_))
      throw GraphError(ErrorCode::IllegalMarkForKind, "circle mark at '" + g_.label(at) + "'");
    g_.marks_[at * g_.size() + other] = static_cast<std::int8_t>(m);
  }

  /// Sets both marks of an existing edge without kind checks; callers that
  /// enumerate candidate orientations use this in inner loops.
  void set_edge_unchecked(Vertex u, Vertex v, Mark at_u, Mark at_v) {
    g_.marks_[u * g_.size() + v] = static_cast<std::int8_t>(at_u);
    g_.marks_[v * g_.size() + u] = static_cast<std::int8_t>(at_v);
  }

  void add_edge(Vertex u, Vertex v, Mark at_u, Mark at_v) {
    g_.require_vertex(u);
    g_.require_vertex(v);
    if (u == v) throw GraphError(ErrorCode::SelfLoop, "self loop at '" + g_.label(u) + "'");
    if (g_.adjacent(u, v))
      throw GraphError(ErrorCode::DuplicateEdge, "edge '" + g_.label(u) + "' - '" + g_.label(v) + "'");
    if (!mark_legal_for_kind(g_.kind_, at_u, at_v))
      throw GraphError(ErrorCode::IllegalMarkForKind,
                       "edge '" + g_.label(u) + "' - '" + g_.label(v) + "' in a mark-complete graph");
    set_edge_unchecked(u, v, at_u, at_v);
    insert_sorted(g_.adjacency_[u], v);
    insert_sorted(g_.adjacency_[v], u);
    ++g_.edge_count_;
  }

  MixedGraph finish() const { return g_; }

 private:
  static void insert_sorted(std::vector<Vertex>& list, Vertex v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  }

  MixedGraph g_;
};

/// Builds a validated graph from labels and label-addressed edges.
inline MixedGraph build_graph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                              GraphKind kind) {
  for (const auto& label : vertices)
    if (!is_valid_label(label)) throw GraphError(ErrorCode::InvalidLabel, "'" + label + "'");
  std::sort(vertices.begin(), vertices.end());
  if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end())
    throw GraphError(ErrorCode::DuplicateVertex, "'" + *dup + "'");
  MarkEditor editor = MarkEditor::empty(std::move(vertices), kind);
  const MixedGraph& g = editor.view();
  for (const auto& e : edges) {
    auto u = g.find(e.u);
    auto v = g.find(e.v);
    if (!u) throw GraphError(ErrorCode::UnknownEndpoint, "'" + e.u + "'");
    if (!v) throw GraphError(ErrorCode::UnknownEndpoint, "'" + e.v + "'");
    editor.add_edge(*u, *v, e.at_u, e.at_v);
  }
  return editor.finish();
}

/// Same vertices and adjacencies with every mark replaced by `m`.
inline MixedGraph with_uniform_marks(const MixedGraph& g, Mark m, GraphKind kind) {
  MarkEditor editor(g, kind);
  for (const Edge& e : g.edges()) editor.set_edge_unchecked(e.u, e.v, m, m);
  return editor.finish();
}

struct LocalSets {
  VertexSet parents;
  VertexSet children;
  VertexSet spouses;
  VertexSet neighbors;
  VertexSet ancestors;
  VertexSet descendants;
};

/// Reflexive ancestors of a set: every vertex with a directed path into it.
inline VertexSet ancestors_of(const MixedGraph& g, const VertexSet& targets) {
  VertexSet seen(g.size());
  std::vector<Vertex> stack = targets.members();
  for (Vertex v : stack) seen.insert(v);
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : g.neighbors(v))
      if (!seen.contains(u) && g.is_directed(u, v)) {
        seen.insert(u);
        stack.push_back(u);
      }
  }
  return seen;
}

/// Reflexive descendants of a set.
inline VertexSet descendants_of(const MixedGraph& g, const VertexSet& sources) {
  VertexSet seen(g.size());
  std::vector<Vertex> stack = sources.members();
  for (Vertex v : stack) seen.insert(v);
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : g.neighbors(v))
      if (!seen.contains(u) && g.is_directed(v, u)) {
        seen.insert(u);
        stack.push_back(u);
      }
  }
  return seen;
}

inline VertexSet ancestors_of(const MixedGraph& g, Vertex v) { return ancestors_of(g, VertexSet(g.size(), {v})); }
inline VertexSet descendants_of(const MixedGraph& g, Vertex v) {
  return descendants_of(g, VertexSet(g.size(), {v}));
}

inline LocalSets local_sets(const MixedGraph& g, Vertex v) {
  g.require_vertex(v);
  LocalSets out{VertexSet(g.size()), VertexSet(g.size()), VertexSet(g.size()),
                VertexSet(g.size()), VertexSet(g.size()), VertexSet(g.size())};
  for (Vertex u : g.neighbors(v)) {
    if (g.is_directed(u, v)) out.parents.insert(u);
    if (g.is_directed(v, u)) out.children.insert(u);
    if (g.is_bidirected(u, v)) out.spouses.insert(u);
    if (g.is_undirected(u, v)) out.neighbors.insert(u);
  }
  out.ancestors = ancestors_of(g, v);
  out.descendants = descendants_of(g, v);
  return out;
}

/// Label-addressed convenience used by tests and the CLI.
inline std::optional<Mark> mark_at(const MixedGraph& g, std::string_view x, std::string_view y) {
  return g.mark_at(g.index_of(x), g.index_of(y));
}

inline VertexSet vertex_set(const MixedGraph& g, const std::vector<std::string>& labels) {
  VertexSet out(g.size());
  for (const auto& l : labels) out.insert(g.index_of(l));
  return out;
}

inline std::vector<std::string> labels_of(const MixedGraph& g, const std::vector<Vertex>& vs) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (Vertex v : vs) out.push_back(g.label(v));
  return out;
}

inline std::vector<std::string> labels_of(const MixedGraph& g, const VertexSet& vs) {
  return labels_of(g, vs.members());
}

}  // namespace magpag
