#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "magpag/graph.hpp"

namespace magpag {

// Text format:
//
//   <kind>                      mag | dag | pmg | ug
//   node <vertex>               declares a vertex (needed for isolated ones)
//   <vertex> <m1>-<m2> <vertex> m1 in {<, o, -}, m2 in {>, o, -}
//
// '<' and '>' are arrowheads, 'o' circles, '-' tails. Blank lines and
// everything after '#' are ignored.

inline const char* kind_token(GraphKind kind) {
  switch (kind) {
    case GraphKind::Mag: return "mag";
    case GraphKind::Dag: return "dag";
    case GraphKind::Ug: return "ug";
    case GraphKind::Pmg: return "pmg";
  }
  return "pmg";
}

inline std::string edge_token(Mark left, Mark right) {
  std::string t = "---";
  t[0] = left == Mark::Arrow ? '<' : left == Mark::Circle ? 'o' : '-';
  t[2] = right == Mark::Arrow ? '>' : right == Mark::Circle ? 'o' : '-';
  return t;
}

inline char mark_glyph(Mark m) { return m == Mark::Arrow ? '>' : m == Mark::Circle ? 'o' : '-'; }

namespace detail {

inline GraphError line_error(ErrorCode code, std::size_t line, const std::string& what) {
  return GraphError(code, "line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

inline MixedGraph parse_graph(std::string_view text) {
  struct PendingEdge {
    EdgeSpec spec;
    std::size_t line;
  };
  std::optional<GraphKind> kind;
  std::vector<std::string> vertices;
  std::vector<PendingEdge> edges;
  std::vector<std::pair<std::string, std::size_t>> declared;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;

    if (!kind) {
      if (tokens.size() != 1) throw detail::line_error(ErrorCode::SyntaxError, line_no, "expected graph kind");
      const std::string& k = tokens[0];
      if (k == "mag") kind = GraphKind::Mag;
      else if (k == "dag") kind = GraphKind::Dag;
      else if (k == "pmg") kind = GraphKind::Pmg;
      else if (k == "ug") kind = GraphKind::Ug;
      else throw detail::line_error(ErrorCode::SyntaxError, line_no, "unknown graph kind '" + k + "'");
      continue;
    }
    if (tokens[0] == "node") {
      if (tokens.size() != 2) throw detail::line_error(ErrorCode::SyntaxError, line_no, "expected 'node <vertex>'");
      declared.emplace_back(tokens[1], line_no);
      continue;
    }
    if (tokens.size() != 3) throw detail::line_error(ErrorCode::SyntaxError, line_no, "expected '<vertex> <edge> <vertex>'");
    const std::string& tok = tokens[1];
    if (tok.size() != 3 || tok[1] != '-') throw detail::line_error(ErrorCode::UnknownMarkToken, line_no, "'" + tok + "'");
    Mark left, right;
    switch (tok[0]) {
      case '<': left = Mark::Arrow; break;
      case 'o': left = Mark::Circle; break;
      case '-': left = Mark::Tail; break;
      default: throw detail::line_error(ErrorCode::UnknownMarkToken, line_no, "'" + tok + "'");
    }
    switch (tok[2]) {
      case '>': right = Mark::Arrow; break;
      case 'o': right = Mark::Circle; break;
      case '-': right = Mark::Tail; break;
      default: throw detail::line_error(ErrorCode::UnknownMarkToken, line_no, "'" + tok + "'");
    }
    edges.push_back({{tokens[0], tokens[2], left, right}, line_no});
  }
  if (!kind) throw detail::line_error(ErrorCode::SyntaxError, line_no, "missing graph kind header");

  for (const auto& [label, line] : declared) {
    if (!is_valid_label(label)) throw detail::line_error(ErrorCode::InvalidLabel, line, "'" + label + "'");
    vertices.push_back(label);
  }
  for (const auto& e : edges)
    for (const auto* label : {&e.spec.u, &e.spec.v}) {
      if (!is_valid_label(*label)) throw detail::line_error(ErrorCode::InvalidLabel, e.line, "'" + *label + "'");
      vertices.push_back(*label);
    }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  MarkEditor editor = MarkEditor::empty(vertices, *kind);
  for (const auto& e : edges) {
    Vertex u = editor.view().index_of(e.spec.u);
    Vertex v = editor.view().index_of(e.spec.v);
    try {
      editor.add_edge(u, v, e.spec.at_u, e.spec.at_v);
    } catch (const GraphError& err) {
      throw detail::line_error(err.code(), e.line, e.spec.u + " " + edge_token(e.spec.at_u, e.spec.at_v) + " " + e.spec.v);
    }
  }
  return editor.finish();
}

enum class Format { Text, Dot };

inline std::string serialize_graph(const MixedGraph& g, Format format = Format::Text) {
  std::ostringstream out;
  if (format == Format::Text) {
    out << kind_token(g.kind()) << '\n';
    for (Vertex v = 0; v < g.size(); ++v)
      if (g.neighbors(v).empty()) out << "node " << g.label(v) << '\n';
    for (const Edge& e : g.edges())
      out << g.label(e.u) << ' ' << edge_token(e.at_u, e.at_v) << ' ' << g.label(e.v) << '\n';
    return out.str();
  }
  auto style = [](Mark m) { return m == Mark::Arrow ? "normal" : m == Mark::Circle ? "odot" : "none"; };
  out << "digraph " << kind_token(g.kind()) << " {\n";
  for (Vertex v = 0; v < g.size(); ++v) out << "  \"" << g.label(v) << "\";\n";
  for (const Edge& e : g.edges())
    out << "  \"" << g.label(e.u) << "\" -> \"" << g.label(e.v) << "\" [dir=both, arrowtail=" << style(e.at_u)
        << ", arrowhead=" << style(e.at_v) << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace magpag
