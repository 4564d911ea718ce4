#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "magpag/io.hpp"

namespace magpag::testing {

inline MixedGraph graph(const std::string& text) { return parse_graph(text); }

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(MAGPAG_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MixedGraph fixture(const std::string& name) { return parse_graph(fixture_text(name)); }

/// Fails the calling test unless `stmt` throws a GraphError with `expected`.
#define EXPECT_GRAPH_ERROR(stmt, expected)                                   \
  do {                                                                       \
    try {                                                                    \
      stmt;                                                                  \
      ADD_FAILURE() << "no GraphError from " #stmt;                          \
    } catch (const ::magpag::GraphError& e) {                                \
      EXPECT_EQ(e.code(), expected) << e.what();                             \
    }                                                                        \
  } while (0)

}  // namespace magpag::testing
