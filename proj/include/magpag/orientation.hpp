#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "magpag/graph.hpp"
#include "magpag/mag_ops.hpp"
#include "magpag/paths.hpp"

namespace magpag {

enum class RuleId : std::uint8_t { R0, R1, R2, R3, R4, R5, R6, R7, R8, R9, R10 };

inline constexpr std::array<RuleId, 11> kAllRules = {RuleId::R0, RuleId::R1, RuleId::R2, RuleId::R3,
                                                     RuleId::R4, RuleId::R5, RuleId::R6, RuleId::R7,
                                                     RuleId::R8, RuleId::R9, RuleId::R10};

inline const char* to_string(RuleId r) {
  static constexpr const char* kNames[] = {"R0", "R1", "R2", "R3", "R4", "R5",
                                           "R6", "R7", "R8", "R9", "R10"};
  return kNames[static_cast<std::size_t>(r)];
}

inline std::optional<RuleId> parse_rule(std::string_view s) {
  for (RuleId r : kAllRules)
    if (s == to_string(r)) return r;
  return std::nullopt;
}

struct MarkChange {
  Vertex at = 0;
  Vertex other = 0;
  Mark old_mark = Mark::Circle;
  Mark new_mark = Mark::Circle;

  friend bool operator==(const MarkChange&, const MarkChange&) = default;
};

/// One application of a rule: the circles it refined and the vertex
/// sequences (triples or paths) that matched its antecedent.
struct RuleFiring {
  RuleId rule = RuleId::R0;
  std::vector<MarkChange> changes;
  std::vector<std::vector<Vertex>> witnesses;

  friend bool operator==(const RuleFiring&, const RuleFiring&) = default;
};

struct RuleApplication {
  MixedGraph graph;
  std::vector<RuleFiring> firings;
};

enum class Stage { Fci, Afci };

/// The all-circle skeleton, the graph after R0-R4, the graph after the tail
/// rules, and every firing in order.
struct StagedPag {
  MixedGraph skeleton;
  MixedGraph p_fci;
  MixedGraph p_afci;
  std::vector<RuleFiring> trace;
};

struct CloseOptions {
  /// When set, the rule order of every sweep is shuffled with this seed.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Same adjacencies as the MAG, every mark a circle.
inline MixedGraph init_pmg(const MixedGraph& g) {
  if (!is_mag(g)) throw GraphError(ErrorCode::NotAMag, "orientation starts from a MAG");
  return with_uniform_marks(g, Mark::Circle, GraphKind::Pmg);
}

namespace detail {

struct Target {
  Vertex at;
  Vertex other;
  Mark mark;

  friend auto operator<=>(const Target&, const Target&) = default;
};

struct Instance {
  std::vector<std::vector<Vertex>> witnesses;
  std::vector<Target> targets;

  friend auto operator<=>(const Instance&, const Instance&) = default;
};

inline bool is_mark(const MixedGraph& p, Vertex at, Vertex other, Mark m) { return p.has_mark(at, other, m); }

enum class Walk { Extend, Skip, Stop };

/// Depth-first enumeration of uncovered simple paths from `start` whose steps
/// satisfy `step_ok(u, w)`. `visit` sees every path of two or more vertices
/// and decides whether to extend it further.
template <class StepOk, class Visit>
void for_each_uncovered_path(const MixedGraph& p, Vertex start, StepOk step_ok, Visit visit) {
  std::vector<Vertex> path{start};
  std::vector<bool> used(p.size(), false);
  used[start] = true;
  bool stop = false;
  auto dfs = [&](auto&& self) -> void {
    Vertex u = path.back();
    for (Vertex w : p.neighbors(u)) {
      if (stop) return;
      if (used[w] || !step_ok(u, w)) continue;
      if (path.size() >= 2 && p.adjacent(path[path.size() - 2], w)) continue;
      path.push_back(w);
      Walk next = visit(static_cast<const std::vector<Vertex>&>(path));
      if (next == Walk::Stop) {
        stop = true;
      } else if (next == Walk::Extend) {
        used[w] = true;
        self(self);
        used[w] = false;
      }
      path.pop_back();
    }
  };
  dfs(dfs);
}

inline bool circle_circle(const MixedGraph& p, Vertex u, Vertex w) {
  return is_mark(p, u, w, Mark::Circle) && is_mark(p, w, u, Mark::Circle);
}

inline std::vector<Instance> find_r0(const MixedGraph& p, const MixedGraph& g) {
  std::vector<Instance> out;
  for (Vertex b = 0; b < p.size(); ++b) {
    const auto& nb = p.neighbors(b);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        Vertex a = nb[i], c = nb[j];
        if (p.adjacent(a, c) || !is_collider(g, a, b, c)) continue;
        out.push_back({{{a, b, c}}, {{b, a, Mark::Arrow}, {b, c, Mark::Arrow}}});
      }
  }
  return out;
}

// a *-> b o-* c, a and c nonadjacent  =>  b --> c
inline std::vector<Instance> find_r1(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex b = 0; b < p.size(); ++b)
    for (Vertex a : p.neighbors(b)) {
      if (!is_mark(p, b, a, Mark::Arrow)) continue;
      for (Vertex c : p.neighbors(b)) {
        if (c == a || p.adjacent(a, c) || !is_mark(p, b, c, Mark::Circle)) continue;
        out.push_back({{{a, b, c}}, {{b, c, Mark::Tail}, {c, b, Mark::Arrow}}});
      }
    }
  return out;
}

// (a --> b *-> c or a *-> b --> c) and a *-o c  =>  a *-> c
inline std::vector<Instance> find_r2(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex a = 0; a < p.size(); ++a)
    for (Vertex c : p.neighbors(a)) {
      if (!is_mark(p, c, a, Mark::Circle)) continue;
      for (Vertex b : p.neighbors(a)) {
        if (b == c || !p.adjacent(b, c)) continue;
        bool first = p.is_directed(a, b) && is_mark(p, c, b, Mark::Arrow);
        bool second = is_mark(p, b, a, Mark::Arrow) && p.is_directed(b, c);
        if (first || second) out.push_back({{{a, b, c}}, {{c, a, Mark::Arrow}}});
      }
    }
  return out;
}

// a *-> b <-* c, a *-o t o-* c, a and c nonadjacent, t *-o b  =>  t *-> b
inline std::vector<Instance> find_r3(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex b = 0; b < p.size(); ++b)
    for (Vertex t : p.neighbors(b)) {
      if (!is_mark(p, b, t, Mark::Circle)) continue;
      const auto& nb = p.neighbors(b);
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          Vertex a = nb[i], c = nb[j];
          if (a == t || c == t || p.adjacent(a, c)) continue;
          if (!is_mark(p, b, a, Mark::Arrow) || !is_mark(p, b, c, Mark::Arrow)) continue;
          if (!is_mark(p, t, a, Mark::Circle) || !is_mark(p, t, c, Mark::Circle)) continue;
          out.push_back({{{a, b, c}, {a, t, c}}, {{b, t, Mark::Arrow}}});
        }
    }
  return out;
}

// discriminating path <t, ..., a, b, c> for b with b o-* c  =>  b --> c when
// the MAG has b --> c, otherwise a <-> b <-> c
inline std::vector<Instance> find_r4(const MixedGraph& p, const MixedGraph& g) {
  std::vector<Instance> out;
  for (Vertex b = 0; b < p.size(); ++b)
    for (Vertex c : p.neighbors(b)) {
      if (!is_mark(p, b, c, Mark::Circle)) continue;
      for (const Path& path : discriminating_paths(p, b, c)) {
        const auto& vs = path.vertices;
        Vertex a = vs[vs.size() - 3];
        if (g.is_directed(b, c)) {
          out.push_back({{vs}, {{b, c, Mark::Tail}, {c, b, Mark::Arrow}}});
        } else {
          out.push_back({{vs}, {{a, b, Mark::Arrow}, {b, a, Mark::Arrow}, {b, c, Mark::Arrow}, {c, b, Mark::Arrow}}});
        }
      }
    }
  return out;
}

// a o-o b with an uncovered circle path <a, c, ..., t, b>, a and t
// nonadjacent, b and c nonadjacent  =>  a --- b and every path edge ---
inline std::vector<Instance> find_r5(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex a = 0; a < p.size(); ++a)
    for (Vertex b : p.neighbors(a)) {
      if (b < a || !circle_circle(p, a, b)) continue;
      std::vector<Vertex> hit;
      for_each_uncovered_path(
          p, a, [&](Vertex u, Vertex w) { return circle_circle(p, u, w); },
          [&](const std::vector<Vertex>& path) {
            Vertex last = path.back();
            if (last != b) return Walk::Extend;
            if (path.size() >= 4 && !p.adjacent(a, path[path.size() - 2]) && !p.adjacent(b, path[1])) {
              hit = path;
              return Walk::Stop;
            }
            return Walk::Skip;
          });
      if (hit.empty()) continue;
      Instance inst{{hit}, {{a, b, Mark::Tail}, {b, a, Mark::Tail}}};
      for (std::size_t i = 0; i + 1 < hit.size(); ++i) {
        inst.targets.push_back({hit[i], hit[i + 1], Mark::Tail});
        inst.targets.push_back({hit[i + 1], hit[i], Mark::Tail});
      }
      out.push_back(std::move(inst));
    }
  return out;
}

// a --- b o-* c  =>  b -* c
inline std::vector<Instance> find_r6(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex b = 0; b < p.size(); ++b)
    for (Vertex a : p.neighbors(b)) {
      if (!p.is_undirected(a, b)) continue;
      for (Vertex c : p.neighbors(b))
        if (c != a && is_mark(p, b, c, Mark::Circle)) out.push_back({{{a, b, c}}, {{b, c, Mark::Tail}}});
    }
  return out;
}

// a --o b o-* c, a and c nonadjacent  =>  b -* c
inline std::vector<Instance> find_r7(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex b = 0; b < p.size(); ++b)
    for (Vertex a : p.neighbors(b)) {
      if (!is_mark(p, a, b, Mark::Tail) || !is_mark(p, b, a, Mark::Circle)) continue;
      for (Vertex c : p.neighbors(b))
        if (c != a && !p.adjacent(a, c) && is_mark(p, b, c, Mark::Circle))
          out.push_back({{{a, b, c}}, {{b, c, Mark::Tail}}});
    }
  return out;
}

inline bool partially_directed(const MixedGraph& p, Vertex a, Vertex c) {
  return is_mark(p, a, c, Mark::Circle) && is_mark(p, c, a, Mark::Arrow);
}

// (a --> b --> c or a --o b --> c) and a o-> c  =>  a --> c
inline std::vector<Instance> find_r8(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex a = 0; a < p.size(); ++a)
    for (Vertex c : p.neighbors(a)) {
      if (!partially_directed(p, a, c)) continue;
      for (Vertex b : p.neighbors(a)) {
        if (b == c || !p.is_directed(b, c) || !is_mark(p, a, b, Mark::Tail)) continue;
        if (is_mark(p, b, a, Mark::Arrow) || is_mark(p, b, a, Mark::Circle))
          out.push_back({{{a, b, c}}, {{a, c, Mark::Tail}}});
      }
    }
  return out;
}

// a o-> c with an uncovered p.d. path <a, b, t, ..., c>, b and c
// nonadjacent  =>  a --> c
inline std::vector<Instance> find_r9(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex a = 0; a < p.size(); ++a)
    for (Vertex c : p.neighbors(a)) {
      if (!partially_directed(p, a, c)) continue;
      std::vector<Vertex> hit;
      for_each_uncovered_path(
          p, a, [&](Vertex u, Vertex w) { return is_pd_step(p, u, w); },
          [&](const std::vector<Vertex>& path) {
            if (path.size() == 2 && (path[1] == c || p.adjacent(path[1], c))) return Walk::Skip;
            if (path.back() == c) {
              hit = path;
              return Walk::Stop;
            }
            return Walk::Extend;
          });
      if (!hit.empty()) out.push_back({{hit}, {{a, c, Mark::Tail}}});
    }
  return out;
}

// a o-> c, b --> c <-- t, uncovered p.d. paths from a to b and from a to t
// whose first steps m and w are distinct and nonadjacent  =>  a --> c
inline std::vector<Instance> find_r10(const MixedGraph& p) {
  std::vector<Instance> out;
  for (Vertex a = 0; a < p.size(); ++a)
    for (Vertex c : p.neighbors(a)) {
      if (!partially_directed(p, a, c)) continue;
      std::vector<Vertex> parents;
      for (Vertex b : p.neighbors(c))
        if (b != a && p.is_directed(b, c)) parents.push_back(b);
      if (parents.size() < 2) continue;
      std::vector<bool> is_parent(p.size(), false);
      for (Vertex b : parents) is_parent[b] = true;

      // (end, first step) -> first path found
      std::map<std::pair<Vertex, Vertex>, std::vector<Vertex>> reach;
      for_each_uncovered_path(
          p, a, [&](Vertex u, Vertex w) { return is_pd_step(p, u, w); },
          [&](const std::vector<Vertex>& path) {
            if (is_parent[path.back()]) reach.try_emplace({path.back(), path[1]}, path);
            return Walk::Extend;
          });

      bool fired = false;
      for (std::size_t i = 0; i < parents.size() && !fired; ++i)
        for (std::size_t j = i + 1; j < parents.size() && !fired; ++j)
          for (auto it1 = reach.lower_bound({parents[i], 0}); it1 != reach.end() && it1->first.first == parents[i] && !fired;
               ++it1)
            for (auto it2 = reach.lower_bound({parents[j], 0});
                 it2 != reach.end() && it2->first.first == parents[j] && !fired; ++it2) {
              Vertex m = it1->first.second, w = it2->first.second;
              if (m == w || p.adjacent(m, w)) continue;
              std::vector<Vertex> claim{parents[i], c, parents[j]};
              out.push_back({{claim, it1->second, it2->second}, {{a, c, Mark::Tail}}});
              fired = true;
            }
    }
  return out;
}

inline std::vector<Instance> find_instances(const MixedGraph& p, RuleId rule, const MixedGraph& g) {
  switch (rule) {
    case RuleId::R0: return find_r0(p, g);
    case RuleId::R1: return find_r1(p);
    case RuleId::R2: return find_r2(p);
    case RuleId::R3: return find_r3(p);
    case RuleId::R4: return find_r4(p, g);
    case RuleId::R5: return find_r5(p);
    case RuleId::R6: return find_r6(p);
    case RuleId::R7: return find_r7(p);
    case RuleId::R8: return find_r8(p);
    case RuleId::R9: return find_r9(p);
    case RuleId::R10: return find_r10(p);
  }
  return {};
}

}  // namespace detail

/// One sweep of `rule`: every instance matched on `p` is applied in sorted
/// witness order. Marks already equal to the target are left alone; a
/// non-circle mark that differs from the target raises MarkConflict.
inline RuleApplication apply_rule(const MixedGraph& p, RuleId rule, const MixedGraph& g) {
  if (!p.same_adjacencies(g)) throw GraphError(ErrorCode::SkeletonMismatch, "partial graph and MAG differ in adjacencies");
  auto instances = detail::find_instances(p, rule, g);
  std::sort(instances.begin(), instances.end());

  MarkEditor editor(p, GraphKind::Pmg);
  RuleApplication result;
  for (const auto& inst : instances) {
    RuleFiring firing{rule, {}, inst.witnesses};
    for (const auto& t : inst.targets) {
      Mark cur = editor.view().mark(t.at, t.other);
      if (cur == t.mark) continue;
      if (cur != Mark::Circle)
        throw GraphError(ErrorCode::MarkConflict, std::string(to_string(rule)) + " would overwrite the mark at '" +
                                                      p.label(t.at) + "' on the edge to '" + p.label(t.other) + "'");
      editor.set_mark(t.at, t.other, t.mark);
      firing.changes.push_back({t.at, t.other, Mark::Circle, t.mark});
    }
    if (!firing.changes.empty()) result.firings.push_back(std::move(firing));
  }
  result.graph = editor.finish();
  return result;
}

namespace detail {

/// Sweeps `rules` until a full sweep changes nothing.
inline MixedGraph run_to_fixpoint(MixedGraph p, const MixedGraph& g, std::vector<RuleId> rules,
                                  std::vector<RuleFiring>& trace, std::optional<std::mt19937_64>& rng) {
  const std::size_t limit = 3 * 2 * p.edge_count() + 1;
  for (std::size_t sweep = 1;; ++sweep) {
    if (sweep > limit) throw GraphError(ErrorCode::NonTermination, "rule sweeps exceeded " + std::to_string(limit));
    if (rng) std::shuffle(rules.begin(), rules.end(), *rng);
    bool changed = false;
    for (RuleId r : rules) {
      RuleApplication step = apply_rule(p, r, g);
      if (step.firings.empty()) continue;
      changed = true;
      trace.insert(trace.end(), step.firings.begin(), step.firings.end());
      p = std::move(step.graph);
    }
    if (!changed) return p;
  }
}

}  // namespace detail

/// Closes `p` under the orientation rules. The FCI stage applies R0 once and
/// then R1-R4 to a fixpoint; the AFCI stage continues with R1-R10 to a global
/// fixpoint. With Stage::Fci the returned p_afci equals p_fci.
inline StagedPag close(const MixedGraph& p, const MixedGraph& g, Stage stage, const CloseOptions& options = {}) {
  StagedPag out;
  out.skeleton = p;
  std::optional<std::mt19937_64> rng;
  if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

  RuleApplication r0 = apply_rule(p, RuleId::R0, g);
  out.trace = r0.firings;
  out.p_fci = detail::run_to_fixpoint(r0.graph, g, {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4}, out.trace, rng);
  if (stage == Stage::Fci) {
    out.p_afci = out.p_fci;
    return out;
  }
  out.p_afci = detail::run_to_fixpoint(out.p_fci, g,
                                       {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5, RuleId::R6,
                                        RuleId::R7, RuleId::R8, RuleId::R9, RuleId::R10},
                                       out.trace, rng);
  return out;
}

/// The PAG of a MAG's equivalence class, with both stages and the trace.
inline StagedPag build_pag(const MixedGraph& g, const CloseOptions& options = {}) {
  return close(init_pmg(g), g, Stage::Afci, options);
}

}  // namespace magpag
