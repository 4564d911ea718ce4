#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "magpag/equivalence.hpp"
#include "magpag/graph.hpp"
#include "magpag/io.hpp"
#include "magpag/mag_ops.hpp"
#include "magpag/msep.hpp"
#include "magpag/orientation.hpp"
#include "magpag/representative.hpp"

namespace magpag::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised after a validation report has been printed for a non-MAG input.
struct ReportedDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(file), {});
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline void print_report(const MixedGraph& g, std::ostream& out) {
  if (g.has_circles()) {
    out << "ancestral: false\nmaximal: false\n";
    for (const Edge& e : g.edges())
      if (e.at_u == Mark::Circle || e.at_v == Mark::Circle)
        out << "violation: " << to_string(ViolationCode::CircleMarkPresent) << ' ' << g.label(e.u) << ','
            << g.label(e.v) << '\n';
    return;
  }
  ValidationReport anc = check_ancestral(g);
  out << "ancestral: " << (anc.ok() ? "true" : "false") << '\n';
  if (!anc.ok()) {
    out << "maximal: unchecked\n";
    for (const auto& v : anc.violations) out << "violation: " << describe(g, v) << '\n';
    return;
  }
  ValidationReport max = check_maximal(g);
  out << "maximal: " << (max.ok() ? "true" : "false") << '\n';
  for (const auto& v : max.violations) out << "violation: " << describe(g, v) << '\n';
}

inline void require_mag(const MixedGraph& g, std::ostream& out) {
  if (is_mag(g)) return;
  print_report(g, out);
  throw ReportedDomainError("input is not a MAG");
}

inline void print_trace(const MixedGraph& g, const std::vector<RuleFiring>& trace, std::ostream& out) {
  std::size_t index = 0;
  for (const RuleFiring& f : trace) {
    ++index;
    std::string witnesses;
    for (std::size_t i = 0; i < f.witnesses.size(); ++i) {
      if (i) witnesses += ';';
      witnesses += describe(g, f.witnesses[i]);
    }
    for (const MarkChange& c : f.changes)
      out << index << ' ' << to_string(f.rule) << ' ' << g.label(c.at) << ' ' << g.label(c.other) << ' '
          << mark_glyph(c.old_mark) << ' ' << mark_glyph(c.new_mark) << ' ' << witnesses << '\n';
  }
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal ancestral graphs, m-separation and PAG construction", "magpag"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::size_t cap = kDefaultClassCap;
  std::string format_name = "text";
  app.add_option("--seed", seed, "Seed for randomized subcommands");
  app.add_option("--cap", cap, "Candidate cap for class enumeration");
  app.add_option("--format", format_name, "Graph output format")->check(CLI::IsMember({"text", "dot"}));

  std::string file, file2;
  auto with_file = [&](CLI::App* sub) { sub->add_option("file", file, "Graph file, '-' for stdin")->required(); };

  auto* validate = app.add_subcommand("validate", "Check ancestrality and maximality");
  with_file(validate);
  auto* complete = app.add_subcommand("complete", "Add bidirected edges until maximal");
  with_file(complete);

  std::string latent, selection;
  auto* project = app.add_subcommand("project", "Project a DAG onto its observed variables");
  with_file(project);
  project->add_option("--latent", latent, "Comma-separated latent variables");
  project->add_option("--selection", selection, "Comma-separated selection variables");

  std::size_t n_vertices = 5, n_edges = 6;
  double selection_fraction = 0.0;
  auto* random = app.add_subcommand("random", "Random MAG via DAG projection");
  random->add_option("--vertices", n_vertices, "Observed vertices");
  random->add_option("--edges", n_edges, "Generating adjacencies");
  random->add_option("--selection-fraction", selection_fraction, "Share of selection-induced pairs");

  std::string xs, ys, given;
  auto* msep = app.add_subcommand("msep", "Decide m-separation");
  with_file(msep);
  msep->add_option("--x", xs, "Comma-separated vertices")->required();
  msep->add_option("--y", ys, "Comma-separated vertices")->required();
  msep->add_option("--given", given, "Comma-separated conditioning set");

  auto* equiv = app.add_subcommand("equiv", "Test Markov equivalence of two MAGs");
  equiv->add_option("first", file, "First MAG")->required();
  equiv->add_option("second", file2, "Second MAG")->required();

  auto* klass = app.add_subcommand("class", "Enumerate the Markov equivalence class");
  with_file(klass);
  auto* invariants = app.add_subcommand("invariants", "PAG from the enumerated class");
  with_file(invariants);
  auto* fci = app.add_subcommand("fci", "Apply R0-R4 only");
  with_file(fci);

  std::string stage_name = "afci";
  auto* pag = app.add_subcommand("pag", "Apply R0-R10");
  with_file(pag);
  pag->add_option("--stage", stage_name, "fci or afci")->check(CLI::IsMember({"fci", "afci"}));
  auto* representative = app.add_subcommand("representative", "Representative MAG of a PAG (or of a MAG's PAG)");
  with_file(representative);
  auto* trace = app.add_subcommand("trace", "Print every rule firing");
  with_file(trace);
  trace->add_option("--stage", stage_name, "fci or afci")->check(CLI::IsMember({"fci", "afci"}));

  std::vector<std::string> argv_storage{"magpag"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  Format format = format_name == "dot" ? Format::Dot : Format::Text;
  try {
    auto load = [&](const std::string& path) { return parse_graph(detail::read_input(path, in)); };
    if (validate->parsed()) {
      MixedGraph g = load(file);
      detail::print_report(g, out);
      return is_mag(g) ? kOk : kDomainError;
    }
    if (complete->parsed()) {
      out << serialize_graph(maximal_completion(load(file)), format);
      return kOk;
    }
    if (project->parsed()) {
      MixedGraph dag = load(file);
      DagSpec spec{dag, vertex_set(dag, detail::split_list(latent)), vertex_set(dag, detail::split_list(selection))};
      out << serialize_graph(project_dag(spec), format);
      return kOk;
    }
    if (random->parsed()) {
      out << serialize_graph(random_mag(n_vertices, n_edges, selection_fraction, seed), format);
      return kOk;
    }
    if (msep->parsed()) {
      MixedGraph g = load(file);
      bool sep = m_separated(g, vertex_set(g, detail::split_list(xs)), vertex_set(g, detail::split_list(ys)),
                             vertex_set(g, detail::split_list(given)));
      out << "separated: " << (sep ? "true" : "false") << '\n';
      return kOk;
    }
    if (equiv->parsed()) {
      MixedGraph g1 = load(file), g2 = load(file2);
      detail::require_mag(g1, out);
      detail::require_mag(g2, out);
      EquivalenceResult r = markov_equivalent(g1, g2);
      out << "equivalent: " << (r.equivalent ? "true" : "false");
      if (!r.equivalent) out << " (" << r.reason(g1) << ')';
      out << '\n';
      return kOk;
    }
    if (klass->parsed()) {
      MixedGraph g = load(file);
      detail::require_mag(g, out);
      EquivalenceClass cls = enumerate_class(g, cap);
      out << "class-size: " << cls.members.size() << '\n';
      for (std::size_t i = 0; i < cls.members.size(); ++i)
        out << "# member " << (i + 1) << '\n' << serialize_graph(cls.members[i], format);
      return kOk;
    }
    if (invariants->parsed()) {
      MixedGraph g = load(file);
      detail::require_mag(g, out);
      out << serialize_graph(invariant_marks(g, cap).pag, format);
      return kOk;
    }
    if (fci->parsed() || pag->parsed() || trace->parsed()) {
      MixedGraph g = load(file);
      detail::require_mag(g, out);
      Stage stage = (fci->parsed() || stage_name == "fci") ? Stage::Fci : Stage::Afci;
      StagedPag staged = close(init_pmg(g), g, stage);
      if (trace->parsed())
        detail::print_trace(g, staged.trace, out);
      else
        out << serialize_graph(stage == Stage::Fci ? staged.p_fci : staged.p_afci, format);
      return kOk;
    }
    if (representative->parsed()) {
      MixedGraph g = load(file);
      MixedGraph p = g;
      if (g.kind() != GraphKind::Pmg) {
        detail::require_mag(g, out);
        p = build_pag(g).p_afci;
      }
      out << serialize_graph(representative_mag(p), format);
      return kOk;
    }
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const detail::ReportedDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace magpag::cli
