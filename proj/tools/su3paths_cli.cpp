#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "su3paths/essential.hpp"
#include "su3paths/relations.hpp"

using namespace su3paths;

namespace {

// Default tolerance, overridable through SU3PATHS_TOL (a positive double).
double default_tol() {
  if (const char* e = std::getenv("SU3PATHS_TOL")) {
    char* end = nullptr;
    double v = std::strtod(e, &end);
    if (end && *end == '\0' && v > 0.0) return v;
    std::cerr << "warning: ignoring unparsable SU3PATHS_TOL='" << e << "'\n";
  }
  return 1e-10;
}

std::string fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

// Artifacts go to --out ("-" is stdout, empty is nowhere); the human summary
// stays on stdout unless the artifact occupies it.
void write_artifact(const std::string& out, const std::string& bytes) {
  if (out.empty()) return;
  if (out == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot open output file '" + out + "'");
  f << bytes;
  if (!f.good()) throw std::runtime_error("short write to '" + out + "'");
}

std::ostream& info_stream(const std::string& out) { return out == "-" ? std::cerr : std::cout; }

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::shared_ptr<const Graph> graph_source(int level, const std::string& graph_file) {
  if (!graph_file.empty()) return std::make_shared<Graph>(Graph::load_file(graph_file));
  if (level < 0) throw InputError("need --level or --graph");
  return std::make_shared<Graph>(Graph::a_series(level));
}

CellSystem cells_source(std::shared_ptr<const Graph> g, const std::string& cells_file) {
  if (!cells_file.empty()) return CellSystem::load_file(std::move(g), cells_file);
  return solve_cells_a_series(g, perron_data(*g));
}

void print_graph_summary(std::ostream& os, const Graph& g, const PerronData& p) {
  os << "graph " << g.name() << ": " << g.vertex_count() << " vertices, " << g.edge_count()
     << " edges, " << g.triangles().size() << " triangles\n";
  if (g.edge_count() == 0)
    os << "beta " << fixed12(0.0) << " (no edges; graph norm undefined, reported as 0)\n";
  else
    os << "beta " << fixed12(p.beta) << "\n";
  os << "quantum dimensions:\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    os << "  " << g.vertex(v).key << "  " << fixed12(p.qdim.at(v)) << "\n";
}

int cmd_graph(int level, const std::string& in_file, const std::string& out) {
  auto g = graph_source(level, in_file);
  print_graph_summary(info_stream(out), *g, perron_data(*g));
  write_artifact(out, dump(g->to_json()));
  return 0;
}

int cmd_cells_solve(int level, const std::string& graph_file, const std::string& out, double tol,
                    double tol2) {
  auto g = graph_source(level, graph_file);
  CellSystem cs = solve_cells_a_series(g, perron_data(*g));
  const CellResidualReport& rep = *cs.attached_report();

  std::ostream& os = info_stream(out);
  os << cs.cells().size() << " cells solved on " << g->name() << "\n" << rep.to_text();

  nlohmann::json doc = cs.to_json();
  doc["report"] = rep.to_json();
  write_artifact(out, dump(doc));
  return rep.max_type1_residual <= tol && rep.max_type2_relative <= tol2 ? 0 : 1;
}

int cmd_cells_verify(int level, const std::string& graph_file, const std::string& cells_file,
                     const std::string& out, double tol, double tol2) {
  auto g = graph_source(level, graph_file);
  CellSystem cs = cells_source(g, cells_file);
  CellResidualReport rep = verify_cells(cs);
  info_stream(out) << rep.to_text();
  write_artifact(out, dump(rep.to_json()));
  return rep.max_type1_residual <= tol && rep.max_type2_relative <= tol2 ? 0 : 1;
}

int cmd_cells_show(int level, const std::string& graph_file, const std::string& cells_file,
                   const std::string& out) {
  auto g = graph_source(level, graph_file);
  CellSystem cs = cells_source(g, cells_file);
  std::ostream& os = info_stream(out);
  for (const auto& [t, v] : cs.cells()) {
    os << g->vertex(t[0]).key << "  " << g->vertex(t[1]).key << "  " << g->vertex(t[2]).key
       << "  " << fixed12(v.real());
    if (v.imag() != 0.0) os << (v.imag() > 0 ? " + " : " - ") << fixed12(std::abs(v.imag())) << "i";
    os << "\n";
  }
  write_artifact(out, dump(cs.to_json()));
  return 0;
}

int parse_rep(const std::string& s, int& p, int& q) {
  char extra;
  if (std::sscanf(s.c_str(), "%d,%d%c", &p, &q, &extra) != 2 || p < 0 || q < 0)
    throw InputError("--rep expects nonnegative integers 'p,q', got '" + s + "'");
  return 0;
}

int cmd_essential_basis(int level, const std::string& graph_file, const std::string& from,
                        const std::string& to, const std::string& rep_str,
                        const std::string& formulation, const std::string& out) {
  auto g = graph_source(level, graph_file);
  CellSystem cs = solve_cells_a_series(g, perron_data(*g));
  int p = 0, q = 0;
  parse_rep(rep_str, p, q);
  SpaceSignature sig{g->find_vertex(from), g->find_vertex(to), canonical_word(p, q)};
  KernelFamily family =
      formulation == "trident" ? KernelFamily::trident : KernelFamily::cupcap;
  EssentialBasis basis = essential_basis(cs, sig, family);
  info_stream(out) << "dimension " << basis.dim() << "\n";
  write_artifact(out, dump(basis.to_json(*g)));
  return 0;
}

int cmd_essential_report(int level, const std::string& graph_file, int max_length,
                         const std::string& out) {
  auto g = graph_source(level, graph_file);
  CellSystem cs = solve_cells_a_series(g, perron_data(*g));
  DimsReport rep = essential_dims_report(cs, fusion_table(g), max_length);
  info_stream(out) << rep.rows.size() << " rows, "
                   << (rep.all_match ? "all dimensions match fusion"
                                     : "DIMENSION MISMATCHES PRESENT")
                   << "\n";
  write_artifact(out, rep.to_csv(*g));
  return rep.all_match ? 0 : 1;
}

int cmd_verify(int level, const std::string& graph_file, const std::string& cells_file,
               int samples, std::uint64_t seed, double tol, int len_sampled, int len_exhaustive,
               const std::string& out) {
  auto g = graph_source(level, graph_file);
  CellSystem cs = cells_source(g, cells_file);
  RelationReport rep = run_relation_suite(cs, samples, seed, tol, len_sampled, len_exhaustive);
  info_stream(out) << rep.to_text();
  write_artifact(out, dump(rep.to_json()));
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator algebra over path spaces on SU(3) ADE graphs"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 verification failure, 2 bad input or usage.\n"
      "SU3PATHS_TOL sets the default tolerance where --tol is not given.");

  int level = -1;
  std::string graph_file, cells_file, out, from, to, rep_str, formulation = "cupcap";
  double tol = default_tol(), tol2 = 1e-8;
  int samples = 50, len_sampled = 6, len_exhaustive = 4, max_length = 4;
  std::uint64_t seed = 1;

  auto add_graph_source = [&](CLI::App* c) {
    c->add_option("--level", level, "A-series level (k >= 0)")->check(CLI::NonNegativeNumber);
    c->add_option("--graph", graph_file, "graph JSON file instead of --level");
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", out, "artifact destination ('-' for stdout)");
  };

  CLI::App* graph_cmd = app.add_subcommand("graph", "build or inspect a graph");
  graph_cmd->require_subcommand(1);
  CLI::App* graph_gen = graph_cmd->add_subcommand("gen", "generate an A-series graph");
  graph_gen->add_option("--level", level, "A-series level (k >= 0)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  add_out(graph_gen);
  CLI::App* graph_info = graph_cmd->add_subcommand("info", "inspect a graph JSON file");
  graph_info->add_option("--in", graph_file, "graph JSON file")->required();
  add_out(graph_info);

  CLI::App* cells_cmd = app.add_subcommand("cells", "solve or check triangular cells");
  cells_cmd->require_subcommand(1);
  CLI::App* cells_solve = cells_cmd->add_subcommand("solve", "solve the cell equations");
  add_graph_source(cells_solve);
  add_out(cells_solve);
  cells_solve->add_option("--tol", tol, "small-pocket residual bound");
  cells_solve->add_option("--tol2", tol2, "big-pocket relative residual bound");
  CLI::App* cells_verify = cells_cmd->add_subcommand("verify", "verify a cell system");
  add_graph_source(cells_verify);
  cells_verify->add_option("--in", cells_file, "cells JSON file (default: solve fresh)");
  add_out(cells_verify);
  cells_verify->add_option("--tol", tol, "small-pocket residual bound");
  cells_verify->add_option("--tol2", tol2, "big-pocket relative residual bound");
  CLI::App* cells_show = cells_cmd->add_subcommand("show", "print the cell table");
  add_graph_source(cells_show);
  cells_show->add_option("--in", cells_file, "cells JSON file (default: solve fresh)");
  add_out(cells_show);

  CLI::App* essential_cmd =
      app.add_subcommand("essential", "essential-path bases and dimension surveys");
  add_graph_source(essential_cmd);
  essential_cmd->add_option("--from", from, "start vertex key, e.g. 0,0");
  essential_cmd->add_option("--to", to, "end vertex key");
  essential_cmd->add_option("--rep", rep_str, "representation 'p,q'");
  essential_cmd->add_option("--formulation", formulation, "annihilator family")
      ->check(CLI::IsMember({"cupcap", "trident"}));
  add_out(essential_cmd);
  CLI::App* essential_report =
      essential_cmd->add_subcommand("report", "dimension survey against fusion");
  essential_report->fallthrough();
  essential_report->add_option("--max-length", max_length, "max p+q surveyed");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the operator relation suite");
  add_graph_source(verify_cmd);
  verify_cmd->add_option("--cells", cells_file, "cells JSON file (default: solve fresh)");
  verify_cmd->add_option("--samples", samples, "random vectors per instance");
  verify_cmd->add_option("--seed", seed, "sampling seed");
  verify_cmd->add_option("--tol", tol, "residual bound");
  verify_cmd->add_option("--len-sampled", len_sampled, "max word length, sampled checks");
  verify_cmd->add_option("--len-exhaustive", len_exhaustive, "max word length, matrix checks");
  add_out(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (graph_gen->parsed()) return cmd_graph(level, "", out);
    if (graph_info->parsed()) return cmd_graph(-1, graph_file, out);
    if (cells_solve->parsed()) return cmd_cells_solve(level, graph_file, out, tol, tol2);
    if (cells_verify->parsed())
      return cmd_cells_verify(level, graph_file, cells_file, out, tol, tol2);
    if (cells_show->parsed()) return cmd_cells_show(level, graph_file, cells_file, out);
    if (essential_report->parsed()) return cmd_essential_report(level, graph_file, max_length, out);
    if (essential_cmd->parsed()) {
      if (from.empty() || to.empty() || rep_str.empty())
        throw InputError("essential needs --from, --to and --rep (or the report subcommand)");
      return cmd_essential_basis(level, graph_file, from, to, rep_str, formulation, out);
    }
    if (verify_cmd->parsed())
      return cmd_verify(level, graph_file, cells_file, samples, seed, tol, len_sampled,
                        len_exhaustive, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
