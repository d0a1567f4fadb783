#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "su3paths/graph.hpp"
#include "su3paths/perron.hpp"

namespace su3paths {

struct ResidualEntry {
  std::string equation;
  double residual;       // |LHS - RHS|
  double rhs_magnitude;
};

struct CellResidualReport {
  double max_type1_residual = 0.0;
  double max_type2_residual = 0.0;  // absolute
  double max_type2_relative = 0.0;  // |LHS-RHS| / max(1, |RHS|)
  std::vector<ResidualEntry> type1;
  std::vector<ResidualEntry> type2;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// One complex value per oriented 3-cycle of the graph, keyed canonically;
// lookups are cyclic-invariant. Collapsed (degenerate a,b,a) values are
// implied by the Perron data and not stored.
class CellSystem {
 public:
  CellSystem(std::shared_ptr<const Graph> g, PerronData p,
             std::map<Triangle, Complex> cells);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  const PerronData& perron() const { return perron_; }
  double beta() const { return perron_.beta; }
  double qdim(VertexId v) const { return perron_.qdim.at(v); }

  Complex cell(VertexId a, VertexId b, VertexId c) const;
  Complex cell(const Triangle& t) const;
  double collapsed(VertexId a, VertexId b) const;
  const std::map<Triangle, Complex>& cells() const { return cells_; }

  // Cell value nudged by delta; the result intentionally violates the
  // defining equations (fault-injection testing).
  CellSystem perturbed(Triangle t, Complex delta) const;

  nlohmann::json to_json() const;
  static CellSystem from_json(std::shared_ptr<const Graph> g, const nlohmann::json& doc);
  static CellSystem load_file(std::shared_ptr<const Graph> g, const std::string& path);

  // Residual report attached by the solver or loader that produced this system.
  const std::optional<CellResidualReport>& attached_report() const { return report_; }
  void attach_report(CellResidualReport r) { report_ = std::move(r); }

 private:
  std::shared_ptr<const Graph> graph_;
  PerronData perron_;
  std::map<Triangle, Complex> cells_;
  std::optional<CellResidualReport> report_;
};

// sqrt([a][b]) for nearest neighbors a, b (either direction); throws otherwise.
double collapsed_cell(const Graph& g, const PerronData& p, VertexId a, VertexId b);

// Quadruple (i,j,l,m) with edges i->j, l->j, l->m, i->m; the index pattern
// of one big-pocket equation. Enumerated in lexicographic order.
struct Type2Instance {
  VertexId i, j, l, m;
};
std::vector<Type2Instance> type2_instances(const Graph& g);

// Per directed edge a->b in at least one triangle:
//   sum_c |T_abc|^2 = beta [a][b].
CellResidualReport verify_type1(const CellSystem& cs);

// Per quadruple (i,j,l,m):
//   sum_k (1/[k]) T_ijk conj(T_ljk) T_lmk conj(T_imk)
//     = (beta^2/(beta+1)) * ([i][j][l] d_jm + [i][j][m] d_il),
// the k-sum running over vertices completing all four triangles.
// The beta^2/(beta+1) factor makes the right-hand side consistent with
// beta-normalized small-pocket cells at every level (it equals 1 exactly
// when beta is the golden ratio, where the unscaled form is usually quoted).
CellResidualReport verify_type2(const CellSystem& cs);

// Both verifiers merged into one report.
CellResidualReport verify_cells(const CellSystem& cs);

// Real nonnegative cells for A-series graphs via projected Levenberg-Marquardt
// on the stacked Type I + Type II residuals. Deterministic.
CellSystem solve_cells_a_series(std::shared_ptr<const Graph> g, const PerronData& p);

}  // namespace su3paths
