#include "su3paths/cells.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

namespace su3paths {

namespace {

std::string edge_key(const Graph& g, VertexId a, VertexId b) {
  return g.vertex(a).key + "->" + g.vertex(b).key;
}

std::string quad_key(const Graph& g, const Type2Instance& q) {
  return "(" + g.vertex(q.i).key + "; " + g.vertex(q.j).key + "; " + g.vertex(q.l).key +
         "; " + g.vertex(q.m).key + ")";
}

// k completing all four triangles of a big-pocket instance.
std::vector<VertexId> common_completions(const Graph& g, const Type2Instance& q) {
  std::vector<VertexId> ks = g.triangle_completions(q.i, q.j);
  auto keep = [&](const std::vector<VertexId>& other) {
    std::vector<VertexId> r;
    std::set_intersection(ks.begin(), ks.end(), other.begin(), other.end(),
                          std::back_inserter(r));
    ks = std::move(r);
  };
  keep(g.triangle_completions(q.l, q.j));
  keep(g.triangle_completions(q.l, q.m));
  keep(g.triangle_completions(q.i, q.m));
  return ks;
}

}  // namespace

CellSystem::CellSystem(std::shared_ptr<const Graph> g, PerronData p,
                       std::map<Triangle, Complex> cells)
    : graph_(std::move(g)), perron_(std::move(p)) {
  for (auto& [t, v] : cells) {
    Triangle c = canonical_rotation(t);
    if (!graph_->is_triangle(c[0], c[1], c[2]))
      throw InputError("cell key is not a triangle of the graph: " +
                       edge_key(*graph_, t[0], t[1]) + "->" + graph_->vertex(t[2]).key);
    if (!cells_.emplace(c, v).second)
      throw InputError("duplicate cell for triangle at " + graph_->vertex(c[0]).key);
  }
  for (const Triangle& t : graph_->triangles())
    if (!cells_.count(t))
      throw InputError("missing cell for triangle (" + graph_->vertex(t[0]).key + ", " +
                       graph_->vertex(t[1]).key + ", " + graph_->vertex(t[2]).key + ")");
}

Complex CellSystem::cell(const Triangle& t) const {
  auto it = cells_.find(canonical_rotation(t));
  if (it == cells_.end())
    throw InputError("not a triangle of the graph: (" + graph_->vertex(t[0]).key + ", " +
                     graph_->vertex(t[1]).key + ", " + graph_->vertex(t[2]).key + ")");
  return it->second;
}

Complex CellSystem::cell(VertexId a, VertexId b, VertexId c) const {
  return cell(Triangle{a, b, c});
}

double CellSystem::collapsed(VertexId a, VertexId b) const {
  return collapsed_cell(*graph_, perron_, a, b);
}

CellSystem CellSystem::perturbed(Triangle t, Complex delta) const {
  Triangle c = canonical_rotation(t);
  auto cells = cells_;
  auto it = cells.find(c);
  if (it == cells.end()) throw InputError("perturbed: unknown triangle");
  it->second += delta;
  return CellSystem(graph_, perron_, std::move(cells));
}

nlohmann::json CellSystem::to_json() const {
  nlohmann::json doc;
  doc["graph"] = graph_->name();
  auto& arr = doc["cells"] = nlohmann::json::array();
  for (const auto& [t, v] : cells_) {
    nlohmann::json e;
    e["triangle"] = {graph_->vertex(t[0]).key, graph_->vertex(t[1]).key,
                     graph_->vertex(t[2]).key};
    e["re"] = v.real();
    e["im"] = v.imag();
    arr.push_back(std::move(e));
  }
  return doc;
}

CellSystem CellSystem::from_json(std::shared_ptr<const Graph> g, const nlohmann::json& doc) {
  std::map<Triangle, Complex> cells;
  try {
    if (doc.at("graph").get<std::string>() != g->name())
      throw InputError("cells document is for graph '" +
                       doc.at("graph").get<std::string>() + "', expected '" + g->name() + "'");
    for (const auto& e : doc.at("cells")) {
      const auto& tk = e.at("triangle");
      Triangle t = {g->find_vertex(tk.at(0).get<std::string>()),
                    g->find_vertex(tk.at(1).get<std::string>()),
                    g->find_vertex(tk.at(2).get<std::string>())};
      cells[canonical_rotation(t)] = Complex(e.at("re").get<double>(), e.at("im").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("cells document: ") + e.what());
  }
  PerronData p = perron_data(*g);
  CellSystem cs(std::move(g), std::move(p), std::move(cells));
  cs.attach_report(verify_cells(cs));
  return cs;
}

CellSystem CellSystem::load_file(std::shared_ptr<const Graph> g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("parse error in '") + path + "': " + e.what());
  }
  return from_json(std::move(g), doc);
}

double collapsed_cell(const Graph& g, const PerronData& p, VertexId a, VertexId b) {
  if (!g.has_edge(a, b) && !g.has_edge(b, a))
    throw InputError("collapsed_cell: " + g.vertex(a).key + " and " + g.vertex(b).key +
                     " are not nearest neighbors");
  return std::sqrt(p.qdim.at(a) * p.qdim.at(b));
}

std::vector<Type2Instance> type2_instances(const Graph& g) {
  std::vector<Type2Instance> out;
  for (VertexId i = 0; i < g.vertex_count(); ++i)
    for (VertexId j : g.out_neighbors(i))
      for (VertexId l : g.in_neighbors(j))
        for (VertexId m : g.out_neighbors(l))
          if (g.has_edge(i, m)) out.push_back({i, j, l, m});
  return out;
}

CellResidualReport verify_type1(const CellSystem& cs) {
  const Graph& g = cs.graph();
  const PerronData& p = cs.perron();
  CellResidualReport rep;
  for (auto [a, b] : g.edges()) {
    const auto& comp = g.triangle_completions(a, b);
    if (comp.empty()) continue;
    double lhs = 0.0;
    for (VertexId c : comp) lhs += std::norm(cs.cell(a, b, c));
    double rhs = p.beta * p.qdim[a] * p.qdim[b];
    double resid = std::abs(lhs - rhs);
    rep.type1.push_back({"type1 " + edge_key(g, a, b), resid, std::abs(rhs)});
    rep.max_type1_residual = std::max(rep.max_type1_residual, resid);
  }
  return rep;
}

CellResidualReport verify_type2(const CellSystem& cs) {
  const Graph& g = cs.graph();
  const PerronData& p = cs.perron();
  const double beta = p.beta;
  const double scale = beta * beta / (beta + 1.0);
  CellResidualReport rep;
  for (const Type2Instance& q : type2_instances(g)) {
    Complex lhs = 0.0;
    for (VertexId k : common_completions(g, q)) {
      lhs += cs.cell(q.i, q.j, k) * std::conj(cs.cell(q.l, q.j, k)) *
             cs.cell(q.l, q.m, k) * std::conj(cs.cell(q.i, q.m, k)) / p.qdim[k];
    }
    double rhs = 0.0;
    if (q.j == q.m) rhs += scale * p.qdim[q.i] * p.qdim[q.j] * p.qdim[q.l];
    if (q.i == q.l) rhs += scale * p.qdim[q.i] * p.qdim[q.j] * p.qdim[q.m];
    double resid = std::abs(lhs - rhs);
    rep.type2.push_back({"type2 " + quad_key(g, q), resid, std::abs(rhs)});
    rep.max_type2_residual = std::max(rep.max_type2_residual, resid);
    rep.max_type2_relative =
        std::max(rep.max_type2_relative, resid / std::max(1.0, std::abs(rhs)));
  }
  return rep;
}

CellResidualReport verify_cells(const CellSystem& cs) {
  CellResidualReport rep = verify_type1(cs);
  CellResidualReport t2 = verify_type2(cs);
  rep.max_type2_residual = t2.max_type2_residual;
  rep.max_type2_relative = t2.max_type2_relative;
  rep.type2 = std::move(t2.type2);
  return rep;
}

nlohmann::json CellResidualReport::to_json() const {
  nlohmann::json doc;
  doc["max_type1_residual"] = max_type1_residual;
  doc["max_type2_residual"] = max_type2_residual;
  doc["max_type2_relative"] = max_type2_relative;
  auto dump = [](const std::vector<ResidualEntry>& v) {
    auto arr = nlohmann::json::array();
    for (const auto& e : v)
      arr.push_back({{"equation", e.equation}, {"residual", e.residual},
                     {"rhs_magnitude", e.rhs_magnitude}});
    return arr;
  };
  doc["type1"] = dump(type1);
  doc["type2"] = dump(type2);
  return doc;
}

std::string CellResidualReport::to_text() const {
  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(3);
  os << "small pocket: " << type1.size() << " equations, max residual "
     << max_type1_residual << "\n";
  os << "big pocket:   " << type2.size() << " equations, max residual "
     << max_type2_residual << " (relative " << max_type2_relative << ")\n";
  for (const auto& e : type1)
    if (e.residual > 1e-10) os << "  FAIL " << e.equation << " residual " << e.residual << "\n";
  for (const auto& e : type2)
    if (e.residual / std::max(1.0, e.rhs_magnitude) > 1e-8)
      os << "  FAIL " << e.equation << " residual " << e.residual << "\n";
  return os.str();
}

CellSystem solve_cells_a_series(std::shared_ptr<const Graph> g, const PerronData& p) {
  if (!g->level())
    throw InputError("cell solver handles A-series graphs only (level must be set)");
  const auto& tris = g->triangles();
  const int T = static_cast<int>(tris.size());
  if (T == 0) {
    CellSystem cs(std::move(g), p, {});
    cs.attach_report(verify_cells(cs));
    return cs;
  }
  std::map<Triangle, int> tidx;
  for (int t = 0; t < T; ++t) tidx[tris[t]] = t;
  auto idx = [&](VertexId a, VertexId b, VertexId c) {
    return tidx.at(canonical_rotation({a, b, c}));
  };

  // Type I equations: one per directed edge in >=1 triangle.
  struct Eq1 {
    std::vector<int> ts;
    double rhs, inv_scale;
  };
  std::vector<Eq1> eq1;
  for (auto [a, b] : g->edges()) {
    const auto& comp = g->triangle_completions(a, b);
    if (comp.empty()) continue;
    Eq1 e;
    for (VertexId c : comp) e.ts.push_back(idx(a, b, c));
    e.rhs = p.beta * p.qdim[a] * p.qdim[b];
    e.inv_scale = 1.0 / std::max(1.0, std::abs(e.rhs));
    eq1.push_back(std::move(e));
  }

  // Type II equations: quartic terms, one per instance with a nonempty k-sum
  // or a firing delta.
  struct Eq2 {
    std::vector<std::pair<std::array<int, 4>, double>> terms;  // triangle ids, 1/[k]
    double rhs, inv_scale;
  };
  const double scale = p.beta * p.beta / (p.beta + 1.0);
  std::vector<Eq2> eq2;
  for (const Type2Instance& q : type2_instances(*g)) {
    Eq2 e;
    for (VertexId k : common_completions(*g, q))
      e.terms.push_back({{idx(q.i, q.j, k), idx(q.l, q.j, k), idx(q.l, q.m, k),
                          idx(q.i, q.m, k)},
                         1.0 / p.qdim[k]});
    e.rhs = 0.0;
    if (q.j == q.m) e.rhs += scale * p.qdim[q.i] * p.qdim[q.j] * p.qdim[q.l];
    if (q.i == q.l) e.rhs += scale * p.qdim[q.i] * p.qdim[q.j] * p.qdim[q.m];
    if (e.terms.empty() && e.rhs == 0.0) continue;
    e.inv_scale = 1.0 / std::max(1.0, std::abs(e.rhs));
    eq2.push_back(std::move(e));
  }

  const int R = static_cast<int>(eq1.size() + eq2.size());
  auto residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    int row = 0;
    for (const Eq1& e : eq1) {
      double lhs = 0.0;
      for (int t : e.ts) lhs += x[t] * x[t];
      r[row++] = (lhs - e.rhs) * e.inv_scale;
    }
    for (const Eq2& e : eq2) {
      double lhs = 0.0;
      for (const auto& [ts, w] : e.terms) lhs += w * x[ts[0]] * x[ts[1]] * x[ts[2]] * x[ts[3]];
      r[row++] = (lhs - e.rhs) * e.inv_scale;
    }
  };
  auto jacobian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& J) {
    J.setZero();
    int row = 0;
    for (const Eq1& e : eq1) {
      for (int t : e.ts) J(row, t) += 2.0 * x[t] * e.inv_scale;
      ++row;
    }
    for (const Eq2& e : eq2) {
      for (const auto& [ts, w] : e.terms)
        for (int pos = 0; pos < 4; ++pos) {
          double prod = w;
          for (int o = 0; o < 4; ++o)
            if (o != pos) prod *= x[ts[o]];
          J(row, ts[pos]) += prod * e.inv_scale;
        }
      ++row;
    }
  };

  // Start on the small-pocket sphere: split beta [a][b] evenly across the
  // triangles through each edge, then average over the triangle's edges.
  Eigen::VectorXd x(T);
  for (int t = 0; t < T; ++t) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r) {
      VertexId a = tris[t][r], b = tris[t][(r + 1) % 3];
      double nt = static_cast<double>(g->triangle_completions(a, b).size());
      s += std::sqrt(p.beta * p.qdim[a] * p.qdim[b] / nt);
    }
    x[t] = s / 3.0;
  }

  Eigen::VectorXd r(R), rn(R);
  Eigen::MatrixXd J(R, T);
  double mu = 1e-3;
  residuals(x, r);
  bool done = false;
  for (int iter = 0; iter < 10000 && !done; ++iter) {
    if (r.cwiseAbs().maxCoeff() < 1e-14) {
      done = true;
      break;
    }
    jacobian(x, J);
    Eigen::MatrixXd H = J.transpose() * J;
    Eigen::VectorXd gvec = J.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd Hm = H;
      Hm.diagonal().array() += mu;
      Eigen::VectorXd d = Hm.ldlt().solve(-gvec);
      Eigen::VectorXd xn = (x + d).cwiseMax(0.0);
      residuals(xn, rn);
      if (rn.squaredNorm() < r.squaredNorm()) {
        x = xn;
        r = rn;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        break;
      }
      mu *= 2.0;
    }
    if (!accepted) break;  // stalled; final residual check below decides
  }
  double worst = r.cwiseAbs().maxCoeff();
  if (worst > 1e-11) {
    std::ostringstream os;
    os << "cell solver did not converge: max scaled residual " << worst;
    throw ConvergenceError(os.str());
  }

  std::map<Triangle, Complex> cells;
  for (int t = 0; t < T; ++t) cells[tris[t]] = Complex(x[t], 0.0);
  CellSystem cs(std::move(g), p, std::move(cells));
  cs.attach_report(verify_cells(cs));
  return cs;
}

}  // namespace su3paths
