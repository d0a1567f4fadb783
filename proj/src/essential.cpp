#include "su3paths/essential.hpp"

#include <sstream>

namespace su3paths {

namespace {

constexpr double kKernelCut = 1e-9;  // relative singular value cutoff

Word rep_word(int p, int q) { return canonical_word(p, q); }

int svd_rank(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double cut = std::max(kKernelCut * sv(0), 1e-12);
  int rank = 0;
  for (int i = 0; i < (int)sv.size(); ++i) rank += sv(i) > cut;
  return rank;
}

// Joint kernel of prebuilt constraint matrices (each ambient.dim() wide).
EssentialBasis kernel_from_blocks(const CellSystem& cs, const SpaceSignature& sig,
                                  const std::vector<Eigen::MatrixXcd>& blocks) {
  const Graph& g = cs.graph();
  EssentialBasis out{sig, word_space_basis(g, sig), {}};
  const int d = out.ambient.dim();
  if (d == 0) {
    out.vectors = Eigen::MatrixXcd(0, 0);
    return out;
  }

  int rows = 0;
  for (const auto& b : blocks) rows += (int)b.rows();

  Eigen::MatrixXcd kernel;
  if (rows == 0) {
    kernel = Eigen::MatrixXcd::Identity(d, d);
  } else {
    Eigen::MatrixXcd stacked(rows, d);
    int at = 0;
    for (const auto& b : blocks) {
      stacked.middleRows(at, b.rows()) = b;
      at += (int)b.rows();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = kKernelCut * (sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < (int)sv.size(); ++i) rank += sv(i) > cut;
    kernel = svd.matrixV().rightCols(d - rank);
  }

  // deterministic re-basis of the kernel subspace
  const int kdim = (int)kernel.cols();
  Eigen::MatrixXcd proj = kernel * kernel.adjoint();
  out.vectors = Eigen::MatrixXcd(d, kdim);
  int got = 0;
  for (int j = 0; j < d && got < kdim; ++j) {
    Eigen::VectorXcd w = proj.col(j);
    for (int t = 0; t < got; ++t) w -= out.vectors.col(t) * out.vectors.col(t).dot(w);
    const double nw = w.norm();
    if (nw <= 1e-9) continue;
    w /= nw;
    for (int r = 0; r < d; ++r)
      if (std::abs(w(r)) > 1e-9) {
        w *= std::conj(w(r)) / std::abs(w(r));
        break;
      }
    out.vectors.col(got++) = w;
  }
  if (got != kdim) throw std::logic_error("kernel basis extraction lost rank");
  return out;
}

}  // namespace

std::vector<OperatorSpec> annihilator_specs(const SpaceSignature& sig, KernelFamily family) {
  std::vector<OperatorSpec> out;
  const OpKind partner = family == KernelFamily::cupcap ? OpKind::cup : OpKind::trident;
  for (int i = 1; i <= (int)sig.word.size(); ++i) {
    if (codomain_signature({OpKind::annihilate, i}, sig)) out.push_back({OpKind::annihilate, i});
    if (codomain_signature({partner, i}, sig)) out.push_back({partner, i});
  }
  return out;
}

EssentialBasis kernel_basis(const CellSystem& cs, const SpaceSignature& sig,
                            const std::vector<OperatorSpec>& ops) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& op : ops) {
    OperatorMatrix m = operator_matrix(cs, op, sig);
    if (m.mat.rows() == 0) continue;  // empty codomain constrains nothing
    blocks.push_back(std::move(m.mat));
  }
  return kernel_from_blocks(cs, sig, blocks);
}

EssentialBasis essential_basis(const CellSystem& cs, const SpaceSignature& sig,
                               KernelFamily family) {
  return kernel_basis(cs, sig, annihilator_specs(sig, family));
}

double annihilator_residual(const CellSystem& cs, const SpaceSignature& sig,
                            const std::vector<OperatorSpec>& ops, const Eigen::VectorXcd& v) {
  double worst = 0.0;
  for (const auto& op : ops) {
    OperatorMatrix m = operator_matrix(cs, op, sig);
    if (m.mat.rows() == 0) continue;
    worst = std::max(worst, (m.mat * v).norm());
  }
  return worst;
}

PathVector EssentialBasis::column_as_paths(int k) const {
  PathVector v(sig);
  for (int j = 0; j < ambient.dim(); ++j) v.add(ambient.paths[j], vectors(j, k));
  return v;
}

nlohmann::json EssentialBasis::to_json(const Graph& g) const {
  nlohmann::json cols = nlohmann::json::array();
  for (int k = 0; k < dim(); ++k) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int j = 0; j < ambient.dim(); ++j)
      coeffs.push_back({vectors(j, k).real(), vectors(j, k).imag()});
    cols.push_back(std::move(coeffs));
  }
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& seq : ambient.paths) {
    nlohmann::json keys = nlohmann::json::array();
    for (VertexId v : seq) keys.push_back(g.vertex(v).key);
    paths.push_back(std::move(keys));
  }
  return {{"signature", signature_to_json(g, sig)},
          {"dim", dim()},
          {"ambient_paths", std::move(paths)},
          {"vectors", std::move(cols)}};
}

namespace {

struct SideMeasurement {
  SpaceSignature long_sig;
  int consumer = 0;
  long long dim_T = 0, rank = 0, ker = 0;
  double max_residual = 0.0;
};

// The lift space on the long word pushed through its consuming annihilator.
// Constraints: every annihilate, cup and trident position except the consumer
// itself, plus the short word's annihilators composed with the consumer (the
// image must land in the short essential space, not merely exist).
SideMeasurement measure_side(const CellSystem& cs, VertexId a, VertexId b, int p, int q,
                             bool sigma_side) {
  SideMeasurement out;
  Word lw = sigma_side ? rep_word(p + 2, q - 1) : rep_word(p - 1, q + 2);
  out.long_sig = SpaceSignature{a, b, std::move(lw)};
  out.consumer = sigma_side ? p + 1 : p;

  OperatorMatrix consumer =
      operator_matrix(cs, {OpKind::annihilate, out.consumer}, out.long_sig);

  std::vector<Eigen::MatrixXcd> blocks;
  for (int i = 1; i <= (int)out.long_sig.word.size(); ++i)
    for (OpKind k : {OpKind::annihilate, OpKind::cup, OpKind::trident}) {
      if (k == OpKind::annihilate && i == out.consumer) continue;
      if (!codomain_signature({k, i}, out.long_sig)) continue;
      OperatorMatrix m = operator_matrix(cs, {k, i}, out.long_sig);
      if (m.mat.rows()) blocks.push_back(std::move(m.mat));
    }
  if (consumer.mat.rows() > 0)
    for (const auto& op : annihilator_specs(consumer.codomain, KernelFamily::cupcap)) {
      OperatorMatrix m = operator_matrix(cs, op, consumer.codomain);
      if (m.mat.rows()) blocks.push_back(m.mat * consumer.mat);
    }

  EssentialBasis T = kernel_from_blocks(cs, out.long_sig, blocks);
  out.dim_T = T.dim();

  Eigen::MatrixXcd images = consumer.mat * T.vectors;
  out.rank = svd_rank(images);
  out.ker = out.dim_T - out.rank;

  auto short_ops = annihilator_specs(consumer.codomain, KernelFamily::cupcap);
  for (int k = 0; k < (int)images.cols(); ++k) {
    const double n = images.col(k).norm();
    if (n < 1e-12) continue;
    out.max_residual = std::max(
        out.max_residual,
        annihilator_residual(cs, consumer.codomain, short_ops, images.col(k) / n));
  }
  return out;
}

}  // namespace

EquivalenceResult equivalence_check(const CellSystem& cs, const FusionTable& table,
                                    VertexId a, VertexId b, int p, int q, double tol) {
  EquivalenceResult r;
  r.a = a;
  r.b = b;
  r.p = p;
  r.q = q;
  auto fill = [&](EquivalenceSide& side, bool sigma, long long companion) {
    SideMeasurement m = measure_side(cs, a, b, p, q, sigma);
    side.available = true;
    side.long_sig = m.long_sig;
    side.consumer = m.consumer;
    side.dim_constrained = m.dim_T;
    side.rank_consumer = m.rank;
    side.dim_consumer_kernel = m.ker;
    side.expect_rank = table.entry(p, q, a, b);
    side.expect_kernel = companion;
    side.expect_constrained = side.expect_rank + companion;
    side.max_residual = m.max_residual;
    side.ok = side.dim_constrained == side.expect_constrained &&
              side.rank_consumer == side.expect_rank &&
              side.dim_consumer_kernel == side.expect_kernel && side.max_residual < tol;
    r.ok = r.ok && side.ok;
  };
  if (q >= 1) fill(r.sigma_side, true, table.entry(p + 2, q - 1, a, b));
  if (p >= 1) fill(r.sigma_bar_side, false, table.entry(p - 1, q + 2, a, b));
  return r;
}

nlohmann::json EquivalenceResult::to_json(const Graph& g) const {
  auto side = [&](const EquivalenceSide& s) -> nlohmann::json {
    if (!s.available) return nullptr;
    return {{"long_space", signature_to_json(g, s.long_sig)},
            {"consumer_position", s.consumer},
            {"dim_constrained", s.dim_constrained},
            {"rank_consumer", s.rank_consumer},
            {"dim_consumer_kernel", s.dim_consumer_kernel},
            {"expect_constrained", s.expect_constrained},
            {"expect_rank", s.expect_rank},
            {"expect_kernel", s.expect_kernel},
            {"max_residual", s.max_residual},
            {"ok", s.ok}};
  };
  return {{"start", g.vertex(a).key}, {"end", g.vertex(b).key},
          {"p", p},                   {"q", q},
          {"sigma_side", side(sigma_side)},
          {"sigma_bar_side", side(sigma_bar_side)},
          {"ok", ok}};
}

DimsReport essential_dims_report(const CellSystem& cs, const FusionTable& table, int max_total) {
  const Graph& g = cs.graph();
  DimsReport rep;
  rep.level = g.level().value_or(0);
  rep.max_total = max_total;
  for (VertexId a = 0; a < g.vertex_count(); ++a)
    for (VertexId b = 0; b < g.vertex_count(); ++b)
      for (int p = 0; p <= max_total; ++p)
        for (int q = 0; p + q <= max_total; ++q) {
          DimsRow row{a, b, p, q, 0, 0, 0, false};
          row.dim_cupcap =
              essential_basis(cs, {a, b, rep_word(p, q)}, KernelFamily::cupcap).dim();
          row.fusion = table.entry(p, q, a, b);
          if (p == 0 && q == 0)
            row.dim_trident_related = row.dim_cupcap;
          else
            row.dim_trident_related = measure_side(cs, a, b, p, q, q >= 1).rank;
          row.match = row.dim_cupcap == row.fusion && row.dim_trident_related == row.fusion;
          rep.all_match = rep.all_match && row.match;
          rep.rows.push_back(row);
        }
  return rep;
}

std::string DimsReport::to_csv(const Graph& g) const {
  std::ostringstream os;
  os << "a,b,p,q,dim_cupcap,dim_trident_related,fusion,match\n";
  for (const auto& r : rows)
    os << '"' << g.vertex(r.a).key << "\",\"" << g.vertex(r.b).key << "\"," << r.p << ','
       << r.q << ',' << r.dim_cupcap << ',' << r.dim_trident_related << ',' << r.fusion << ','
       << (r.match ? 1 : 0) << '\n';
  return os.str();
}

nlohmann::json DimsReport::to_json(const Graph& g) const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"a", g.vertex(r.a).key},
                  {"b", g.vertex(r.b).key},
                  {"p", r.p},
                  {"q", r.q},
                  {"dim_cupcap", r.dim_cupcap},
                  {"dim_trident_related", r.dim_trident_related},
                  {"fusion", r.fusion},
                  {"match", r.match}});
  return {{"level", level}, {"max_total", max_total}, {"all_match", all_match},
          {"rows", std::move(rs)}};
}

}  // namespace su3paths
