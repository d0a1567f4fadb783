#include "su3paths/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace su3paths {

namespace {

const Orientation S = Orientation::sigma;
const Orientation SB = Orientation::sigma_bar;

Orientation flip(Orientation o) { return o == S ? SB : S; }

void check_position(int i) {
  if (i < 1)
    throw std::invalid_argument("operator position must be >= 1, got " + std::to_string(i));
}

// Structural zeros keep the domain signature as a placeholder so callers can
// still read a well-formed (empty) vector.
PathVector zero_like(const SpaceSignature& sig) { return PathVector(sig); }

}  // namespace

std::optional<SpaceSignature> codomain_signature(const OperatorSpec& spec,
                                                 const SpaceSignature& domain) {
  check_position(spec.position);
  const Word& w = domain.word;
  const int n = (int)w.size();
  const int i = spec.position;
  Word out;
  switch (spec.kind) {
    case OpKind::annihilate:
      if (i > n - 1 || w[i - 1] != w[i]) return std::nullopt;
      out = w;
      out[i - 1] = flip(w[i - 1]);
      out.erase(out.begin() + i);
      break;
    case OpKind::create:
      if (i > n) return std::nullopt;
      out = w;
      out[i - 1] = flip(w[i - 1]);
      out.insert(out.begin() + i, out[i - 1]);
      break;
    case OpKind::cup:
      if (i > n - 1 || w[i - 1] == w[i]) return std::nullopt;
      out = w;
      out.erase(out.begin() + (i - 1), out.begin() + (i + 1));
      break;
    case OpKind::cap:
      if (i > n + 1) throw std::invalid_argument("cap position out of range");
      out = w;
      if (spec.variant == Variant::forward)
        out.insert(out.begin() + (i - 1), {S, SB});
      else
        out.insert(out.begin() + (i - 1), {SB, S});
      break;
    case OpKind::trident:
      if (i > n - 2 || w[i - 1] != w[i] || w[i] != w[i + 1]) return std::nullopt;
      out = w;
      out.erase(out.begin() + (i - 1), out.begin() + (i + 2));
      break;
    case OpKind::fork: {
      if (i > n + 1) throw std::invalid_argument("fork position out of range");
      out = w;
      Orientation o = spec.variant == Variant::forward ? S : SB;
      out.insert(out.begin() + (i - 1), {o, o, o});
      break;
    }
    case OpKind::tl_u:
      if (i > n - 1 || w[i - 1] != w[i]) return std::nullopt;
      out = w;
      break;
    case OpKind::f_op:
      if (i > n - 2 || w[i - 1] != w[i] || w[i] != w[i + 1]) return std::nullopt;
      out = w;
      break;
  }
  return SpaceSignature{domain.start, domain.end, std::move(out)};
}

PathVector annihilate(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::annihilate, i}, d);
  if (!cod) return zero_like(d);
  PathVector out(*cod);
  const Graph& g = cs.graph();
  const bool fwd = d.word[i - 1] == S;
  for (const auto& [seq, x] : v.terms()) {
    VertexId a = seq[i - 1], b = seq[i], c = seq[i + 1];
    Complex t;
    if (fwd) {
      if (!g.has_edge(c, a)) continue;  // no triangle closes a -> b -> c
      t = cs.cell(a, b, c);
    } else {
      if (!g.has_edge(a, c)) continue;
      t = std::conj(cs.cell(a, c, b));
    }
    std::vector<VertexId> ns(seq);
    ns.erase(ns.begin() + i);
    out.add(ns, x * t / std::sqrt(cs.qdim(a) * cs.qdim(c)));
  }
  return out;
}

PathVector create(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::create, i}, d);
  if (!cod) return zero_like(d);
  PathVector out(*cod);
  const Graph& g = cs.graph();
  const bool step_sigma = d.word[i - 1] == S;
  for (const auto& [seq, x] : v.terms()) {
    VertexId a = seq[i - 1], c = seq[i];
    const double s = std::sqrt(cs.qdim(a) * cs.qdim(c));
    // completions of the step's underlying edge; b lands between a and c
    const auto& comps =
        step_sigma ? g.triangle_completions(a, c) : g.triangle_completions(c, a);
    for (VertexId b : comps) {
      Complex t = step_sigma ? cs.cell(a, c, b) : std::conj(cs.cell(a, b, c));
      std::vector<VertexId> ns(seq);
      ns.insert(ns.begin() + i, b);
      out.add(ns, x * t / s);
    }
  }
  return out;
}

PathVector cup(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::cup, i}, d);
  if (!cod) return zero_like(d);
  PathVector out(*cod);
  for (const auto& [seq, x] : v.terms()) {
    if (seq[i + 1] != seq[i - 1]) continue;
    std::vector<VertexId> ns(seq);
    ns.erase(ns.begin() + i, ns.begin() + i + 2);
    out.add(ns, x * std::sqrt(cs.qdim(seq[i]) / cs.qdim(seq[i - 1])));
  }
  return out;
}

PathVector cap(const CellSystem& cs, const PathVector& v, int i, Variant variant) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::cap, i, variant}, d);
  PathVector out(*cod);  // cap is never structurally zero in range
  const Graph& g = cs.graph();
  for (const auto& [seq, x] : v.terms()) {
    VertexId a = seq[i - 1];
    const auto& nb =
        variant == Variant::forward ? g.out_neighbors(a) : g.in_neighbors(a);
    for (VertexId b : nb) {
      std::vector<VertexId> ns(seq);
      ns.insert(ns.begin() + i, {b, a});
      out.add(ns, x * std::sqrt(cs.qdim(b) / cs.qdim(a)));
    }
  }
  return out;
}

PathVector trident(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::trident, i}, d);
  if (!cod) return zero_like(d);
  PathVector out(*cod);
  const bool fwd = d.word[i - 1] == S;
  for (const auto& [seq, x] : v.terms()) {
    if (seq[i + 2] != seq[i - 1]) continue;  // triangle must close
    VertexId a = seq[i - 1], b = seq[i], c = seq[i + 1];
    Complex t = fwd ? cs.cell(a, b, c) : std::conj(cs.cell(a, c, b));
    std::vector<VertexId> ns(seq);
    ns.erase(ns.begin() + i, ns.begin() + i + 3);
    out.add(ns, x * t / cs.qdim(a));
  }
  return out;
}

PathVector fork(const CellSystem& cs, const PathVector& v, int i, Variant variant) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::fork, i, variant}, d);
  PathVector out(*cod);
  const Graph& g = cs.graph();
  for (const auto& [seq, x] : v.terms()) {
    VertexId a = seq[i - 1];
    for (VertexId b : g.out_neighbors(a))
      for (VertexId c : g.triangle_completions(a, b)) {
        std::vector<VertexId> ns(seq);
        if (variant == Variant::forward) {
          ns.insert(ns.begin() + i, {b, c, a});
          out.add(ns, x * std::conj(cs.cell(a, b, c)) / cs.qdim(a));
        } else {
          // the same triangle walked against the arrows
          ns.insert(ns.begin() + i, {c, b, a});
          out.add(ns, x * cs.cell(a, b, c) / cs.qdim(a));
        }
      }
  }
  return out;
}

PathVector tl_u(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  if (!codomain_signature({OpKind::tl_u, i}, d)) return zero_like(d);
  return create(cs, annihilate(cs, v, i), i);
}

PathVector f_op(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  if (!codomain_signature({OpKind::f_op, i}, d)) return zero_like(d);
  Variant var = d.word[i - 1] == S ? Variant::forward : Variant::conjugate;
  return fork(cs, trident(cs, v, i), i, var);
}

PathVector f_op_fused(const CellSystem& cs, const PathVector& v, int i) {
  const SpaceSignature& d = v.signature();
  auto cod = codomain_signature({OpKind::f_op, i}, d);
  if (!cod) return zero_like(d);
  PathVector out(*cod);
  const Graph& g = cs.graph();
  const bool fwd = d.word[i - 1] == S;
  for (const auto& [seq, x] : v.terms()) {
    if (seq[i + 2] != seq[i - 1]) continue;
    VertexId a = seq[i - 1], b = seq[i], c = seq[i + 1];
    Complex t = fwd ? cs.cell(a, b, c) : std::conj(cs.cell(a, c, b));
    const double qa2 = cs.qdim(a) * cs.qdim(a);
    for (VertexId bp : g.out_neighbors(a))
      for (VertexId cp : g.triangle_completions(a, bp)) {
        Complex t2 = fwd ? std::conj(cs.cell(a, bp, cp)) : cs.cell(a, bp, cp);
        std::vector<VertexId> ns(seq);
        if (fwd) {
          ns[i] = bp;
          ns[i + 1] = cp;
        } else {
          ns[i] = cp;
          ns[i + 1] = bp;
        }
        out.add(ns, x * t * t2 / qa2);
      }
  }
  return out;
}

std::string spec_to_string(const OperatorSpec& s) {
  static const char* names[] = {"annihilate", "create", "cup",  "cap",
                                "trident",    "fork",   "tl_u", "f_op"};
  std::string out = names[(int)s.kind];
  out += "_" + std::to_string(s.position);
  if (s.kind == OpKind::cap || s.kind == OpKind::fork)
    out += s.variant == Variant::forward ? "_fwd" : "_conj";
  return out;
}

PathVector apply(const CellSystem& cs, const OperatorSpec& spec, const PathVector& v) {
  switch (spec.kind) {
    case OpKind::annihilate: return annihilate(cs, v, spec.position);
    case OpKind::create: return create(cs, v, spec.position);
    case OpKind::cup: return cup(cs, v, spec.position);
    case OpKind::cap: return cap(cs, v, spec.position, spec.variant);
    case OpKind::trident: return trident(cs, v, spec.position);
    case OpKind::fork: return fork(cs, v, spec.position, spec.variant);
    case OpKind::tl_u: return tl_u(cs, v, spec.position);
    case OpKind::f_op: return f_op(cs, v, spec.position);
  }
  throw std::logic_error("unhandled operator kind");
}

namespace {

OperatorMatrix build_matrix(const CellSystem& cs, const OperatorSpec& spec,
                            const SpaceSignature& domain, bool parallel) {
  auto cod = codomain_signature(spec, domain);
  if (!cod)
    throw InputError("operator " + spec_to_string(spec) + " is structurally zero on word " +
                     word_to_string(domain.word));
  const Graph& g = cs.graph();
  WordSpaceBasis db = word_space_basis(g, domain);
  WordSpaceBasis cb = word_space_basis(g, *cod);
  OperatorMatrix m{domain, *cod, Eigen::MatrixXcd::Zero(cb.dim(), db.dim())};
  const int cols = db.dim();
  // Columns are independent, so scheduling cannot change any value.
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int j = 0; j < cols; ++j) {
    PathVector image = apply(cs, spec, PathVector::basis({db.paths[j], domain.word}));
    for (const auto& [seq, c] : image.terms()) m.mat(cb.index.at(seq), j) = c;
  }
  return m;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

OperatorMatrix operator_matrix(const CellSystem& cs, const OperatorSpec& spec,
                               const SpaceSignature& domain) {
  return build_matrix(cs, spec, domain, true);
}

OperatorMatrix operator_matrix_serial(const CellSystem& cs, const OperatorSpec& spec,
                                      const SpaceSignature& domain) {
  return build_matrix(cs, spec, domain, false);
}

nlohmann::json OperatorMatrix::to_json(const Graph& g) const {
  nlohmann::json entries = nlohmann::json::array();
  for (int r = 0; r < (int)mat.rows(); ++r)
    for (int c = 0; c < (int)mat.cols(); ++c) {
      Complex z = mat(r, c);
      if (z == Complex(0.0)) continue;
      entries.push_back({{"row", r}, {"col", c}, {"re", z.real()}, {"im", z.imag()}});
    }
  return {{"domain", signature_to_json(g, domain)},
          {"codomain", signature_to_json(g, codomain)},
          {"rows", (int)mat.rows()},
          {"cols", (int)mat.cols()},
          {"entries", std::move(entries)}};
}

bool LinearMap::is_zero(double tol) const {
  if (structural_zero() || mat.size() == 0) return true;
  return mat.cwiseAbs().maxCoeff() <= tol;
}

LinearMap as_map(const CellSystem& cs, const OperatorSpec& spec, const SpaceSignature& domain) {
  auto cod = codomain_signature(spec, domain);
  if (!cod) return LinearMap{domain, std::nullopt, Eigen::MatrixXcd()};
  OperatorMatrix m = operator_matrix(cs, spec, domain);
  return LinearMap{domain, std::move(m.codomain), std::move(m.mat)};
}

LinearMap compose(const LinearMap& second, const LinearMap& first) {
  if (first.structural_zero()) return LinearMap{first.domain, std::nullopt, {}};
  if (second.domain != *first.codomain)
    throw std::invalid_argument("compose: inner word-spaces do not match");
  if (second.structural_zero()) return LinearMap{first.domain, std::nullopt, {}};
  return LinearMap{first.domain, second.codomain, second.mat * first.mat};
}

LinearMap scaled_identity(const Graph& g, const SpaceSignature& sig, Complex c) {
  const int d = word_space_basis(g, sig).dim();
  return LinearMap{sig, sig, Eigen::MatrixXcd(c * Eigen::MatrixXcd::Identity(d, d))};
}

LinearMap map_sum(const LinearMap& x, const LinearMap& y) {
  if (x.domain != y.domain) throw std::invalid_argument("map_sum: domain mismatch");
  if (x.structural_zero()) return y;
  if (y.structural_zero()) return x;
  if (*x.codomain != *y.codomain) throw std::invalid_argument("map_sum: codomain mismatch");
  return LinearMap{x.domain, x.codomain, x.mat + y.mat};
}

LinearMap map_scale(LinearMap x, Complex c) {
  if (!x.structural_zero()) x.mat *= c;
  return x;
}

double map_norm(const LinearMap& x) {
  if (x.structural_zero()) return 0.0;
  return spectral_norm(x.mat);
}

double map_distance(const LinearMap& x, const LinearMap& y) {
  if (x.domain != y.domain) throw std::invalid_argument("map_distance: domain mismatch");
  if (x.structural_zero() || x.mat.size() == 0) return map_norm(y);
  if (y.structural_zero() || y.mat.size() == 0) return map_norm(x);
  if (*x.codomain == *y.codomain) return spectral_norm(x.mat - y.mat);
  if (x.is_zero()) return map_norm(y);
  if (y.is_zero()) return map_norm(x);
  throw std::invalid_argument("map_distance: maps land in different word-spaces");
}

}  // namespace su3paths
