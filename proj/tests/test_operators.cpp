#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "su3paths/operators.hpp"

using namespace su3paths;

namespace {
const Orientation S = Orientation::sigma;
const Orientation SB = Orientation::sigma_bar;
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

CellSystem solved(int level) {
  auto g = std::make_shared<Graph>(Graph::a_series(level));
  return solve_cells_a_series(g, perron_data(*g));
}

// Basis vector for the path through the listed vertices with the given word.
PathVector bv(const Graph& g, std::initializer_list<const char*> keys, Word w) {
  std::vector<VertexId> seq;
  for (auto k : keys) seq.push_back(g.find_vertex(k));
  ElementaryPath p{seq, std::move(w)};
  return PathVector::basis(p);
}

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) < tol; }
}  // namespace

TEST_CASE("annihilate, forward variant, frozen level 2 values") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();

  PathVector v = bv(g, {"0,0", "1,0", "0,1"}, {S, S});
  PathVector out = annihilate(cs, v, 1);
  REQUIRE(out.support_size() == 1);
  CHECK(out.signature().word == Word{SB});
  // T / sqrt([0,0][0,1]) = phi / sqrt(phi) = sqrt(phi)
  CHECK(close(out.coeff({g.find_vertex("0,0"), g.find_vertex("0,1")}), std::sqrt(kPhi), 1e-10));

  // no closing edge (2,0)->(0,0): pattern fails
  CHECK(annihilate(cs, bv(g, {"0,0", "1,0", "2,0"}, {S, S}), 1).is_zero());
  // too short
  CHECK(annihilate(cs, bv(g, {"0,0", "1,0"}, {S}), 1).is_zero());
  CHECK(annihilate(cs, bv(g, {"0,0", "1,0"}, {S}), 7).is_zero());
  CHECK_THROWS_AS(annihilate(cs, v, 0), std::invalid_argument);
  // mixed orientation at the position: structural zero
  CHECK(annihilate(cs, bv(g, {"0,0", "1,0", "0,0"}, {S, SB}), 1).is_zero());
}

TEST_CASE("annihilate, conjugate variant") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  // (0,1)(1,0)(0,0) with word sb.sb runs against the triangle (0,0)(1,0)(0,1)
  PathVector v = bv(g, {"0,1", "1,0", "0,0"}, {SB, SB});
  PathVector out = annihilate(cs, v, 1);
  REQUIRE(out.support_size() == 1);
  CHECK(out.signature().word == Word{S});
  CHECK(close(out.coeff({g.find_vertex("0,1"), g.find_vertex("0,0")}), std::sqrt(kPhi), 1e-10));
}

TEST_CASE("create inverts annihilate up to beta, level 2") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  PathVector v = bv(g, {"0,0", "0,1"}, {SB});
  PathVector up = create(cs, v, 1);
  REQUIRE(up.support_size() == 1);  // single completing triangle
  CHECK(close(up.coeff({g.find_vertex("0,0"), g.find_vertex("1,0"), g.find_vertex("0,1")}),
              std::sqrt(kPhi), 1e-10));
  PathVector back = annihilate(cs, up, 1);
  CHECK(close(inner_product(v, back), cs.beta(), 1e-10));

  // create on sigma steps builds the sigma_bar pair with unconjugated cells
  PathVector s = bv(g, {"0,0", "1,0"}, {S});
  PathVector ups = create(cs, s, 1);
  REQUIRE(ups.support_size() == 1);
  CHECK(ups.signature().word == Word{SB, SB});
  PathVector backs = annihilate(cs, ups, 1);
  CHECK(close(inner_product(s, backs), cs.beta(), 1e-10));

  CHECK(create(cs, PathVector::basis({{g.find_vertex("0,0")}, {}}), 1).is_zero());
}

TEST_CASE("annihilate create = beta on every short word-space, levels 1..3") {
  for (int level : {1, 2, 3}) {
    CellSystem cs = solved(level);
    const Graph& g = cs.graph();
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (const Word& w : {Word{S}, Word{SB}, Word{S, SB}, Word{SB, SB}})
        for (const auto& p : enumerate_paths(g, a, w)) {
          PathVector v = PathVector::basis(p);
          for (int i = 1; i <= (int)w.size(); ++i) {
            PathVector r = annihilate(cs, create(cs, v, i), i);
            CAPTURE(level);
            CHECK(close(inner_product(v, r), cs.beta(), 1e-10));
            // off-diagonal part must vanish
            PathVector diff = r;
            PathVector minus = v;
            minus *= -cs.beta();
            diff += minus;
            CHECK(diff.norm() < 1e-10);
          }
        }
  }
}

TEST_CASE("cup removes backtracks, frozen values") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();

  PathVector v = bv(g, {"0,0", "1,0", "0,0"}, {S, SB});
  PathVector out = cup(cs, v, 1);
  REQUIRE(out.support_size() == 1);
  CHECK(close(out.coeff({g.find_vertex("0,0")}), std::sqrt(kPhi)));  // sqrt([1,0]/[0,0])

  // sb.s backtrack on the same edge, coefficient sqrt([0,0]/[1,0])
  PathVector w = bv(g, {"1,0", "0,0", "1,0"}, {SB, S});
  PathVector out2 = cup(cs, w, 1);
  REQUIRE(out2.support_size() == 1);
  CHECK(close(out2.coeff({g.find_vertex("1,0")}), 1.0 / std::sqrt(kPhi)));

  // endpoints differ: delta fails
  CHECK(cup(cs, bv(g, {"0,0", "1,0", "1,1"}, {S, SB}), 1).is_zero());

  CellSystem c1 = solved(1);
  PathVector l1 = bv(c1.graph(), {"0,0", "1,0", "0,0"}, {S, SB});
  CHECK(close(cup(c1, l1, 1).coeff({c1.graph().find_vertex("0,0")}), 1.0));
}

TEST_CASE("cap inserts backtracks over neighbors") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  VertexId v00 = g.find_vertex("0,0");
  PathVector e = PathVector::basis({{v00}, {}});

  PathVector out = cap(cs, e, 1, Variant::forward);
  REQUIRE(out.support_size() == 1);  // single out-neighbor (1,0)
  CHECK(out.signature().word == Word{S, SB});
  CHECK(close(out.coeff({v00, g.find_vertex("1,0"), v00}), std::sqrt(kPhi)));

  PathVector in = cap(cs, e, 1, Variant::conjugate);
  REQUIRE(in.support_size() == 1);  // single in-neighbor (0,1)
  CHECK(in.signature().word == Word{SB, S});
  CHECK(close(in.coeff({v00, g.find_vertex("0,1"), v00}), std::sqrt(kPhi)));

  CHECK_THROWS_AS(cap(cs, e, 2, Variant::forward), std::invalid_argument);
  CHECK_THROWS_AS(cap(cs, e, 0, Variant::forward), std::invalid_argument);
}

TEST_CASE("cup cap circle and identity relations, pointwise") {
  for (int level : {1, 2, 3}) {
    CellSystem cs = solved(level);
    const Graph& g = cs.graph();
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (const Word& w : {Word{}, Word{S}, Word{SB}, Word{S, S}, Word{S, SB}})
        for (const auto& p : enumerate_paths(g, a, w)) {
          PathVector v = PathVector::basis(p);
          const int n = (int)w.size();
          for (int i = 1; i <= n + 1; ++i)
            for (Variant var : {Variant::forward, Variant::conjugate}) {
              // cup_i cap_i = alpha = beta
              PathVector r = cup(cs, cap(cs, v, i, var), i);
              CAPTURE(level);
              CAPTURE(i);
              CHECK(close(inner_product(v, r), cs.beta(), 1e-10));
            }
          for (int i = 1; i <= n; ++i) {
            // cup_{i+1} cap_i = id with the variant matching step s_i
            Variant var = w[i - 1] == S ? Variant::forward : Variant::conjugate;
            PathVector r = cup(cs, cap(cs, v, i, var), i + 1);
            CHECK(close(inner_product(v, r), 1.0, 1e-10));
          }
          for (int i = 2; i <= n + 1; ++i) {
            // cup_{i-1} cap_i = id, variant flipped relative to step s_{i-1}
            Variant var = w[i - 2] == S ? Variant::conjugate : Variant::forward;
            PathVector r = cup(cs, cap(cs, v, i, var), i - 1);
            CHECK(close(inner_product(v, r), 1.0, 1e-10));
          }
        }
  }
}

TEST_CASE("trident removes closed triangles, frozen values") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();

  PathVector v = bv(g, {"0,0", "1,0", "0,1", "0,0"}, {S, S, S});
  PathVector out = trident(cs, v, 1);
  REQUIRE(out.support_size() == 1);
  CHECK(close(out.coeff({g.find_vertex("0,0")}), kPhi));  // T / [0,0] = phi

  // sigma_bar triangle: same cycle walked backwards
  PathVector w = bv(g, {"0,0", "0,1", "1,0", "0,0"}, {SB, SB, SB});
  PathVector out2 = trident(cs, w, 1);
  REQUIRE(out2.support_size() == 1);
  CHECK(close(out2.coeff({g.find_vertex("0,0")}), kPhi));

  // open triangle: endpoint mismatch
  CHECK(trident(cs, bv(g, {"1,0", "2,0", "1,1", "1,0"}, {S, S, S}), 2).is_zero());
  CHECK(trident(cs, bv(g, {"0,0", "1,0", "0,1"}, {S, S}), 1).is_zero());  // too short
}

TEST_CASE("fork inserts closed triangles, frozen value at (2,0)") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  VertexId v20 = g.find_vertex("2,0");
  PathVector e = PathVector::basis({{v20}, {}});

  PathVector out = fork(cs, e, 1, Variant::forward);
  REQUIRE(out.support_size() == 1);
  CHECK(out.signature().word == Word{S, S, S});
  CHECK(close(out.coeff({v20, g.find_vertex("1,1"), g.find_vertex("1,0"), v20}), kPhi));

  PathVector outc = fork(cs, e, 1, Variant::conjugate);
  REQUIRE(outc.support_size() == 1);
  CHECK(outc.signature().word == Word{SB, SB, SB});
  CHECK(close(outc.coeff({v20, g.find_vertex("1,0"), g.find_vertex("1,1"), v20}), kPhi));
}

TEST_CASE("trident fork relations, pointwise over short spaces") {
  for (int level : {1, 2, 3}) {
    CellSystem cs = solved(level);
    const Graph& g = cs.graph();
    const double ab = cs.beta() * cs.beta();  // alpha beta with alpha = beta
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (const Word& w : {Word{}, Word{S}, Word{SB}, Word{S, SB}})
        for (const auto& p : enumerate_paths(g, a, w)) {
          PathVector v = PathVector::basis(p);
          const int n = (int)w.size();
          for (int i = 1; i <= n + 1; ++i)
            for (Variant var : {Variant::forward, Variant::conjugate}) {
              PathVector r = trident(cs, fork(cs, v, i, var), i);
              CAPTURE(level);
              CHECK(close(inner_product(v, r), ab, 1e-9));
            }
          for (int i = 1; i <= n; ++i) {
            Variant var = w[i - 1] == S ? Variant::forward : Variant::conjugate;
            PathVector r = trident(cs, fork(cs, v, i, var), i + 1);
            CHECK(close(inner_product(v, r), cs.beta(), 1e-10));
          }
          for (int i = 2; i <= n + 1; ++i) {
            Variant var = w[i - 2] == S ? Variant::forward : Variant::conjugate;
            PathVector r = trident(cs, fork(cs, v, i, var), i - 1);
            CHECK(close(inner_product(v, r), cs.beta(), 1e-10));
          }
        }
  }
}

TEST_CASE("squared annihilate-create composite, frozen traces") {
  // (C_1 C'_2)^2 scales by beta^2/(beta+1) per pocket, plus the cap cup echo
  // on backtracking spaces.
  {
    CellSystem cs = solved(2);
    const Graph& g = cs.graph();
    PathVector v = bv(g, {"0,0", "1,0", "1,1"}, {S, SB});
    PathVector r = annihilate(cs, create(cs, annihilate(cs, create(cs, v, 2), 1), 2), 1);
    CHECK(close(inner_product(v, r), 1.0, 1e-10));  // phi^2/(phi+1) = 1
  }
  {
    CellSystem cs = solved(3);
    const Graph& g = cs.graph();
    PathVector v = bv(g, {"0,0", "1,0", "1,1"}, {S, SB});
    PathVector r = annihilate(cs, create(cs, annihilate(cs, create(cs, v, 2), 1), 2), 1);
    CHECK(close(inner_product(v, r), 4.0 / 3.0, 1e-10));

    PathVector b = bv(g, {"0,0", "1,0", "0,0"}, {S, SB});
    PathVector rb = annihilate(cs, create(cs, annihilate(cs, create(cs, b, 2), 1), 2), 1);
    CHECK(close(inner_product(b, rb), 4.0, 1e-10));  // (4/3)(1 + qdim echo 2)
  }
}

TEST_CASE("tl_u is idempotent up to beta") {
  for (int level : {2, 3}) {
    CellSystem cs = solved(level);
    const Graph& g = cs.graph();
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (const auto& p : enumerate_paths(g, a, {S, S, SB})) {
        PathVector v = PathVector::basis(p);
        for (int i : {1, 2}) {
          PathVector u1 = tl_u(cs, v, i);
          PathVector u2 = tl_u(cs, u1, i);
          PathVector scaled = u1;
          scaled *= -cs.beta();
          u2 += scaled;
          CAPTURE(level);
          CHECK(u2.norm() < 1e-9);
        }
      }
  }
}

TEST_CASE("f_op composite equals the fused kernel") {
  for (int level : {2, 3}) {
    CellSystem cs = solved(level);
    const Graph& g = cs.graph();
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (const Word& w : {Word{S, S, S}, Word{SB, SB, SB}, Word{S, S, S, SB}})
        for (const auto& p : enumerate_paths(g, a, w)) {
          PathVector v = PathVector::basis(p);
          PathVector x = f_op(cs, v, 1);
          PathVector y = f_op_fused(cs, v, 1);
          PathVector diff = x;
          y *= -1.0;
          diff += y;
          CAPTURE(level);
          CHECK(diff.norm() < 1e-12);
        }
  }
}

TEST_CASE("adjointness of annihilate/create and cup/cap") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  VertexId a = g.find_vertex("0,0");
  // u in the s.s space, w in the sb space over matching endpoints
  for (const auto& pu : enumerate_paths(g, a, {S, S})) {
    PathVector u = PathVector::basis(pu);
    for (const auto& pw : enumerate_paths(g, a, {SB}, pu.vertices.back())) {
      PathVector w = PathVector::basis(pw);
      CHECK(close(inner_product(annihilate(cs, u, 1), w), inner_product(u, create(cs, w, 1))));
    }
  }
  for (const auto& pu : enumerate_paths(g, a, {S, SB}, a)) {
    PathVector u = PathVector::basis(pu);
    PathVector e = PathVector::basis({{a}, {}});
    CHECK(close(inner_product(cup(cs, u, 1), e),
                inner_product(u, cap(cs, e, 1, Variant::forward))));
  }
}

TEST_CASE("operator matrices: shapes, agreement with apply, parallel = serial") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();

  SpaceSignature dom{g.find_vertex("0,0"), g.find_vertex("0,1"), {S, S}};
  OperatorMatrix m = operator_matrix(cs, {OpKind::annihilate, 1}, dom);
  REQUIRE(m.mat.rows() == 1);
  REQUIRE(m.mat.cols() == 1);
  CHECK(close(m.mat(0, 0), std::sqrt(kPhi), 1e-10));

  // empty codomain: the one path dies against a missing closing edge
  SpaceSignature dead{g.find_vertex("0,0"), g.find_vertex("2,0"), {S, S}};
  OperatorMatrix z = operator_matrix(cs, {OpKind::annihilate, 1}, dead);
  CHECK(z.mat.rows() == 0);
  CHECK(z.mat.cols() == 1);

  // structural zero: mixed word cannot feed annihilate
  SpaceSignature mixed{g.find_vertex("0,0"), g.find_vertex("0,0"), {S, SB}};
  CHECK_THROWS_AS(operator_matrix(cs, {OpKind::annihilate, 1}, mixed), InputError);

  // matrix action agrees with operator action on a random-ish vector
  SpaceSignature sig{g.find_vertex("1,0"), g.find_vertex("1,0"), {S, S, SB, SB}};
  WordSpaceBasis basis = word_space_basis(g, sig);
  REQUIRE(basis.dim() > 1);
  for (OperatorSpec spec : {OperatorSpec{OpKind::cup, 2}, OperatorSpec{OpKind::tl_u, 1},
                            OperatorSpec{OpKind::cap, 3, Variant::forward}}) {
    auto cod = codomain_signature(spec, sig);
    REQUIRE(cod.has_value());
    OperatorMatrix mp = operator_matrix(cs, spec, sig);
    OperatorMatrix ms = operator_matrix_serial(cs, spec, sig);
    CHECK((mp.mat - ms.mat).norm() == 0.0);  // identical entries, not merely close

    PathVector v{sig};
    Eigen::VectorXcd x(basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
      Complex c(std::cos(0.7 * k + 0.1), std::sin(1.3 * k));
      x[k] = c;
      v.add(basis.paths[k], c);
    }
    PathVector image = apply(cs, spec, v);
    Eigen::VectorXcd y = mp.mat * x;
    WordSpaceBasis cb = word_space_basis(g, *cod);
    for (int r = 0; r < cb.dim(); ++r)
      CHECK(close(y[r], image.coeff(cb.paths[r]), 1e-14));
  }
}

TEST_CASE("adjoint pairs as matrices: conjugate transpose") {
  CellSystem cs = solved(3);
  const Graph& g = cs.graph();
  SpaceSignature dom{g.find_vertex("0,0"), g.find_vertex("1,1"), {S, S}};
  OperatorMatrix c = operator_matrix(cs, {OpKind::annihilate, 1}, dom);
  OperatorMatrix cdag = operator_matrix(cs, {OpKind::create, 1}, c.codomain);
  CHECK((c.mat - cdag.mat.adjoint()).norm() < 1e-12);

  SpaceSignature bsig{g.find_vertex("1,0"), g.find_vertex("1,0"), {S, SB}};
  OperatorMatrix u = operator_matrix(cs, {OpKind::cup, 1}, bsig);
  OperatorMatrix n = operator_matrix(cs, {OpKind::cap, 1, Variant::forward}, u.codomain);
  CHECK((u.mat - n.mat.adjoint()).norm() < 1e-12);
}

TEST_CASE("linear map plumbing handles structural zeros") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  SpaceSignature mixed{g.find_vertex("0,0"), g.find_vertex("0,0"), {S, SB}};

  LinearMap zero = as_map(cs, {OpKind::annihilate, 1}, mixed);
  CHECK(zero.structural_zero());
  CHECK(zero.is_zero());

  LinearMap id = scaled_identity(g, mixed, Complex(1.0));
  CHECK(map_distance(zero, id) == doctest::Approx(1.0));  // ||0 - Id||
  CHECK(compose(zero, id).structural_zero());

  // cup does accept the mixed word; its matrix is an honest 1x1 here
  LinearMap cupm = as_map(cs, {OpKind::cup, 1}, mixed);
  CHECK_FALSE(cupm.structural_zero());
  OperatorMatrix cm = operator_matrix(cs, {OpKind::cup, 1}, mixed);
  auto j = cm.to_json(g);
  CHECK(j.contains("entries"));
  CHECK(j["rows"] == 1);
  CHECK(j["cols"] == 1);
}

TEST_CASE("matrix json lists nonzero triplets") {
  CellSystem cs = solved(2);
  const Graph& g = cs.graph();
  SpaceSignature dom{g.find_vertex("0,0"), g.find_vertex("0,1"), {S, S}};
  auto j = operator_matrix(cs, {OpKind::annihilate, 1}, dom).to_json(g);
  REQUIRE(j["entries"].size() == 1);
  CHECK(j["entries"][0]["row"] == 0);
  CHECK(j["entries"][0]["col"] == 0);
  CHECK(j["entries"][0]["re"].get<double>() == doctest::Approx(std::sqrt(kPhi)));
}
