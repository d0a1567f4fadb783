#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <set>

#include "su3paths/graph.hpp"
#include "su3paths/perron.hpp"

using namespace su3paths;

namespace {
VertexId v(const Graph& g, const std::string& key) { return g.find_vertex(key); }

// Independent oracle: the A-series graph norm in closed form.
double beta_closed_form(int level) { return 1.0 + 2.0 * std::cos(2.0 * M_PI / (level + 3)); }
}  // namespace

TEST_CASE("a_series counts") {
  // vertices (k+1)(k+2)/2, edges 3*k(k+1)/2, triangles k^2 (hand enumeration
  // of the generator rule for k <= 4, frozen here)
  struct Row { int level, nv, ne, nt; };
  const Row rows[] = {{0, 1, 0, 0}, {1, 3, 3, 1}, {2, 6, 9, 4}, {3, 10, 18, 9}, {4, 15, 30, 16}};
  for (const Row& r : rows) {
    CAPTURE(r.level);
    Graph g = Graph::a_series(r.level);
    CHECK(g.vertex_count() == r.nv);
    CHECK(g.edge_count() == r.ne);
    CHECK((int)g.triangles().size() == r.nt);
  }
}

TEST_CASE("level 2 vertex set and edges match the generator rule") {
  Graph g = Graph::a_series(2);
  const char* keys[] = {"0,0", "0,1", "0,2", "1,0", "1,1", "2,0"};
  REQUIRE(g.vertex_count() == 6);
  for (int i = 0; i < 6; ++i) CHECK(g.vertex(i).key == keys[i]);  // sorted id order

  CHECK(g.has_edge(v(g, "0,0"), v(g, "1,0")));
  CHECK(g.has_edge(v(g, "1,0"), v(g, "0,1")));
  CHECK(g.has_edge(v(g, "1,0"), v(g, "2,0")));
  CHECK(g.has_edge(v(g, "0,1"), v(g, "0,0")));
  CHECK(g.has_edge(v(g, "2,0"), v(g, "1,1")));
  CHECK(g.has_edge(v(g, "1,1"), v(g, "1,0")));
  CHECK_FALSE(g.has_edge(v(g, "0,0"), v(g, "1,1")));
  CHECK_FALSE(g.has_edge(v(g, "1,0"), v(g, "0,0")));  // orientation matters
}

TEST_CASE("level 2 canonical triangle list, frozen") {
  Graph g = Graph::a_series(2);
  auto key3 = [&](const Triangle& t) {
    return g.vertex(t[0]).key + "|" + g.vertex(t[1]).key + "|" + g.vertex(t[2]).key;
  };
  REQUIRE(g.triangles().size() == 4);
  CHECK(key3(g.triangles()[0]) == "0,0|1,0|0,1");
  CHECK(key3(g.triangles()[1]) == "0,1|1,1|0,2");
  CHECK(key3(g.triangles()[2]) == "0,1|1,1|1,0");  // the down triangle, rotated least-first
  CHECK(key3(g.triangles()[3]) == "1,0|2,0|1,1");
}

TEST_CASE("canonical_rotation picks the least vertex first") {
  CHECK(canonical_rotation({2, 0, 1}) == Triangle{0, 1, 2});
  CHECK(canonical_rotation({1, 2, 0}) == Triangle{0, 1, 2});
  CHECK(canonical_rotation({0, 2, 1}) == Triangle{0, 2, 1});  // rotation only, never reorder
}

TEST_CASE("triangle completions per directed edge") {
  Graph g = Graph::a_series(2);
  auto c1 = g.triangle_completions(v(g, "0,0"), v(g, "1,0"));
  REQUIRE(c1.size() == 1);
  CHECK(c1[0] == v(g, "0,1"));
  auto c2 = g.triangle_completions(v(g, "1,0"), v(g, "0,1"));
  REQUIRE(c2.size() == 2);  // edge shared by the up and down triangle
  CHECK(std::set<VertexId>(c2.begin(), c2.end()) ==
        std::set<VertexId>{v(g, "0,0"), v(g, "1,1")});
}

TEST_CASE("every A-series edge lies in one or two triangles") {
  for (int level = 1; level <= 4; ++level) {
    Graph g = Graph::a_series(level);
    for (auto [a, b] : g.edges()) {
      auto n = g.triangle_completions(a, b).size();
      CAPTURE(level);
      CAPTURE(g.vertex(a).key);
      CAPTURE(g.vertex(b).key);
      CHECK(n >= 1);
      CHECK(n <= 2);
    }
  }
}

TEST_CASE("perron data level 1: beta 1, all qdim 1") {
  Graph g = Graph::a_series(1);
  PerronData p = perron_data(g);
  CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-12));
  for (double q : p.qdim) CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perron data level 2: golden ratio") {
  Graph g = Graph::a_series(2);
  PerronData p = perron_data(g);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(p.beta == doctest::Approx(phi).epsilon(1e-12));
  CHECK(p.qdim[v(g, "0,0")] == doctest::Approx(1.0));
  CHECK(p.qdim[v(g, "1,0")] == doctest::Approx(phi));
  CHECK(p.qdim[v(g, "0,1")] == doctest::Approx(phi));
  CHECK(p.qdim[v(g, "1,1")] == doctest::Approx(phi));
  CHECK(p.qdim[v(g, "2,0")] == doctest::Approx(1.0));
  CHECK(p.qdim[v(g, "0,2")] == doctest::Approx(1.0));
}

TEST_CASE("perron data level 3: integer spectrum") {
  Graph g = Graph::a_series(3);
  PerronData p = perron_data(g);
  CHECK(p.beta == doctest::Approx(2.0).epsilon(1e-12));
  const char* dim1[] = {"0,0", "3,0", "0,3"};
  const char* dim2[] = {"1,0", "0,1", "2,0", "0,2", "2,1", "1,2"};
  for (auto k : dim1) CHECK(p.qdim[v(g, k)] == doctest::Approx(1.0).epsilon(1e-12));
  for (auto k : dim2) CHECK(p.qdim[v(g, k)] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.qdim[v(g, "1,1")] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("beta matches the closed form for levels 1..6") {
  for (int level = 1; level <= 6; ++level) {
    Graph g = Graph::a_series(level);
    PerronData p = perron_data(g);
    CAPTURE(level);
    CHECK(std::abs(p.beta - beta_closed_form(level)) < 1e-10);
  }
}

TEST_CASE("eigenvector property and alpha = beta") {
  for (int level = 1; level <= 6; ++level) {
    Graph g = Graph::a_series(level);
    PerronData p = perron_data(g);
    Eigen::MatrixXd A = g.adjacency();
    Eigen::VectorXd q(g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i) q[i] = p.qdim[i];
    double resid = (A * q - p.beta * q).cwiseAbs().maxCoeff() / q.maxCoeff();
    CAPTURE(level);
    CHECK(resid < 1e-12);
    for (int i = 0; i < g.vertex_count(); ++i) CHECK(std::abs(p.alpha[i] - p.beta) < 1e-10);
  }
}

TEST_CASE("qdim respects the conjugation symmetry p,q <-> q,p") {
  for (int level = 1; level <= 5; ++level) {
    Graph g = Graph::a_series(level);
    PerronData p = perron_data(g);
    for (VertexId i = 0; i < g.vertex_count(); ++i) {
      auto [pp, qq] = *g.vertex(i).coords;
      VertexId j = v(g, coords_key(qq, pp));
      CHECK(p.qdim[i] == doctest::Approx(p.qdim[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("perron_data is bitwise deterministic") {
  Graph g = Graph::a_series(4);
  PerronData a = perron_data(g);
  PerronData b = perron_data(g);
  CHECK(std::memcmp(&a.beta, &b.beta, sizeof(double)) == 0);
  for (size_t i = 0; i < a.qdim.size(); ++i)
    CHECK(std::memcmp(&a.qdim[i], &b.qdim[i], sizeof(double)) == 0);
}

TEST_CASE("level 0 degenerate graph") {
  Graph g = Graph::a_series(0);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 0);
  PerronData p = perron_data(g);
  CHECK(p.beta == doctest::Approx(0.0));
  CHECK(p.qdim[0] == doctest::Approx(1.0));
}

TEST_CASE("json round trip") {
  for (int level : {1, 2, 3}) {
    Graph g = Graph::a_series(level);
    auto doc = g.to_json();
    Graph h = Graph::from_json(doc);
    CHECK(g == h);
    CHECK(doc.dump(2) == h.to_json().dump(2));
  }
}

TEST_CASE("loading the level 1 graph from a handwritten document") {
  auto doc = nlohmann::json::parse(R"({
    "name": "A1", "level": 1, "unit": "0,0",
    "vertices": ["0,0", "1,0", "0,1"],
    "edges": [["0,0", "1,0"], ["1,0", "0,1"], ["0,1", "0,0"]]
  })");
  Graph g = Graph::from_json(doc);
  Graph a1 = Graph::a_series(1);
  CHECK(g.edge_count() == a1.edge_count());
  CHECK(g.triangles().size() == 1);
  CHECK(perron_data(g).beta == doctest::Approx(1.0));
}

TEST_CASE("document validation rejects invariant violations") {
  auto base = nlohmann::json::parse(R"({
    "name": "bad", "level": null, "unit": "a",
    "vertices": ["a", "b", "c"],
    "edges": [["a", "b"], ["b", "c"], ["c", "a"]]
  })");

  auto with_edges = [&](const char* edges) {
    nlohmann::json d = base;
    d["edges"] = nlohmann::json::parse(edges);
    return d;
  };

  CHECK_THROWS_AS(Graph::from_json(with_edges(R"([["a","a"]])")), InputError);  // self-loop
  CHECK_THROWS_AS(Graph::from_json(with_edges(R"([["a","b"],["a","b"],["b","c"],["c","a"]])")),
                  InputError);  // duplicate edge
  CHECK_THROWS_AS(Graph::from_json(with_edges(R"([["a","b"],["b","c"],["c","d"]])")),
                  InputError);  // unknown endpoint

  nlohmann::json dup = base;
  dup["vertices"] = nlohmann::json::parse(R"(["a","b","b"])");
  CHECK_THROWS_AS(Graph::from_json(dup), InputError);

  // a<->b only, c unreachable
  CHECK_THROWS_AS(Graph::from_json(with_edges(R"([["a","b"],["b","a"]])")), InputError);
}

TEST_CASE("a_series level field survives serialization") {
  Graph g = Graph::a_series(2);
  CHECK(g.level().has_value());
  CHECK(*g.level() == 2);
  CHECK(g.unit() == v(g, "0,0"));
  Graph h = Graph::from_json(g.to_json());
  CHECK(h.level() == g.level());
}
