#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "su3paths/common.hpp"

namespace su3paths {

struct Vertex {
  std::string key;  // "p,q" when coords are present, opaque label otherwise
  std::optional<std::pair<int, int>> coords;
};

// Oriented 3-cycle a->b->c->a, stored with the least vertex first.
using Triangle = std::array<VertexId, 3>;

Triangle canonical_rotation(Triangle t);

// Immutable oriented graph. Vertices are sorted at construction
// (coordinate pairs lexicographically, then opaque keys), so VertexId
// order doubles as the lexicographic order used for path bases.
class Graph {
 public:
  static Graph a_series(int level);
  static Graph from_json(const nlohmann::json& doc);
  static Graph load_file(const std::string& path);
  nlohmann::json to_json() const;

  const std::string& name() const { return name_; }
  std::optional<int> level() const { return level_; }
  VertexId unit() const { return unit_; }

  int vertex_count() const { return static_cast<int>(verts_.size()); }
  const Vertex& vertex(VertexId v) const { return verts_.at(v); }
  const std::vector<Vertex>& vertices() const { return verts_; }
  VertexId find_vertex(const std::string& key) const;  // throws InputError

  bool has_edge(VertexId a, VertexId b) const;
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
  const std::vector<VertexId>& out_neighbors(VertexId v) const { return out_.at(v); }
  const std::vector<VertexId>& in_neighbors(VertexId v) const { return in_.at(v); }

  // All distinct oriented 3-cycles, canonical rotation, sorted.
  const std::vector<Triangle>& triangles() const { return tris_; }
  // Vertices c with edges a->b->c->a (the triangles through edge a->b).
  const std::vector<VertexId>& triangle_completions(VertexId a, VertexId b) const;
  bool is_triangle(VertexId a, VertexId b, VertexId c) const;

  Eigen::MatrixXd adjacency() const;

  bool operator==(const Graph& o) const;

 private:
  Graph() = default;
  void finalize();  // sort, index, validate, enumerate triangles

  std::string name_;
  std::optional<int> level_;
  VertexId unit_ = 0;
  std::vector<Vertex> verts_;
  std::vector<std::pair<VertexId, VertexId>> edges_;  // sorted
  std::vector<std::vector<VertexId>> out_, in_;       // sorted per vertex
  std::vector<char> adj_;                             // dense n*n lookup
  std::vector<Triangle> tris_;
  std::vector<std::vector<VertexId>> completions_;    // per directed edge slot a*n+b
};

inline const std::vector<Triangle>& triangles(const Graph& g) { return g.triangles(); }

std::string coords_key(int p, int q);
std::optional<std::pair<int, int>> parse_coords(const std::string& key);

}  // namespace su3paths
