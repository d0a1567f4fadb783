#include "su3paths/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

namespace su3paths {

std::string coords_key(int p, int q) {
  return std::to_string(p) + "," + std::to_string(q);
}

std::optional<std::pair<int, int>> parse_coords(const std::string& key) {
  auto comma = key.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 >= key.size()) return std::nullopt;
  auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  std::string a = key.substr(0, comma), b = key.substr(comma + 1);
  if (!digits(a) || !digits(b)) return std::nullopt;
  return std::make_pair(std::stoi(a), std::stoi(b));
}

Triangle canonical_rotation(Triangle t) {
  int least = 0;
  if (t[1] < t[least]) least = 1;
  if (t[2] < t[least]) least = 2;
  return {t[least], t[(least + 1) % 3], t[(least + 2) % 3]};
}

namespace {
// Total order: coordinate vertices first (lex by (p,q)), then opaque keys.
bool vertex_less(const Vertex& a, const Vertex& b) {
  if (a.coords.has_value() != b.coords.has_value()) return a.coords.has_value();
  if (a.coords) return *a.coords < *b.coords;
  return a.key < b.key;
}
}  // namespace

Graph Graph::a_series(int level) {
  if (level < 0) throw InputError("a_series: level must be nonnegative");
  Graph g;
  g.name_ = "A" + std::to_string(level);
  g.level_ = level;
  for (int p = 0; p <= level; ++p)
    for (int q = 0; p + q <= level; ++q)
      g.verts_.push_back({coords_key(p, q), std::make_pair(p, q)});
  std::sort(g.verts_.begin(), g.verts_.end(), vertex_less);

  auto id = [&](int p, int q) -> VertexId {
    // vertices are sorted lex by (p,q); binary search
    auto it = std::lower_bound(g.verts_.begin(), g.verts_.end(),
                               Vertex{"", std::make_pair(p, q)}, vertex_less);
    return static_cast<VertexId>(it - g.verts_.begin());
  };
  for (int p = 0; p <= level; ++p)
    for (int q = 0; p + q <= level; ++q) {
      if (p + q + 1 <= level) g.edges_.push_back({id(p, q), id(p + 1, q)});
      if (p >= 1) g.edges_.push_back({id(p, q), id(p - 1, q + 1)});
      if (q >= 1) g.edges_.push_back({id(p, q), id(p, q - 1)});
    }
  g.unit_ = id(0, 0);
  g.finalize();
  return g;
}

Graph Graph::from_json(const nlohmann::json& doc) {
  Graph g;
  try {
    g.name_ = doc.at("name").get<std::string>();
    if (doc.at("level").is_null())
      g.level_ = std::nullopt;
    else
      g.level_ = doc.at("level").get<int>();
    for (const auto& k : doc.at("vertices")) {
      std::string key = k.get<std::string>();
      g.verts_.push_back({key, parse_coords(key)});
    }
    std::sort(g.verts_.begin(), g.verts_.end(), vertex_less);
    for (size_t i = 1; i < g.verts_.size(); ++i)
      if (g.verts_[i].key == g.verts_[i - 1].key)
        throw InputError("duplicate vertex '" + g.verts_[i].key + "'");

    auto id = [&](const std::string& key) -> VertexId {
      for (VertexId i = 0; i < (VertexId)g.verts_.size(); ++i)
        if (g.verts_[i].key == key) return i;
      throw InputError("edge references unknown vertex '" + key + "'");
    };
    for (const auto& e : doc.at("edges"))
      g.edges_.push_back({id(e.at(0).get<std::string>()), id(e.at(1).get<std::string>())});
    g.unit_ = id(doc.at("unit").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph document: ") + e.what());
  }
  g.finalize();

  if (g.level_) {
    Graph ref = a_series(*g.level_);
    bool same = g.verts_.size() == ref.verts_.size() && g.edges_ == ref.edges_ &&
                std::equal(g.verts_.begin(), g.verts_.end(), ref.verts_.begin(),
                           [](const Vertex& a, const Vertex& b) { return a.key == b.key; });
    if (!same)
      throw InputError("level is set but the graph is not the A-series graph of that level");
  }
  return g;
}

Graph Graph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("parse error in '") + path + "': " + e.what());
  }
  return from_json(doc);
}

nlohmann::json Graph::to_json() const {
  nlohmann::json doc;
  doc["name"] = name_;
  doc["level"] = level_ ? nlohmann::json(*level_) : nlohmann::json(nullptr);
  doc["unit"] = verts_[unit_].key;
  auto& vs = doc["vertices"] = nlohmann::json::array();
  for (const auto& v : verts_) vs.push_back(v.key);
  auto& es = doc["edges"] = nlohmann::json::array();
  for (auto [a, b] : edges_) es.push_back({verts_[a].key, verts_[b].key});
  return doc;
}

VertexId Graph::find_vertex(const std::string& key) const {
  for (VertexId i = 0; i < (VertexId)verts_.size(); ++i)
    if (verts_[i].key == key) return i;
  throw InputError("unknown vertex '" + key + "'");
}

bool Graph::has_edge(VertexId a, VertexId b) const {
  return adj_[(size_t)a * verts_.size() + b] != 0;
}

const std::vector<VertexId>& Graph::triangle_completions(VertexId a, VertexId b) const {
  return completions_[(size_t)a * verts_.size() + b];
}

bool Graph::is_triangle(VertexId a, VertexId b, VertexId c) const {
  return has_edge(a, b) && has_edge(b, c) && has_edge(c, a);
}

Eigen::MatrixXd Graph::adjacency() const {
  const int n = vertex_count();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b] : edges_) A(a, b) = 1.0;
  return A;
}

bool Graph::operator==(const Graph& o) const {
  if (name_ != o.name_ || level_ != o.level_ || unit_ != o.unit_) return false;
  if (verts_.size() != o.verts_.size() || edges_ != o.edges_) return false;
  for (size_t i = 0; i < verts_.size(); ++i)
    if (verts_[i].key != o.verts_[i].key || verts_[i].coords != o.verts_[i].coords) return false;
  return true;
}

void Graph::finalize() {
  const size_t n = verts_.size();
  if (n == 0) throw InputError("graph has no vertices");

  std::sort(edges_.begin(), edges_.end());
  adj_.assign(n * n, 0);
  out_.assign(n, {});
  in_.assign(n, {});
  for (size_t i = 0; i < edges_.size(); ++i) {
    auto [a, b] = edges_[i];
    if (a == b)
      throw InputError("self-loop at vertex '" + verts_[a].key + "'");
    if (i > 0 && edges_[i] == edges_[i - 1])
      throw InputError("duplicate edge " + verts_[a].key + " -> " + verts_[b].key);
    adj_[(size_t)a * n + b] = 1;
    out_[a].push_back(b);
    in_[b].push_back(a);
  }
  // edges_ sorted => out_/in_ lists come out sorted as well, but in_ needs it explicitly
  for (auto& l : in_) std::sort(l.begin(), l.end());

  if (n > 1) {
    auto reaches_all = [&](bool forward) {
      std::vector<char> seen(n, 0);
      std::queue<VertexId> bfs;
      bfs.push(0);
      seen[0] = 1;
      size_t count = 1;
      while (!bfs.empty()) {
        VertexId v = bfs.front();
        bfs.pop();
        for (VertexId w : forward ? out_[v] : in_[v])
          if (!seen[w]) {
            seen[w] = 1;
            ++count;
            bfs.push(w);
          }
      }
      return count == n;
    };
    if (!reaches_all(true) || !reaches_all(false))
      throw InputError("graph is not strongly connected");
  }

  // Oriented 3-cycles once each: a is the least vertex of the cycle.
  tris_.clear();
  for (VertexId a = 0; a < (VertexId)n; ++a)
    for (VertexId b : out_[a]) {
      if (b <= a) continue;
      for (VertexId c : out_[b])
        if (c > a && has_edge(c, a)) tris_.push_back({a, b, c});
    }
  std::sort(tris_.begin(), tris_.end());

  completions_.assign(n * n, {});
  for (const Triangle& t : tris_)
    for (int r = 0; r < 3; ++r)
      completions_[(size_t)t[r] * n + t[(r + 1) % 3]].push_back(t[(r + 2) % 3]);
  for (auto& l : completions_) std::sort(l.begin(), l.end());
}

}  // namespace su3paths
