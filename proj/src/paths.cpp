#include "su3paths/paths.hpp"

#include <algorithm>
#include <cmath>

namespace su3paths {

Word canonical_word(int p, int q) {
  if (p < 0 || q < 0) throw InputError("representation label must be nonnegative");
  Word w(p, Orientation::sigma);
  w.insert(w.end(), q, Orientation::sigma_bar);
  return w;
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "-";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += (w[i] == Orientation::sigma) ? "s" : "sb";
  }
  return s;
}

nlohmann::json word_to_json(const Word& w) {
  auto arr = nlohmann::json::array();
  for (Orientation o : w) arr.push_back(o == Orientation::sigma ? "s" : "sb");
  return arr;
}

Word word_from_json(const nlohmann::json& j) {
  Word w;
  for (const auto& e : j) {
    std::string s = e.get<std::string>();
    if (s == "s")
      w.push_back(Orientation::sigma);
    else if (s == "sb")
      w.push_back(Orientation::sigma_bar);
    else
      throw InputError("bad orientation '" + s + "' (expected \"s\" or \"sb\")");
  }
  return w;
}

namespace {
bool step_ok(const Graph& g, VertexId from, VertexId to, Orientation dir) {
  return dir == Orientation::sigma ? g.has_edge(from, to) : g.has_edge(to, from);
}
}  // namespace

ElementaryPath make_path(const Graph& g, VertexId start, const std::vector<Step>& steps) {
  ElementaryPath p;
  p.vertices.push_back(start);
  for (size_t k = 0; k < steps.size(); ++k) {
    const Step& s = steps[k];
    std::string where = "step " + std::to_string(k + 1);
    if (s.from != p.vertices.back())
      throw InputError(where + ": chain broken, step starts at '" + g.vertex(s.from).key +
                       "' but the path is at '" + g.vertex(p.vertices.back()).key + "'");
    if (!step_ok(g, s.from, s.to, s.dir))
      throw InputError(where + ": no " +
                       std::string(s.dir == Orientation::sigma ? "edge " : "reversed edge ") +
                       g.vertex(s.from).key + " -> " + g.vertex(s.to).key);
    p.vertices.push_back(s.to);
    p.word.push_back(s.dir);
  }
  return p;
}

std::vector<ElementaryPath> enumerate_paths(const Graph& g, VertexId start, const Word& word,
                                            std::optional<VertexId> end) {
  std::vector<ElementaryPath> out;
  std::vector<VertexId> seq{start};
  // neighbor lists are sorted by id = lexicographic vertex order, so this DFS
  // emits paths in lexicographic order of their vertex sequences
  auto dfs = [&](auto&& self, size_t k) -> void {
    if (k == word.size()) {
      if (!end || seq.back() == *end) out.push_back({seq, word});
      return;
    }
    const auto& next = word[k] == Orientation::sigma ? g.out_neighbors(seq.back())
                                                     : g.in_neighbors(seq.back());
    for (VertexId w : next) {
      seq.push_back(w);
      self(self, k + 1);
      seq.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

PathVector PathVector::basis(const ElementaryPath& p) {
  PathVector v{SpaceSignature{p.vertices.front(), p.vertices.back(), p.word}};
  v.terms_[p.vertices] = Complex(1.0);
  return v;
}

Complex PathVector::coeff(const std::vector<VertexId>& seq) const {
  auto it = terms_.find(seq);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void PathVector::add(const std::vector<VertexId>& seq, Complex c) {
  if (seq.size() != sig_.word.size() + 1 || seq.front() != sig_.start || seq.back() != sig_.end)
    throw std::invalid_argument("PathVector::add: path does not belong to this word-space");
  auto [it, fresh] = terms_.emplace(seq, c);
  if (!fresh) it->second += c;
  if (it->second == Complex(0.0)) terms_.erase(it);
}

PathVector& PathVector::operator+=(const PathVector& o) {
  if (o.sig_ != sig_)
    throw std::invalid_argument("PathVector: mixing word-spaces is not allowed");
  for (const auto& [seq, c] : o.terms_) add(seq, c);
  return *this;
}

PathVector& PathVector::operator*=(Complex c) {
  if (c == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [seq, v] : terms_) v *= c;
  return *this;
}

double PathVector::norm() const {
  double s = 0.0;
  for (const auto& [seq, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

Complex inner_product(const PathVector& u, const PathVector& v) {
  if (u.signature() != v.signature()) return Complex(0.0);  // orthogonal by grading
  Complex s = 0.0;
  for (const auto& [seq, c] : u.terms()) {
    auto it = v.terms().find(seq);
    if (it != v.terms().end()) s += std::conj(c) * it->second;
  }
  return s;
}

WordSpaceBasis word_space_basis(const Graph& g, const SpaceSignature& sig) {
  WordSpaceBasis b;
  b.sig = sig;
  for (auto& p : enumerate_paths(g, sig.start, sig.word, sig.end)) {
    b.index[p.vertices] = (int)b.paths.size();
    b.paths.push_back(std::move(p.vertices));
  }
  return b;
}

nlohmann::json signature_to_json(const Graph& g, const SpaceSignature& sig) {
  nlohmann::json j;
  j["start"] = g.vertex(sig.start).key;
  j["end"] = g.vertex(sig.end).key;
  j["word"] = word_to_json(sig.word);
  return j;
}

SpaceSignature signature_from_json(const Graph& g, const nlohmann::json& j) {
  try {
    return {g.find_vertex(j.at("start").get<std::string>()),
            g.find_vertex(j.at("end").get<std::string>()), word_from_json(j.at("word"))};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("signature: ") + e.what());
  }
}

nlohmann::json path_to_json(const Graph& g, const ElementaryPath& p) {
  nlohmann::json j;
  j["start"] = g.vertex(p.vertices.front()).key;
  auto& steps = j["steps"] = nlohmann::json::array();
  for (size_t k = 0; k < p.word.size(); ++k)
    steps.push_back({{"to", g.vertex(p.vertices[k + 1]).key},
                     {"dir", p.word[k] == Orientation::sigma ? "s" : "sb"}});
  return j;
}

ElementaryPath path_from_json(const Graph& g, const nlohmann::json& j) {
  try {
    VertexId at = g.find_vertex(j.at("start").get<std::string>());
    std::vector<Step> steps;
    for (const auto& s : j.at("steps")) {
      VertexId to = g.find_vertex(s.at("to").get<std::string>());
      std::string dir = s.at("dir").get<std::string>();
      if (dir != "s" && dir != "sb") throw InputError("bad step dir '" + dir + "'");
      steps.push_back({at, to, dir == "s" ? Orientation::sigma : Orientation::sigma_bar});
      at = to;
    }
    return make_path(g, steps.empty() ? at : steps.front().from, steps);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("path document: ") + e.what());
  }
}

nlohmann::json pathvector_to_json(const Graph& g, const PathVector& v) {
  nlohmann::json j = signature_to_json(g, v.signature());
  auto& terms = j["terms"] = nlohmann::json::array();
  for (const auto& [seq, c] : v.terms()) {
    ElementaryPath p{seq, v.signature().word};
    nlohmann::json t = path_to_json(g, p);
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  return j;
}

PathVector pathvector_from_json(const Graph& g, const nlohmann::json& j) {
  PathVector v{signature_from_json(g, j)};
  try {
    for (const auto& t : j.at("terms")) {
      ElementaryPath p = path_from_json(g, t);
      if (p.word != v.signature().word) throw InputError("term word differs from signature");
      v.add(p.vertices, Complex(t.at("re").get<double>(), t.at("im").get<double>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("path vector document: ") + e.what());
  }
  return v;
}

}  // namespace su3paths
