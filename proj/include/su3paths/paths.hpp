#pragma once

#include <map>
#include <optional>
#include <vector>

#include "su3paths/graph.hpp"

namespace su3paths {

// sigma traverses an edge with its arrow, sigma_bar against it.
enum class Orientation : std::uint8_t { sigma, sigma_bar };

using Word = std::vector<Orientation>;

inline int sigma_count(const Word& w) {
  int n = 0;
  for (auto o : w) n += (o == Orientation::sigma);
  return n;
}
inline int sigma_bar_count(const Word& w) { return (int)w.size() - sigma_count(w); }

// sigma^p sigma_bar^q, the canonical word of representation (p,q).
Word canonical_word(int p, int q);

std::string word_to_string(const Word& w);  // e.g. "s.s.sb"
nlohmann::json word_to_json(const Word& w);
Word word_from_json(const nlohmann::json& j);

struct Step {
  VertexId from, to;
  Orientation dir;
};

// v_0 .. v_n plus the orientation word; steps are (v_{k-1} -> v_k, word[k-1]).
struct ElementaryPath {
  std::vector<VertexId> vertices;
  Word word;
  int length() const { return (int)word.size(); }
};

// Validates chaining and edge existence; errors name the failing step (1-based).
ElementaryPath make_path(const Graph& g, VertexId start, const std::vector<Step>& steps);

// Identifies one word-space: all elementary paths a -> b with this word.
struct SpaceSignature {
  VertexId start = 0, end = 0;
  Word word;
  auto operator<=>(const SpaceSignature&) const = default;
};

nlohmann::json signature_to_json(const Graph& g, const SpaceSignature& sig);
SpaceSignature signature_from_json(const Graph& g, const nlohmann::json& j);

// All elementary paths from start with the given word, optionally filtered by
// end vertex, in lexicographic order of vertex sequences. This order is the
// basis order for every matrix downstream.
std::vector<ElementaryPath> enumerate_paths(const Graph& g, VertexId start, const Word& word,
                                            std::optional<VertexId> end = std::nullopt);

// Finite linear combination over one word-space. Elementary paths are an
// orthonormal basis; mixing word-spaces is rejected.
class PathVector {
 public:
  explicit PathVector(SpaceSignature sig) : sig_(std::move(sig)) {}
  static PathVector basis(const ElementaryPath& p);

  const SpaceSignature& signature() const { return sig_; }
  const std::map<std::vector<VertexId>, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int support_size() const { return (int)terms_.size(); }

  Complex coeff(const std::vector<VertexId>& seq) const;
  void add(const std::vector<VertexId>& seq, Complex c);  // accumulate, prune exact zeros

  PathVector& operator+=(const PathVector& o);
  PathVector& operator*=(Complex c);
  double norm() const;

 private:
  SpaceSignature sig_;
  std::map<std::vector<VertexId>, Complex> terms_;
};

// Conjugate-linear in the first argument; distinct word-spaces give 0.
Complex inner_product(const PathVector& u, const PathVector& v);

// Lexicographic basis of one word-space with index lookup.
struct WordSpaceBasis {
  SpaceSignature sig;
  std::vector<std::vector<VertexId>> paths;
  std::map<std::vector<VertexId>, int> index;
  int dim() const { return (int)paths.size(); }
};
WordSpaceBasis word_space_basis(const Graph& g, const SpaceSignature& sig);

nlohmann::json path_to_json(const Graph& g, const ElementaryPath& p);
ElementaryPath path_from_json(const Graph& g, const nlohmann::json& j);
nlohmann::json pathvector_to_json(const Graph& g, const PathVector& v);
PathVector pathvector_from_json(const Graph& g, const nlohmann::json& j);

}  // namespace su3paths
