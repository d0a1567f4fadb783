#pragma once

#include <map>
#include <memory>
#include <utility>

#include <Eigen/Dense>

#include "su3paths/graph.hpp"

namespace su3paths {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Reps (p,q) with p+q <= limit, ordered by increasing p+q then q.
std::vector<std::pair<int, int>> reps_up_to(int limit);

// Integer multiplicity matrices over the graph vertices, built from the
// adjacency by the two-variable Chebyshev-style recursion
//   N_(p,q) = G N_(p-1,q) - N_(p-2,q+1) - N_(p-1,q-1)   (p >= 1),
// seeded with N_(0,0) = I, N_(1,0) = G, N_(0,1) = G^T; the p = 0 column
// comes from the transpose symmetry N_(0,q) = N_(q,0)^T. Rows index the
// start vertex, columns the end vertex.
class FusionTable {
 public:
  const Graph& graph() const { return *graph_; }
  int level() const { return level_; }

  // p+q must stay within the level; use entry() for the clamped lookup.
  const IntMatrix& matrix(int p, int q) const;

  // (N_(p,q))_{a,b}; reps beyond the level label no nonzero space and give 0.
  long long entry(int p, int q, VertexId a, VertexId b) const;

 private:
  friend FusionTable fusion_table(std::shared_ptr<const Graph> g);
  std::shared_ptr<const Graph> graph_;
  int level_ = 0;
  std::map<std::pair<int, int>, IntMatrix> mats_;
};

// Builds the table through the graph level and checks that the next shell
// vanishes identically, which pins the recursion against the truncation.
FusionTable fusion_table(std::shared_ptr<const Graph> g);

}  // namespace su3paths
