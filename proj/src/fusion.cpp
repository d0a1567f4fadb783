#include "su3paths/fusion.hpp"

#include <stdexcept>

namespace su3paths {

std::vector<std::pair<int, int>> reps_up_to(int limit) {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s <= limit; ++s)
    for (int q = 0; q <= s; ++q) out.emplace_back(s - q, q);
  return out;
}

const IntMatrix& FusionTable::matrix(int p, int q) const {
  auto it = mats_.find({p, q});
  if (it == mats_.end())
    throw std::out_of_range("fusion matrix (" + std::to_string(p) + "," + std::to_string(q) +
                            ") is outside the level-" + std::to_string(level_) + " table");
  return it->second;
}

long long FusionTable::entry(int p, int q, VertexId a, VertexId b) const {
  if (p < 0 || q < 0) throw std::out_of_range("negative rep label");
  if (p + q > level_) return 0;
  return matrix(p, q)(a, b);
}

FusionTable fusion_table(std::shared_ptr<const Graph> g) {
  if (!g->level().has_value())
    throw InputError("fusion table needs a graph with a declared level");
  FusionTable t;
  t.graph_ = g;
  t.level_ = *g->level();
  const int n = g->vertex_count();

  IntMatrix adj(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) adj(a, b) = g->has_edge(a, b) ? 1 : 0;

  // one shell past the level, kept only long enough to check it vanishes
  std::map<std::pair<int, int>, IntMatrix> m;
  m[{0, 0}] = IntMatrix::Identity(n, n);
  if (t.level_ >= 0) {
    for (auto [p, q] : reps_up_to(t.level_ + 1)) {
      if (p + q == 0) continue;
      if (p >= 1) {
        IntMatrix v = adj * m.at({p - 1, q});
        if (p >= 2) v -= m.at({p - 2, q + 1});
        if (q >= 1) v -= m.at({p - 1, q - 1});
        m[{p, q}] = std::move(v);
      } else {
        m[{0, q}] = m.at({q, 0}).transpose();
      }
    }
  }
  for (auto [p, q] : reps_up_to(t.level_ + 1))
    if (p + q == t.level_ + 1 && m.at({p, q}).cwiseAbs().maxCoeff() != 0)
      throw std::logic_error("fusion recursion does not truncate at the level boundary");

  for (auto [p, q] : reps_up_to(t.level_)) t.mats_[{p, q}] = std::move(m.at({p, q}));
  return t;
}

}  // namespace su3paths
