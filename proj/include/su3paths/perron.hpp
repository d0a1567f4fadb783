#pragma once

#include <vector>

#include "su3paths/graph.hpp"

namespace su3paths {

struct PerronData {
  double beta = 0.0;          // graph norm (Perron eigenvalue of the adjacency)
  std::vector<double> qdim;   // per VertexId, normalized to 1 at the unit vertex
  std::vector<double> alpha;  // per VertexId: sum of qdim over out-neighbors / qdim
};

// Deterministic power iteration. The A-series adjacency is 3-periodic, so
// its Perron root is not strictly dominant in modulus; iterating A+I shifts
// the peripheral spectrum off the circle and converges. beta = lambda(A+I)-1.
// Start vector all ones, max-norm normalization, stop when successive
// iterates differ by < 1e-14 in max norm, cap 1e6 sweeps.
PerronData perron_data(const Graph& g);

}  // namespace su3paths
