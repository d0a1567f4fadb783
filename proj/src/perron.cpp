#include "su3paths/perron.hpp"

#include <cmath>

namespace su3paths {

PerronData perron_data(const Graph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd M = g.adjacency();
  for (int i = 0; i < n; ++i) M(i, i) += 1.0;  // shift: strictly dominant Perron root

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  bool converged = false;
  for (long it = 0; it < 1000000; ++it) {
    Eigen::VectorXd y = M * x;
    y /= y.maxCoeff();
    if ((y - x).cwiseAbs().maxCoeff() < 1e-14) {
      x = y;
      converged = true;
      break;
    }
    x = y;
  }
  if (!converged) throw ConvergenceError("perron_data: power iteration did not converge");

  Eigen::VectorXd y = M * x;
  double lambda = y.sum() / x.sum();  // exact on the eigenvector, all entries positive

  PerronData p;
  p.beta = lambda - 1.0;
  p.qdim.resize(n);
  p.alpha.resize(n);
  const double scale = x[g.unit()];
  for (int i = 0; i < n; ++i) p.qdim[i] = x[i] / scale;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (VertexId b : g.out_neighbors(i)) s += p.qdim[b];
    p.alpha[i] = s / p.qdim[i];
  }
  return p;
}

}  // namespace su3paths
