#pragma once

#include "su3paths/fusion.hpp"
#include "su3paths/operators.hpp"

namespace su3paths {

// Which operators cut a word-space down to its essential part: every
// pattern-eligible annihilate position, plus either the cups or the tridents.
enum class KernelFamily { cupcap, trident };

std::vector<OperatorSpec> annihilator_specs(const SpaceSignature& sig, KernelFamily family);

// Orthonormal basis of a joint kernel inside one word-space. The basis is a
// pure function of the cell system and signature: the SVD null projector is
// re-expanded by greedy orthogonalization of the projected lexicographic
// basis vectors, each phase-fixed so its first nonnegligible coefficient is
// real positive.
struct EssentialBasis {
  SpaceSignature sig;
  WordSpaceBasis ambient;
  Eigen::MatrixXcd vectors;  // ambient.dim() rows, one column per kernel vector
  int dim() const { return (int)vectors.cols(); }
  PathVector column_as_paths(int k) const;
  nlohmann::json to_json(const Graph& g) const;
};

EssentialBasis kernel_basis(const CellSystem& cs, const SpaceSignature& sig,
                            const std::vector<OperatorSpec>& ops);
EssentialBasis essential_basis(const CellSystem& cs, const SpaceSignature& sig,
                               KernelFamily family = KernelFamily::cupcap);

// max_i ||op_i(v)||_2 over the listed operators, v given on the lex basis.
double annihilator_residual(const CellSystem& cs, const SpaceSignature& sig,
                            const std::vector<OperatorSpec>& ops, const Eigen::VectorXcd& v);

// One (start, end, rep) cell of the dimension survey. dim_trident_related is
// the rank of the consuming annihilator restricted to the trident-constrained
// space one word up (see equivalence_check); for (0,0) there is no word up
// and the cupcap dimension is reported twice.
struct DimsRow {
  VertexId a, b;
  int p, q;
  long long dim_cupcap, dim_trident_related, fusion;
  bool match;
};

struct DimsReport {
  int level = 0;
  int max_total = 0;
  bool all_match = true;
  std::vector<DimsRow> rows;  // sorted by (a, b, p, q)
  std::string to_csv(const Graph& g) const;
  nlohmann::json to_json(const Graph& g) const;
};

DimsReport essential_dims_report(const CellSystem& cs, const FusionTable& table, int max_total);

// Two formulations compared head on. On the sigma side the lift space T
// inside the word sigma^{p+2} sigma_bar^{q-1} collects the vectors killed by
// every annihilate, cup and trident position except the consuming annihilate
// C_{p+1}, and whose C_{p+1} image is itself killed by the short word's
// annihilates and cups (those composites join the kernel stack). The consumer
// maps T onto the cupcap essential space of sigma^p sigma_bar^q; its kernel
// inside T is the essential space the long word carries on its own, of
// companion rep (p+2, q-1). The sigma_bar side mirrors this through
// sigma^{p-1} sigma_bar^{q+2} with consumer C_p and companion (p-1, q+2).
struct EquivalenceSide {
  bool available = false;
  SpaceSignature long_sig;
  int consumer = 0;
  long long dim_constrained = 0;     // dim T
  long long rank_consumer = 0;       // rank of C restricted to T
  long long dim_consumer_kernel = 0; // dim ker(C restricted to T)
  long long expect_constrained = 0, expect_rank = 0, expect_kernel = 0;
  double max_residual = 0.0;  // normalized consumer images against the short annihilators
  bool ok = true;
};

struct EquivalenceResult {
  VertexId a = 0, b = 0;
  int p = 0, q = 0;
  EquivalenceSide sigma_side, sigma_bar_side;
  bool ok = true;
  nlohmann::json to_json(const Graph& g) const;
};

EquivalenceResult equivalence_check(const CellSystem& cs, const FusionTable& table,
                                    VertexId a, VertexId b, int p, int q,
                                    double tol = 1e-10);

}  // namespace su3paths
