#pragma once

#include <optional>

#include <Eigen/Dense>

#include "su3paths/cells.hpp"
#include "su3paths/paths.hpp"

namespace su3paths {

// Positions index the middle vertex v_i of a path v_0..v_n; step s_k is
// v_{k-1} -> v_k. Consuming operators (annihilate, cup, trident, tl_u, f_op)
// return the zero vector when the pattern fails, including positions beyond
// the reach of the word; i < 1 is an argument error. Insertion operators
// (cap, fork) require 1 <= i <= n+1.
//
// Orientation handling: annihilate/create/cup/trident/tl_u/f_op read the
// variant off the word (sigma-built patterns use the cells as stored,
// sigma_bar-built ones the conjugates). cap and fork insert fresh steps, so
// the variant is an argument.
enum class Variant { forward, conjugate };

// annihilate C_i: two like-oriented steps around a triangle collapse to the
// opposite orientation; coefficient T / sqrt([v_{i-1}][v_{i+1}]).
PathVector annihilate(const CellSystem& cs, const PathVector& v, int i);

// create C'_i: one step expands to two around every completing triangle;
// coefficient conj(T) / sqrt([v_{i-1}][v_i]) (unconjugated on sigma steps).
PathVector create(const CellSystem& cs, const PathVector& v, int i);

// cup: removes a back-and-forth v a v on one edge; coefficient sqrt([a]/[v]).
PathVector cup(const CellSystem& cs, const PathVector& v, int i);

// cap: inserts a back-and-forth over neighbors b of v_{i-1}; coefficient
// sqrt([b]/[v_{i-1}]). forward inserts s.sb over out-neighbors, conjugate
// sb.s over in-neighbors.
PathVector cap(const CellSystem& cs, const PathVector& v, int i, Variant variant);

// trident: removes a closed triangle v a b v; coefficient T / [v].
PathVector trident(const CellSystem& cs, const PathVector& v, int i);

// fork: inserts every closed triangle at v_{i-1}; coefficient conj(T) / [v]
// (unconjugated for the sigma_bar-built variant).
PathVector fork(const CellSystem& cs, const PathVector& v, int i, Variant variant);

// U_i = create_i . annihilate_i.
PathVector tl_u(const CellSystem& cs, const PathVector& v, int i);

// F_i = fork_i . trident_i, variant matched to the word.
PathVector f_op(const CellSystem& cs, const PathVector& v, int i);
// Same map evaluated as one fused kernel T_{i-1,i,i+1} conj(T_{i-1,b,b'}) / [i-1]^2.
PathVector f_op_fused(const CellSystem& cs, const PathVector& v, int i);

enum class OpKind { annihilate, create, cup, cap, trident, fork, tl_u, f_op };

struct OperatorSpec {
  OpKind kind;
  int position;
  Variant variant = Variant::forward;  // consulted by cap and fork only
};

std::string spec_to_string(const OperatorSpec& s);

PathVector apply(const CellSystem& cs, const OperatorSpec& spec, const PathVector& v);

// Codomain word-space of an operator on a domain space; nullopt when the
// domain word cannot match the operator's pattern at that position (the
// operator is the structural zero map there).
std::optional<SpaceSignature> codomain_signature(const OperatorSpec& spec,
                                                 const SpaceSignature& domain);

struct OperatorMatrix {
  SpaceSignature domain, codomain;
  Eigen::MatrixXcd mat;  // rows: codomain basis, cols: domain basis
  nlohmann::json to_json(const Graph& g) const;  // signature + nonzero triplets
};

// Matrix between the lexicographic bases. Throws InputError when the
// signature cannot match the operator pattern. The default entry point
// builds columns in parallel; the serial variant is the reference
// implementation used for testing and benchmarking.
OperatorMatrix operator_matrix(const CellSystem& cs, const OperatorSpec& spec,
                               const SpaceSignature& domain);
OperatorMatrix operator_matrix_serial(const CellSystem& cs, const OperatorSpec& spec,
                                      const SpaceSignature& domain);

// Linear map with an explicit structural-zero state, so relation checks can
// compose operators through spaces where a factor vanishes identically.
struct LinearMap {
  SpaceSignature domain;
  std::optional<SpaceSignature> codomain;  // nullopt: the zero map, no target word
  Eigen::MatrixXcd mat;                    // 0x0 when structural zero

  bool structural_zero() const { return !codomain.has_value(); }
  bool is_zero(double tol = 0.0) const;
};

LinearMap as_map(const CellSystem& cs, const OperatorSpec& spec, const SpaceSignature& domain);
LinearMap compose(const LinearMap& second, const LinearMap& first);  // second after first
LinearMap scaled_identity(const Graph& g, const SpaceSignature& sig, Complex c);
LinearMap map_sum(const LinearMap& x, const LinearMap& y);
LinearMap map_scale(LinearMap x, Complex c);

// Spectral norm of (x - y); structural zeros compare as zero matrices.
// Throws when both sides are nonzero with different codomains.
double map_distance(const LinearMap& x, const LinearMap& y);
double map_norm(const LinearMap& x);

}  // namespace su3paths
