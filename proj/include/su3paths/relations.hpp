#pragma once

#include "su3paths/operators.hpp"

namespace su3paths {

// One identity of the suite. Asserted entries decide the overall verdict;
// survey entries are evaluated and reported but never counted as failures
// (they exist to document which index variants of ambiguous displays hold).
struct RelationResult {
  std::string name;
  std::string statement;  // the identity in plain operator notation
  bool asserted = true;
  long long matrix_instances = 0;  // exhaustive operator-norm checks
  long long vector_instances = 0;  // sampled random-vector checks
  long long vacuous = 0;           // both sides structurally zero
  double max_residual = 0.0;
  bool holds = true;  // max_residual below tolerance
  bool pass = true;   // asserted ? holds : true
};

struct RelationReport {
  int level = 0;
  double beta = 0.0;
  double alpha_min = 0.0, alpha_max = 0.0;  // out-neighbor qdim ratio sums
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0;
  int max_len_sampled = 6;
  int max_len_exhaustive = 4;
  bool all_pass = true;
  std::vector<RelationResult> relations;  // fixed catalog order

  nlohmann::json to_json() const;
  std::string to_text() const;
};

// The full catalog the suite evaluates, in report order, without running
// anything: (name, statement, asserted). The report embeds this list so the
// set of checked identities is explicit in the artifact itself.
struct CatalogEntry {
  std::string name, statement;
  bool asserted;
};
std::vector<CatalogEntry> relation_catalog();

// Evaluates every catalog identity on every inhabited word-space of the
// graph: operator-norm distance on words up to max_len_exhaustive, plus
// `samples` pseudo-random vectors (complex unit disk, deterministic per
// instance under the given seed) on words up to max_len_sampled.
RelationReport run_relation_suite(const CellSystem& cs, int samples = 50,
                                  std::uint64_t seed = 1, double tol = 1e-10,
                                  int max_len_sampled = 6, int max_len_exhaustive = 4);

}  // namespace su3paths
