#pragma once

#include <random>
#include <vector>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"

namespace gml {

/// Seeded corpus generators shared by the test suites and `gml selftest`.

Formula random_formula(std::mt19937_64& rng, int max_depth,
                       const std::vector<std::string>& vars, std::uint64_t max_grade,
                       bool allow_converse = true);

/// Purely propositional formula over `vars`.
Formula random_propositional(std::mt19937_64& rng, int max_depth,
                             const std::vector<std::string>& vars);

/// Formula in the language that counts successors only: graded forward
/// diamonds plus plain converse diamond/box.
Formula random_two_way_formula(std::mt19937_64& rng, int max_depth,
                               const std::vector<std::string>& vars,
                               std::uint64_t max_grade);

KripkeStructure random_structure(std::mt19937_64& rng, int n,
                                 const std::vector<std::string>& vars, double edge_prob);

/// Connected euclidean (optionally also transitive) structure obtained by
/// closing a sparse random digraph and keeping one connected component, so the
/// result is not built from the lantern/clique shape it is used to probe.
KripkeStructure random_connected_euclidean(std::mt19937_64& rng, int max_worlds,
                                           const std::vector<std::string>& vars,
                                           bool transitive);

KripkeStructure random_transitive(std::mt19937_64& rng, int max_worlds,
                                  const std::vector<std::string>& vars);

/// Tree with edges from parent to child, world 0 the root.
KripkeStructure random_tree(std::mt19937_64& rng, int max_worlds,
                            const std::vector<std::string>& vars);

}  // namespace gml
