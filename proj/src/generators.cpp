#include "gml/generators.hpp"

namespace gml {

namespace {

int pick(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

bool chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

Formula random_leaf(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  if (vars.empty() || chance(rng, 0.12)) return chance(rng, 0.5) ? truth() : falsity();
  return atom(vars[pick(rng, static_cast<int>(vars.size()))]);
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, int max_depth,
                       const std::vector<std::string>& vars, std::uint64_t max_grade,
                       bool allow_converse) {
  if (max_depth <= 0) return random_leaf(rng, vars);
  int roll = pick(rng, 100);
  auto sub = [&] { return random_formula(rng, max_depth - 1, vars, max_grade, allow_converse); };
  auto grade = [&] { return static_cast<std::uint64_t>(pick(rng, static_cast<int>(max_grade) + 1)); };
  if (roll < 22) return random_leaf(rng, vars);
  if (roll < 36) return lnot(sub());
  if (roll < 50) return land(sub(), sub());
  if (roll < 62) return lor(sub(), sub());
  if (roll < 69) return implies(sub(), sub());
  if (roll < 74) return iff(sub(), sub());
  if (!allow_converse) {
    if (roll < 84) return dia(sub());
    if (roll < 91) return box(sub());
    if (roll < 96 && max_grade > 0) return dia_geq(grade(), sub());
    return dia_leq(grade(), sub());
  }
  if (roll < 80) return dia(sub());
  if (roll < 85) return box(sub());
  if (roll < 89) return inv_dia(sub());
  if (roll < 92) return inv_box(sub());
  if (roll < 95 && max_grade > 0) return dia_geq(grade(), sub());
  if (roll < 97 && max_grade > 0) return inv_dia_geq(grade(), sub());
  if (roll < 99) return dia_leq(grade(), sub());
  return inv_dia_leq(grade(), sub());
}

Formula random_two_way_formula(std::mt19937_64& rng, int max_depth,
                               const std::vector<std::string>& vars,
                               std::uint64_t max_grade) {
  if (max_depth <= 0) return random_leaf(rng, vars);
  int roll = pick(rng, 100);
  auto sub = [&] { return random_two_way_formula(rng, max_depth - 1, vars, max_grade); };
  auto grade = [&] { return static_cast<std::uint64_t>(pick(rng, static_cast<int>(max_grade) + 1)); };
  if (roll < 22) return random_leaf(rng, vars);
  if (roll < 36) return lnot(sub());
  if (roll < 50) return land(sub(), sub());
  if (roll < 62) return lor(sub(), sub());
  if (roll < 69) return implies(sub(), sub());
  if (roll < 74) return iff(sub(), sub());
  if (roll < 81) return dia(sub());
  if (roll < 87) return box(sub());
  if (roll < 91) return inv_dia(sub());
  if (roll < 95) return inv_box(sub());
  if (roll < 98 && max_grade > 0) return dia_geq(grade(), sub());
  return dia_leq(grade(), sub());
}

Formula random_propositional(std::mt19937_64& rng, int max_depth,
                             const std::vector<std::string>& vars) {
  if (max_depth <= 0) return random_leaf(rng, vars);
  int roll = pick(rng, 100);
  auto sub = [&] { return random_propositional(rng, max_depth - 1, vars); };
  if (roll < 30) return random_leaf(rng, vars);
  if (roll < 50) return lnot(sub());
  if (roll < 75) return land(sub(), sub());
  if (roll < 92) return lor(sub(), sub());
  if (roll < 97) return implies(sub(), sub());
  return iff(sub(), sub());
}

KripkeStructure random_structure(std::mt19937_64& rng, int n,
                                 const std::vector<std::string>& vars, double edge_prob) {
  KripkeStructure a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (chance(rng, edge_prob)) a.add_edge(i, j);
  for (const auto& v : vars) {
    a.declare(v);
    for (int w = 0; w < n; ++w)
      if (chance(rng, 0.5)) a.set_val(v, w);
  }
  return a;
}

KripkeStructure random_connected_euclidean(std::mt19937_64& rng, int max_worlds,
                                           const std::vector<std::string>& vars,
                                           bool transitive) {
  int n = 1 + pick(rng, max_worlds);
  double p = std::uniform_real_distribution<double>(0.05, 0.45)(rng);
  KripkeStructure a = random_structure(rng, n, vars, p);
  a = euclidean_closure(std::move(a));
  if (transitive) {
    AxiomSet want = AX_4 | AX_5;
    while ((frame_axioms(a) & want) != want) {
      a = transitive_closure(std::move(a));
      a = euclidean_closure(std::move(a));
    }
  }
  Bitset comp = connected_components(a)[0];
  return induced_substructure(a, comp);
}

KripkeStructure random_transitive(std::mt19937_64& rng, int max_worlds,
                                  const std::vector<std::string>& vars) {
  int n = 1 + pick(rng, max_worlds);
  double p = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
  return transitive_closure(random_structure(rng, n, vars, p));
}

KripkeStructure random_tree(std::mt19937_64& rng, int max_worlds,
                            const std::vector<std::string>& vars) {
  int n = 1 + pick(rng, max_worlds);
  KripkeStructure a(n);
  for (int i = 1; i < n; ++i) a.add_edge(pick(rng, i), i);
  for (const auto& v : vars) {
    a.declare(v);
    for (int w = 0; w < n; ++w)
      if (chance(rng, 0.5)) a.set_val(v, w);
  }
  return a;
}

}  // namespace gml
