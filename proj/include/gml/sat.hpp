#pragma once

#include <cstdint>
#include <vector>

namespace gml {

/// Propositional literal: variable v (0-based) is encoded as 2v, its negation
/// as 2v+1.
using Lit = int;

inline Lit mk_lit(int var, bool negated = false) { return 2 * var + (negated ? 1 : 0); }
inline Lit lit_neg(Lit l) { return l ^ 1; }
inline int lit_var(Lit l) { return l >> 1; }
inline bool lit_sign(Lit l) { return l & 1; }  // true = negated

/// Conflict-driven clause-learning solver for the CNF instances produced by
/// the structured model search: two watched literals, first-UIP learning with
/// local minimization, activity-ordered decisions, phase saving, Luby
/// restarts, and periodic deletion of inactive learnt clauses. Clauses and
/// circuit gates may only be added before solve() is first called.
class SatSolver {
 public:
  SatSolver();
  ~SatSolver();
  SatSolver(const SatSolver&) = delete;
  SatSolver& operator=(const SatSolver&) = delete;

  int new_var();
  int num_vars() const;

  /// Adds a clause (empty clause makes the instance trivially unsatisfiable).
  void add_clause(std::vector<Lit> clause);
  void add_unit(Lit l) { add_clause({l}); }

  /// A literal pinned to the given truth value, shared across calls.
  Lit constant(bool value);

  /// Tseitin gates. The returned literal is equivalent to the connective in
  /// both polarities. Constant and duplicate inputs are folded away.
  Lit make_and(Lit a, Lit b);
  Lit make_or(Lit a, Lit b);
  Lit make_and(const std::vector<Lit>& ls);
  Lit make_or(const std::vector<Lit>& ls);
  Lit make_iff(Lit a, Lit b);

  /// A literal equivalent to "at least k of lits are true", built as a
  /// sequential counter.
  Lit at_least(const std::vector<Lit>& lits, std::uint64_t k);

  bool solve();
  /// Value of a variable in the satisfying assignment (solve() returned true).
  bool model_value(int var) const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace gml
