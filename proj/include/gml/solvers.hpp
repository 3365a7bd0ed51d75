#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"

namespace gml {

enum class SatMode { Local, Global, Combined };

struct SatQuery {
  Formula formula;  // the formula; in Combined mode, the global part
  FrameClass frame_class;
  SatMode mode = SatMode::Local;
  std::optional<Formula> local_part;  // Combined mode only
  int bound = 1;                      // size cap for the bounded oracle, >= 1
};

enum class SatStatus { Satisfiable, NoModelWithinBound, Unsatisfiable };

/// Every Satisfiable verdict carries a model that has been re-checked against
/// the frame class and the query semantics before being returned; solver
/// internals are never trusted for the final answer.
struct SatVerdict {
  SatStatus status = SatStatus::NoModelWithinBound;
  std::optional<KripkeStructure> model;
  std::optional<int> witness;  // satisfying world (local / combined modes)
  std::string reason;          // human-readable note for non-model verdicts
};

/// Exhaustive search over all structures with 1..bound worlds in the query's
/// frame class, in the enumeration order of enumerate_models, with partial
/// structures pruned by a three-valued evaluation of the query formula and by
/// definite frame-axiom violations. Returns the first hit, which is therefore
/// a minimal-size and lexicographically least model. Throws
/// std::invalid_argument when bound^2 + bound*|vars| exceeds bit_budget; the
/// default keeps casual queries inside a comfortable envelope, callers that
/// accept longer exhaustive runs may raise it.
SatVerdict bounded_sat(const SatQuery& q, std::uint64_t bit_budget = 64);

/// Complete satisfiability for transitive euclidean frames (K45; D45 when
/// `serial`). Searches profiles that count, per 1-type and per lantern/inner
/// flag, how many worlds realize the cell, with multiplicities capped at
/// M + 1 where M is one more than the largest grade. Exhaustion of the
/// profile space is a proof of unsatisfiability.
SatVerdict sat_k45(const Formula& f, bool serial);

/// Bounded satisfiability for euclidean frames (K5; D5 when `serial`) via a
/// clause-learning search over one reflexive clique of at most
/// max_grade(f) + 1 worlds plus `lantern_budget` predecessor-free worlds with
/// chosen illumination edges. Completeness holds only within these caps, so a
/// failed search yields NoModelWithinBound, never Unsatisfiable.
SatVerdict sat_k5(const Formula& f, bool serial, int lantern_budget);

/// f & [][] ibox f: over an R-connected euclidean structure this holds at some
/// world exactly when f holds at every world, so it turns global
/// satisfiability questions into local ones.
Formula global_to_local(const Formula& f);

/// ~(~f & [][] ibox ~f): dually, local satisfiability of f becomes global
/// satisfiability of this formula.
Formula local_to_global(const Formula& f);

}  // namespace gml
