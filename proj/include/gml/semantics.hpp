#pragma once

#include <optional>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"

namespace gml {

/// Worlds of `a` satisfying f, computed bottom-up with one bit-set per
/// distinct subformula. Variables absent from the valuation hold nowhere.
Bitset extension(const KripkeStructure& a, const Formula& f);

bool satisfies(const KripkeStructure& a, int w, const Formula& f);
bool globally_satisfies(const KripkeStructure& a, const Formula& f);

/// Least witness world, if any.
std::optional<int> locally_satisfied(const KripkeStructure& a, const Formula& f);

/// Least world satisfying f_local in case f_global holds at every world.
std::optional<int> combined_satisfies(const KripkeStructure& a, const Formula& f_global,
                                      const Formula& f_local);

}  // namespace gml
