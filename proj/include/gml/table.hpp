#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gml/formula.hpp"

namespace gml {

/// Structurally deduplicated formula DAG in postorder; children precede
/// parents, the root is the last entry. Used by evaluators that want one
/// slot per distinct subformula.
struct TableEntry {
  Conn kind;
  std::string name;
  std::uint64_t grade = 0;
  int lhs = -1;
  int rhs = -1;
};

struct FormulaTable {
  std::vector<TableEntry> entries;
  int root = -1;
};

FormulaTable build_table(const Formula& f);

/// Rebuilds the formula stored at entry `idx`.
Formula table_formula(const FormulaTable& t, int idx);

}  // namespace gml
