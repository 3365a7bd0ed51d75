#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gml {

/// Connectives of the graded two-way modal language. The second block is
/// surface sugar that desugar() rewrites into the core fragment
/// {Atom, True, False, Not, And, Or, Implies, Iff, DiaGeq, InvDiaGeq}.
enum class Conn {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  DiaGeq,     // at least `grade` successors satisfy the body
  InvDiaGeq,  // at least `grade` predecessors satisfy the body
  Dia,        // sugar for DiaGeq 1
  Box,        // sugar for ~DiaGeq 1 ~
  InvDia,     // sugar for InvDiaGeq 1
  InvBox,     // sugar for ~InvDiaGeq 1 ~
  DiaLeq,     // sugar for ~DiaGeq grade+1
  InvDiaLeq,  // sugar for ~InvDiaGeq grade+1
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Conn kind;
  std::string name;         // Atom only
  std::uint64_t grade = 0;  // graded modalities only
  Formula lhs;              // unary operand / left operand
  Formula rhs;              // right operand of binary connectives
};

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

Formula atom(const std::string& name);
Formula truth();
Formula falsity();
Formula lnot(Formula f);
Formula land(Formula a, Formula b);
Formula lor(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula dia(Formula f);
Formula box(Formula f);
Formula inv_dia(Formula f);
Formula inv_box(Formula f);
Formula dia_geq(std::uint64_t n, Formula f);
Formula dia_leq(std::uint64_t n, Formula f);
Formula inv_dia_geq(std::uint64_t n, Formula f);
Formula inv_dia_leq(std::uint64_t n, Formula f);

/// Conjunction/disjunction of a list; empty list gives true/false.
Formula conj(const std::vector<Formula>& fs);
Formula disj(const std::vector<Formula>& fs);

bool equal(const Formula& a, const Formula& b);

/// Parses the concrete syntax. Position-annotated ParseError on bad input;
/// grade literals that do not fit in 64 bits are rejected.
Formula parse_formula(const std::string& text);

/// Renders a formula so that parse_formula(render(f)) == f structurally.
std::string render(const Formula& f);

/// Rewrites all sugar into the core fragment.
Formula desugar(const Formula& f);

/// Light propositional cleanup: double negation, true/false folding, and
/// grade-0 diamonds (trivially true) removed. Preserves semantics.
Formula simplify(const Formula& f);

bool is_desugared(const Formula& f);
bool is_propositional(const Formula& f);

/// Symbol count where a grade n costs ceil(log2(n+1)) bits, 1 when n <= 1.
std::uint64_t formula_length(const Formula& f);

std::uint64_t node_count(const Formula& f);
std::uint64_t modal_depth(const Formula& f);
std::uint64_t max_grade(const Formula& f);

/// Distinct subformulas in evaluation (postorder) order; the root is last.
std::vector<Formula> subformulas(const Formula& f);

std::set<std::string> variables(const Formula& f);

/// First of base, base0, base1, ... not present in `used`.
std::string fresh_variable(const std::set<std::string>& used,
                           const std::string& base);

}  // namespace gml
