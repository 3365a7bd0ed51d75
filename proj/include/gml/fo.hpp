#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"

namespace gml {

/// Two-variable first-order counting formulas. The only binary predicate is
/// the accessibility relation R; unary predicates come from propositional
/// variables plus the reserved predicate `lan` marking predecessor-free
/// worlds in translated structures.
enum class FOVar { X, Y };
FOVar other_var(FOVar v);

enum class FOKind {
  Pred,      // pred(a)
  Rel,       // R(a, b)
  Equal,     // a = b
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,    // A a. body
  Exists,    // E a. body
  CountGeq,  // E>=n a. body
  CountLeq,  // E<=n a. body
};

struct FONode;
using FOFormula = std::shared_ptr<const FONode>;

struct FONode {
  FOKind kind;
  std::string pred;            // Pred only
  FOVar a = FOVar::X;          // Pred argument / Rel,Equal left / bound variable
  FOVar b = FOVar::X;          // Rel,Equal right
  std::uint64_t n = 0;         // counting quantifiers
  FOFormula lhs, rhs;
};

FOFormula fo_pred(const std::string& name, FOVar v);
FOFormula fo_rel(FOVar a, FOVar b);
FOFormula fo_equal(FOVar a, FOVar b);
FOFormula fo_true();
FOFormula fo_false();
FOFormula fo_not(FOFormula f);
FOFormula fo_and(FOFormula a, FOFormula b);
FOFormula fo_or(FOFormula a, FOFormula b);
FOFormula fo_implies(FOFormula a, FOFormula b);
FOFormula fo_iff(FOFormula a, FOFormula b);
FOFormula fo_forall(FOVar v, FOFormula body);
FOFormula fo_exists(FOVar v, FOFormula body);
FOFormula fo_count_geq(std::uint64_t n, FOVar v, FOFormula body);
FOFormula fo_count_leq(std::uint64_t n, FOVar v, FOFormula body);

bool equal_fo(const FOFormula& a, const FOFormula& b);
std::uint64_t fo_size(const FOFormula& f);

/// Free variables as a bit mask: bit 0 = x, bit 1 = y.
unsigned fo_free_vars(const FOFormula& f);

/// Guarded two-variable counting fragment: every quantifier's body is an
/// R-guard on both variables (conjunctive for E/E>=/E<=, implicative for A).
bool is_gc2(const FOFormula& f);

/// One-variable counting fragment: x only, no binary atoms.
bool is_c1(const FOFormula& f);

/// Standard translation; alternates between x and y down modal nesting.
/// Sugar is desugared on entry. Output lies in GC².
FOFormula st(const Formula& f, FOVar v);

/// Whole-structure translation for euclidean frames: st_x(f) conjoined with
/// the clause forcing non-lantern worlds into one universal clique and
/// lanterns out of everyone's successor sets. With `serial`, conjoins
/// E x. ~lan(x). Output is C² but not GC². Rejects formulas that mention the
/// reserved variable `lan`.
FOFormula translate_k5(const Formula& f, bool serial = false);

/// One-variable translation for transitive euclidean frames (six clauses over
/// counting subformulas; input is simplified first so every counting
/// subscript is nonzero). With `serial`, conjoins E x. ~lan(x). Rejects
/// formulas that mention `lan`.
FOFormula translate_k45_c1(const Formula& f, bool serial = false);

/// A Kripke structure with extra unary predicates (checked before the
/// valuation on name collisions).
struct FOStructure {
  KripkeStructure kripke;
  std::map<std::string, Bitset> preds;
};

/// Adds lan = lanterns(A).
FOStructure expand_lan(const KripkeStructure& a);

/// Tarskian evaluation with counting quantifiers counted directly over the
/// finite domain. Throws std::invalid_argument when a free variable of f is
/// missing from the assignment.
bool fo_eval(const FOStructure& s, const FOFormula& f,
             std::optional<int> x = std::nullopt,
             std::optional<int> y = std::nullopt);

enum class FODialect {
  Native,        // round-trips through parse_fo
  SmtlibApprox,  // counting quantifiers unrolled into distinct witnesses
};

std::string serialize_fo(const FOFormula& f, FODialect dialect = FODialect::Native);

/// Parses the native dialect. Throws ParseError on malformed input.
FOFormula parse_fo(const std::string& text);

}  // namespace gml
