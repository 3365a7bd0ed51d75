#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"

namespace gml {

/// Scott-type normal form
///   eta & (p_i -> dia>=C_i pi_i)  & (q_i -> dia<=D_i chi_i)
///       & (p'_i -> idia pi'_i)    & (q'_i -> ibox ~chi'_i)
/// with eta and all bodies propositional and all guards plain variables.

struct GeqConjunct {
  std::string guard;
  std::uint64_t count;  // >= 1
  Formula body;
};

struct LeqConjunct {
  std::string guard;
  std::uint64_t bound;
  Formula body;
};

struct InvDiaConjunct {
  std::string guard;
  Formula body;
};

struct InvBoxConjunct {
  std::string guard;
  Formula body;  // conjunct reads guard -> ibox ~body
};

/// One introduced variable together with its forced meaning, written over the
/// input variables and earlier guards (dependency order).
struct GuardDef {
  std::string name;
  Formula meaning;
};

struct NormalForm {
  Formula eta;
  std::vector<GeqConjunct> geq;
  std::vector<LeqConjunct> leq;
  std::vector<InvDiaConjunct> inv_dia;
  std::vector<InvBoxConjunct> inv_box;
  std::vector<GuardDef> guard_defs;
};

/// Renames modal subformulas innermost-first behind fresh guard variables,
/// guarded in both directions (x for the at-least side, a complement variable
/// for the at-most side), so the result is globally equisatisfiable with f
/// over every frame. Input is desugared and simplified internally; graded
/// converse modalities (idia>=n, n >= 2, and their <= forms) are rejected
/// with std::invalid_argument since this normal form serves the language
/// counting successors only.
NormalForm to_normal_form(const Formula& f);

/// The conjunction displayed above, with <= and converse conjuncts rendered
/// through the surface forms.
Formula nf_to_formula(const NormalForm& nf);

/// max({C_i} union {D_i + 1}), and 1 when both lists are empty.
std::uint64_t m_constant(const NormalForm& nf);

struct NFBounds {
  std::uint64_t depth;  // (sum D_i) + m + m' + 1
  std::uint64_t width;  // (sum C_i) + l' + 1
};
NFBounds nf_bounds(const NormalForm& nf);

/// The canonical guard valuation over a model of the original formula: each
/// guard is set exactly where its forced meaning holds. In any global model
/// of nf_to_formula the guards must carry these values, so extending with
/// them is complete as well as sound.
KripkeStructure extend_canonical(const KripkeStructure& a, const NormalForm& nf);

}  // namespace gml
