#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "gml/kripke.hpp"
#include "gml/normalform.hpp"

namespace gml {

/// Truth assignment to the structure's declared variables; bit i is the i-th
/// declared name in sorted order. At most 64 declared variables.
struct OneType {
  std::uint64_t bits = 0;
  auto operator<=>(const OneType&) const = default;
};

OneType one_type(const KripkeStructure& a, int w);

/// (H, A, B, irref): capped multiset of 1-types inside the clique (cap k+1),
/// capped multiset among its strict successors (cap k), set among its
/// predecessors, and whether the clique is a single irreflexive world.
struct Profile {
  std::map<OneType, std::uint64_t> here;
  std::map<OneType, std::uint64_t> above;
  std::set<OneType> below;
  bool irref = false;
  std::uint64_t k = 1;
  bool operator==(const Profile&) const = default;
};

Profile profile(const KripkeStructure& a, const Bitset& clique, std::uint64_t k);

/// (H, B, S): H and B as in the k-profile, S the indices of the already-fixed
/// lower cliques receiving an edge from this clique.
struct CliqueType {
  std::map<OneType, std::uint64_t> here;
  std::set<OneType> below;
  std::set<int> lower;
  auto operator<=>(const CliqueType&) const = default;
};

CliqueType clique_type(const KripkeStructure& a, const Bitset& clique,
                       const std::vector<Bitset>& fixed_lower, std::uint64_t k);

/// min(D_i + 1, number of worlds satisfying the i-th at-most body that are
/// reachable from w through the reflexive closure of the relation).
std::uint64_t d_value(const KripkeStructure& a, int w, int i, const NormalForm& nf);

/// Indices of the inverse-box conjuncts whose body holds at w itself or at
/// some predecessor of w.
std::set<int> s_set(const KripkeStructure& a, int w, const NormalForm& nf);

/// Depth reduction: adds the inverse of every edge whose endpoints agree on
/// the per-conjunct counting data, then closes transitively, repeating until
/// no edge is added. Agreement means equal capped at-most counts and equal
/// s-sets taken both through the reflexive closure (as d_value/s_set report)
/// and through the bare relation; the bare-relation half keeps an edge into
/// an irreflexive world whose own body truth masks an at-most violation from
/// being reversed. Requires a transitive global model of nf and returns one
/// whose depth is at most nf_bounds(nf).depth; every world keeps its
/// d-values and s-set. The postconditions are rechecked and raise
/// std::logic_error if violated.
KripkeStructure reduce_depth(const KripkeStructure& a, const NormalForm& nf);

/// Width reduction: inside every clique keeps the lowest-index C_i witnesses
/// of each at-least body, one witness per converse-diamond body, and one
/// keeper world, dropping the rest. Width of the result is at most
/// nf_bounds(nf).width. Postconditions rechecked as in reduce_depth.
KripkeStructure reduce_width(const KripkeStructure& a, const NormalForm& nf);

/// Worlds grouped by depth, ascending inside each layer. Requires a
/// transitive structure.
std::vector<std::vector<int>> layers(const KripkeStructure& a);

/// Finitization: processes layers bottom up, keeping at most m_constant(nf)
/// cliques per realized clique type and relinking edges from higher layers so
/// that per-type edge counts capped at m_constant(nf) are preserved (existing
/// edges to survivors stay, missing ones go to the lowest-numbered unlinked
/// cliques of the same type). Requires a transitive global model of nf with
/// depth and width within nf_bounds(nf). The output is transitive, satisfies
/// nf, and every surviving clique keeps the profile it had in the input;
/// violations raise std::logic_error.
KripkeStructure finitize(const KripkeStructure& a, const NormalForm& nf);

}  // namespace gml
