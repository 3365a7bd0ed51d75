#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gml/bitset.hpp"

namespace gml {

/// Frame axioms: seriality, reflexivity, symmetry, transitivity, euclideanness.
enum Axiom : unsigned {
  AX_D = 1u << 0,
  AX_T = 1u << 1,
  AX_B = 1u << 2,
  AX_4 = 1u << 3,
  AX_5 = 1u << 4,
};
using AxiomSet = unsigned;

/// Closes an axiom set under the frame-class implications of the modal cube
/// (T implies D; B with 4 implies 5; B with 5 implies 4; T with 5 implies B).
AxiomSet canonical_axioms(AxiomSet axioms);

struct FrameClass {
  AxiomSet axioms = 0;  // canonical
  std::string name;     // the name it was parsed from, if any
};

/// Accepts the fifteen modal-cube names (K, D, T, B, K4, D4, S4, K5, D5, K45,
/// D45, KB4, KB45, TB, S5) plus DB. Throws std::invalid_argument otherwise.
FrameClass parse_frame_class(const std::string& name);
std::string axioms_to_string(AxiomSet axioms);

struct KripkeStructure {
  int n = 0;
  std::vector<Bitset> succ;            // succ[w] = successors of w
  std::map<std::string, Bitset> val;   // variable -> worlds where it holds

  explicit KripkeStructure(int worlds = 0) : n(worlds), succ(worlds, Bitset(worlds)) {}

  void add_edge(int from, int to) { succ[from].set(to); }
  bool has_edge(int from, int to) const { return succ[from].test(to); }
  void declare(const std::string& var) {
    if (!val.count(var)) val.emplace(var, Bitset(n));
  }
  void set_val(const std::string& var, int w) {
    declare(var);
    val.at(var).set(w);
  }
  bool holds(const std::string& var, int w) const {
    auto it = val.find(var);
    return it != val.end() && it->second.test(w);
  }
};

bool same_structure(const KripkeStructure& a, const KripkeStructure& b);

/// Predecessor rows (the transpose of succ).
std::vector<Bitset> predecessor_rows(const KripkeStructure& a);

/// The axioms the frame actually satisfies, each checked directly.
AxiomSet frame_axioms(const KripkeStructure& a);
bool in_class(const KripkeStructure& a, const FrameClass& f);

/// Worlds with no predecessor.
Bitset lanterns(const KripkeStructure& a);
Bitset inner_worlds(const KripkeStructure& a);

/// {w} together with all worlds mutually related to w.
Bitset clique_of(const KripkeStructure& a, int w);

struct CliqueInfo {
  Bitset members;
  bool proper;  // every two (not necessarily distinct) members related; singletons exempt from the loop requirement
};

/// Partition of the worlds into equivalence classes of the mutual-edge
/// relation. In transitive or euclidean structures these are the R-cliques.
std::vector<CliqueInfo> cliques(const KripkeStructure& a);

bool is_connected(const KripkeStructure& a);
std::vector<Bitset> connected_components(const KripkeStructure& a);

struct DepthResult {
  bool infinite = false;  // strict-successor cycle (possible on non-transitive frames)
  std::uint64_t value = 0;
};

/// Longest chain of strict successors (w strictly sees v when wRv but not vRw).
DepthResult depth(const KripkeStructure& a);
DepthResult world_depth(const KripkeStructure& a, int w);

/// Largest clique size.
int width(const KripkeStructure& a);

/// Largest family of pairwise-disjoint cliques of direct successors of a
/// single world. v is a direct successor of w when wRv strictly and every
/// intermediate u (wRu and uRv) lies in clique_of(w) or clique_of(v).
int breadth(const KripkeStructure& a);

KripkeStructure transitive_closure(KripkeStructure a);
KripkeStructure reflexive_closure(KripkeStructure a);
KripkeStructure euclidean_closure(KripkeStructure a);
KripkeStructure serial_completion(KripkeStructure a);

/// Restriction of `a` to `keep`, reindexing surviving worlds in increasing
/// order. `old_to_new`, when given, receives the index mapping (-1 = dropped).
KripkeStructure induced_substructure(const KripkeStructure& a, const Bitset& keep,
                                     std::vector<int>* old_to_new = nullptr);

/// Streams every structure over n fixed worlds and the given variables whose
/// frame lies in the class, each exactly once, in lexicographic order of the
/// per-world blocks (world 0's variable bits in sorted-name order, then world
/// 0's successor row, then world 1, ...). The callback returns false to stop.
/// Throws std::invalid_argument when n*n + n*|vars| exceeds the bit budget.
void enumerate_models(int n, const std::vector<std::string>& vars, const FrameClass& f,
                      std::uint64_t bit_budget,
                      const std::function<bool(const KripkeStructure&)>& cb);

/// Text format: "worlds N", then "edge i j" and "val p: i j k" lines,
/// '#' comments. Parse errors carry the line number.
KripkeStructure parse_model(const std::string& text);
std::string render_model(const KripkeStructure& a);
std::string to_dot(const KripkeStructure& a);

}  // namespace gml
