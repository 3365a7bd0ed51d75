#include "gml/solvers.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gml/sat.hpp"
#include "gml/semantics.hpp"

namespace gml {

namespace {

// ---------------------------------------------------------------------------
// Shared formula indexing: distinct core subformulas in postorder with child
// and variable indices resolved, so the searches below never compare formula
// trees in their inner loops.

struct FormulaIndex {
  std::vector<Formula> subs;
  std::vector<int> left;   // -1 when absent
  std::vector<int> right;  // -1 when absent
  std::vector<int> varid;  // atoms: index into vars, else -1
  std::vector<std::string> vars;
  std::vector<int> roots;  // one per requested root
};

FormulaIndex build_index(const std::vector<Formula>& roots) {
  FormulaIndex ix;
  std::set<std::string> vs;
  for (const Formula& r : roots)
    for (const std::string& v : variables(r)) vs.insert(v);
  ix.vars.assign(vs.begin(), vs.end());
  std::map<std::string, int> vpos;
  for (std::size_t i = 0; i < ix.vars.size(); ++i) vpos[ix.vars[i]] = static_cast<int>(i);

  std::map<std::string, int> known;
  std::function<int(const Formula&)> walk = [&](const Formula& f) -> int {
    std::string key = render(f);
    auto it = known.find(key);
    if (it != known.end()) return it->second;
    int l = f->lhs ? walk(f->lhs) : -1;
    int r = f->rhs ? walk(f->rhs) : -1;
    int id = static_cast<int>(ix.subs.size());
    ix.subs.push_back(f);
    ix.left.push_back(l);
    ix.right.push_back(r);
    ix.varid.push_back(f->kind == Conn::Atom ? vpos.at(f->name) : -1);
    known.emplace(std::move(key), id);
    return id;
  };
  for (const Formula& r : roots) ix.roots.push_back(walk(r));
  return ix;
}

// ---------------------------------------------------------------------------
// Verdict verification: every Satisfiable answer is re-derived from the model
// with the ordinary evaluator before it leaves this translation unit.

SatVerdict verified_sat(KripkeStructure m, std::optional<int> witness, const FrameClass& fc,
                        SatMode mode, const Formula& f_main, const Formula* f_local) {
  if (!in_class(m, fc)) throw std::logic_error("satisfiability: model fails the frame check");
  switch (mode) {
    case SatMode::Local:
      if (!witness || !satisfies(m, *witness, f_main))
        throw std::logic_error("satisfiability: witness check failed");
      break;
    case SatMode::Global:
      if (!globally_satisfies(m, f_main))
        throw std::logic_error("satisfiability: global check failed");
      break;
    case SatMode::Combined:
      if (!witness || f_local == nullptr || !globally_satisfies(m, f_main) ||
          !satisfies(m, *witness, *f_local))
        throw std::logic_error("satisfiability: combined check failed");
      break;
  }
  SatVerdict v;
  v.status = SatStatus::Satisfiable;
  v.model = std::move(m);
  v.witness = witness;
  return v;
}

// ---------------------------------------------------------------------------
// Bounded oracle: depth-first extension of per-world (valuation, successor
// row) prefixes in the order of enumerate_models, pruned by definite frame
// violations and a three-valued evaluation of the query.

constexpr signed char kF = -1;
constexpr signed char kU = 0;
constexpr signed char kT = 1;

struct OracleSearch {
  const FormulaIndex& ix;
  const FrameClass& fc;
  SatMode mode;
  const Formula& orig_main;
  const Formula* orig_local;
  int main_root;
  int local_root;

  int n = 0;
  KripkeStructure a;
  int vw = 0;  // worlds with the valuation block assigned
  int rw = 0;  // worlds with the successor row assigned
  std::vector<std::vector<signed char>> tri;

  bool found = false;
  KripkeStructure result;
  std::optional<int> witness;

  OracleSearch(const FormulaIndex& ix_, const FrameClass& fc_, SatMode mode_,
               const Formula& main_, const Formula* local_)
      : ix(ix_), fc(fc_), mode(mode_), orig_main(main_), orig_local(local_),
        main_root(ix_.roots.at(0)), local_root(ix_.roots.size() > 1 ? ix_.roots.at(1) : -1) {}

  void reset(int worlds) {
    n = worlds;
    a = KripkeStructure(worlds);
    for (const std::string& v : ix.vars) a.declare(v);
    vw = rw = 0;
    tri.assign(ix.subs.size(), std::vector<signed char>(worlds, kU));
  }

  /// A frame-axiom violation among fully assigned rows; such a violation
  /// survives any completion of the structure.
  bool frame_violated() const {
    AxiomSet ax = fc.axioms;
    for (int i = 0; i < rw; ++i) {
      const Bitset& ri = a.succ[i];
      if ((ax & AX_D) && ri.none()) return true;
      if ((ax & AX_T) && !ri.test(i)) return true;
      if ((ax & (AX_B | AX_4 | AX_5)) != 0) {
        for (int j = ri.first(); j >= 0; j = ri.next(j)) {
          if (j >= rw) continue;
          if ((ax & AX_B) && !a.succ[j].test(i)) return true;
          if ((ax & AX_4) && !a.succ[j].subset_of(ri)) return true;
          if ((ax & AX_5) && !ri.subset_of(a.succ[j])) return true;
        }
      }
    }
    return false;
  }

  void eval_tri() {
    for (std::size_t s = 0; s < ix.subs.size(); ++s) {
      const FormulaNode& f = *ix.subs[s];
      std::vector<signed char>& row = tri[s];
      switch (f.kind) {
        case Conn::Atom: {
          const Bitset& vb = a.val.at(ix.vars[ix.varid[s]]);
          for (int w = 0; w < n; ++w) row[w] = w < vw ? (vb.test(w) ? kT : kF) : kU;
          break;
        }
        case Conn::True:
          std::fill(row.begin(), row.end(), kT);
          break;
        case Conn::False:
          std::fill(row.begin(), row.end(), kF);
          break;
        case Conn::Not: {
          const auto& l = tri[ix.left[s]];
          for (int w = 0; w < n; ++w) row[w] = static_cast<signed char>(-l[w]);
          break;
        }
        case Conn::And: {
          const auto& l = tri[ix.left[s]];
          const auto& r = tri[ix.right[s]];
          for (int w = 0; w < n; ++w) row[w] = std::min(l[w], r[w]);
          break;
        }
        case Conn::Or: {
          const auto& l = tri[ix.left[s]];
          const auto& r = tri[ix.right[s]];
          for (int w = 0; w < n; ++w) row[w] = std::max(l[w], r[w]);
          break;
        }
        case Conn::Implies: {
          const auto& l = tri[ix.left[s]];
          const auto& r = tri[ix.right[s]];
          for (int w = 0; w < n; ++w)
            row[w] = std::max(static_cast<signed char>(-l[w]), r[w]);
          break;
        }
        case Conn::Iff: {
          const auto& l = tri[ix.left[s]];
          const auto& r = tri[ix.right[s]];
          for (int w = 0; w < n; ++w)
            row[w] = (l[w] == kU || r[w] == kU) ? kU : (l[w] == r[w] ? kT : kF);
          break;
        }
        case Conn::DiaGeq: {
          const auto& body = tri[ix.left[s]];
          if (f.grade == 0) {
            std::fill(row.begin(), row.end(), kT);
            break;
          }
          std::uint64_t poss_all = 0;
          for (int u = 0; u < n; ++u)
            if (body[u] != kF) ++poss_all;
          for (int w = 0; w < n; ++w) {
            if (w < rw) {
              std::uint64_t ct = 0, cp = 0;
              a.succ[w].for_each([&](int u) {
                if (body[u] == kT) ++ct;
                if (body[u] != kF) ++cp;
              });
              row[w] = ct >= f.grade ? kT : (cp < f.grade ? kF : kU);
            } else {
              row[w] = poss_all < f.grade ? kF : kU;
            }
          }
          break;
        }
        case Conn::InvDiaGeq: {
          const auto& body = tri[ix.left[s]];
          if (f.grade == 0) {
            std::fill(row.begin(), row.end(), kT);
            break;
          }
          std::uint64_t unknown_poss = 0;
          for (int u = rw; u < n; ++u)
            if (body[u] != kF) ++unknown_poss;
          for (int w = 0; w < n; ++w) {
            std::uint64_t ct = 0, cp = 0;
            for (int u = 0; u < rw; ++u) {
              if (!a.succ[u].test(w)) continue;
              if (body[u] == kT) ++ct;
              if (body[u] != kF) ++cp;
            }
            cp += unknown_poss;
            row[w] = ct >= f.grade ? kT : (cp < f.grade ? kF : kU);
          }
          break;
        }
        default:
          throw std::logic_error("bounded_sat: formula was not desugared");
      }
    }
  }

  /// The query is false in every completion of the current prefix.
  bool query_refuted() {
    eval_tri();
    const auto& m = tri[main_root];
    switch (mode) {
      case SatMode::Local: {
        for (int w = 0; w < n; ++w)
          if (m[w] != kF) return false;
        return true;
      }
      case SatMode::Global: {
        for (int w = 0; w < n; ++w)
          if (m[w] == kF) return true;
        return false;
      }
      case SatMode::Combined: {
        for (int w = 0; w < n; ++w)
          if (m[w] == kF) return true;
        const auto& l = tri[local_root];
        for (int w = 0; w < n; ++w)
          if (l[w] != kF) return false;
        return true;
      }
    }
    return false;
  }

  bool leaf() {
    if (!in_class(a, fc)) return true;
    switch (mode) {
      case SatMode::Local: {
        std::optional<int> w = locally_satisfied(a, orig_main);
        if (!w) return true;
        witness = w;
        break;
      }
      case SatMode::Global: {
        if (!globally_satisfies(a, orig_main)) return true;
        witness = std::nullopt;
        break;
      }
      case SatMode::Combined: {
        std::optional<int> w = combined_satisfies(a, orig_main, *orig_local);
        if (!w) return true;
        witness = w;
        break;
      }
    }
    found = true;
    result = a;
    return false;
  }

  bool world(int w) {
    if (w == n) return leaf();
    return value_block(w, 0);
  }

  bool value_block(int w, std::size_t vi) {
    if (vi == ix.vars.size()) {
      vw = w + 1;
      bool keep = query_refuted() ? true : row_block(w, 0);
      vw = w;
      return keep;
    }
    Bitset& vb = a.val.at(ix.vars[vi]);
    vb.reset(w);
    if (!value_block(w, vi + 1)) return false;
    vb.set(w);
    if (!value_block(w, vi + 1)) return false;
    vb.reset(w);
    return true;
  }

  bool row_block(int w, int j) {
    if (j == n) {
      rw = w + 1;
      bool keep = true;
      if (!frame_violated() && !query_refuted()) keep = world(w + 1);
      rw = w;
      return keep;
    }
    Bitset& sr = a.succ[w];
    sr.reset(j);
    if (!row_block(w, j + 1)) return false;
    sr.set(j);
    if (!row_block(w, j + 1)) return false;
    sr.reset(j);
    return true;
  }
};

}  // namespace

SatVerdict bounded_sat(const SatQuery& q, std::uint64_t bit_budget) {
  if (q.bound < 1) throw std::invalid_argument("bounded_sat: bound must be at least 1");
  if (q.mode == SatMode::Combined && !q.local_part)
    throw std::invalid_argument("bounded_sat: combined mode needs a local part");
  if (q.mode != SatMode::Combined && q.local_part)
    throw std::invalid_argument("bounded_sat: local part is only for combined mode");

  Formula main_d = desugar(q.formula);
  std::vector<Formula> roots{main_d};
  if (q.mode == SatMode::Combined) roots.push_back(desugar(*q.local_part));
  FormulaIndex ix = build_index(roots);

  std::uint64_t need = static_cast<std::uint64_t>(q.bound) * q.bound +
                       static_cast<std::uint64_t>(q.bound) * ix.vars.size();
  if (need > bit_budget)
    throw std::invalid_argument("bounded_sat: enumeration needs " + std::to_string(need) +
                                " bits, budget is " + std::to_string(bit_budget));

  const Formula* local = q.mode == SatMode::Combined ? &*q.local_part : nullptr;
  OracleSearch search(ix, q.frame_class, q.mode, q.formula, local);
  for (int worlds = 1; worlds <= q.bound; ++worlds) {
    search.reset(worlds);
    if (!search.world(0)) break;
  }
  if (search.found)
    return verified_sat(std::move(search.result), search.witness, q.frame_class, q.mode,
                        q.formula, local);

  SatVerdict v;
  v.status = SatStatus::NoModelWithinBound;
  std::string cls = q.frame_class.name.empty() ? axioms_to_string(q.frame_class.axioms)
                                               : q.frame_class.name;
  v.reason = "no model with at most " + std::to_string(q.bound) + " worlds in class " + cls;
  return v;
}

// ---------------------------------------------------------------------------
// Transitive euclidean satisfiability. A connected model in this class is one
// reflexive clique Q plus predecessor-free worlds that each see all of Q, so
// the truth of a subformula at a world depends only on the world's 1-type and
// on which side of that split it lies: successor counts are counts over Q for
// every world, and predecessor counts are counts over the whole structure for
// clique members and zero for the rest. Satisfiability therefore reduces to
// choosing how many worlds realize each (1-type, side) cell, with counts
// capped just above the largest grade; for each guess of the modal atoms'
// truth values the cell counts obey a small system of linear threshold
// constraints, searched depth first.

namespace {

struct CellConstraint {
  std::vector<int> cells;  // support, ascending
  std::uint64_t lo = 0;
  std::uint64_t hi = UINT64_MAX;
};

/// Depth-first search for cell counts in 0..cap satisfying all constraints;
/// counts are tried in ascending order, so the first hit is lexicographically
/// least. Returns an empty vector when infeasible.
std::vector<std::uint64_t> solve_cells(int num_cells, std::uint64_t cap,
                                       const std::vector<CellConstraint>& cons) {
  std::vector<std::vector<int>> member(cons.size());  // constraint -> per-cell flag
  std::vector<std::vector<std::uint64_t>> remaining(cons.size());
  for (std::size_t c = 0; c < cons.size(); ++c) {
    member[c].assign(num_cells, 0);
    for (int cell : cons[c].cells) member[c][cell] = 1;
    remaining[c].assign(num_cells + 1, 0);
    for (int cell = num_cells - 1; cell >= 0; --cell)
      remaining[c][cell] = remaining[c][cell + 1] + member[c][cell];
  }
  std::vector<std::uint64_t> sum(cons.size(), 0);
  std::vector<std::uint64_t> counts(num_cells, 0);
  std::function<bool(int)> dfs = [&](int cell) -> bool {
    for (std::size_t c = 0; c < cons.size(); ++c) {
      if (sum[c] > cons[c].hi) return false;
      if (sum[c] + cap * remaining[c][cell] < cons[c].lo) return false;
    }
    if (cell == num_cells) return true;
    for (std::uint64_t v = 0; v <= cap; ++v) {
      counts[cell] = v;
      if (v > 0)
        for (std::size_t c = 0; c < cons.size(); ++c)
          if (member[c][cell]) sum[c] += 1;
      if (dfs(cell + 1)) return true;
      if (v == cap) {
        for (std::size_t c = 0; c < cons.size(); ++c)
          if (member[c][cell]) sum[c] -= v;
        counts[cell] = 0;
      }
    }
    return false;
  };
  if (!dfs(0)) return {};
  return counts;
}

}  // namespace

SatVerdict sat_k45(const Formula& f, bool serial) {
  Formula fd = desugar(f);
  FormulaIndex ix = build_index({fd});
  const int root = ix.roots[0];
  const int V = static_cast<int>(ix.vars.size());
  if (V > 8) throw std::invalid_argument("sat_k45: too many variables for the profile search");

  std::vector<int> modal;
  for (std::size_t s = 0; s < ix.subs.size(); ++s) {
    Conn k = ix.subs[s]->kind;
    if ((k == Conn::DiaGeq || k == Conn::InvDiaGeq) && ix.subs[s]->grade >= 1)
      modal.push_back(static_cast<int>(s));
  }
  if (modal.size() > 20)
    throw std::invalid_argument("sat_k45: too many modal subformulas for the profile search");

  const std::uint64_t cap = max_grade(fd) + 2;  // one past M = max grade + 1
  const int ct = 1 << V;   // 1-types
  const int C = 2 * ct;    // cells: [0, ct) clique side, [ct, 2ct) lantern side

  for (std::uint32_t guess = 0; guess < (1u << modal.size()); ++guess) {
    // Truth of every subformula at every cell under this guess.
    std::vector<std::vector<char>> tt(ix.subs.size(), std::vector<char>(C, 0));
    for (std::size_t s = 0; s < ix.subs.size(); ++s) {
      const FormulaNode& node = *ix.subs[s];
      auto& row = tt[s];
      switch (node.kind) {
        case Conn::Atom:
          for (int c = 0; c < C; ++c) {
            int type = c < ct ? c : c - ct;
            row[c] = (type >> ix.varid[s]) & 1;
          }
          break;
        case Conn::True:
          std::fill(row.begin(), row.end(), 1);
          break;
        case Conn::False:
          break;
        case Conn::Not:
          for (int c = 0; c < C; ++c) row[c] = !tt[ix.left[s]][c];
          break;
        case Conn::And:
          for (int c = 0; c < C; ++c) row[c] = tt[ix.left[s]][c] && tt[ix.right[s]][c];
          break;
        case Conn::Or:
          for (int c = 0; c < C; ++c) row[c] = tt[ix.left[s]][c] || tt[ix.right[s]][c];
          break;
        case Conn::Implies:
          for (int c = 0; c < C; ++c) row[c] = !tt[ix.left[s]][c] || tt[ix.right[s]][c];
          break;
        case Conn::Iff:
          for (int c = 0; c < C; ++c) row[c] = tt[ix.left[s]][c] == tt[ix.right[s]][c];
          break;
        case Conn::DiaGeq: {
          char b = node.grade == 0
                       ? 1
                       : static_cast<char>((guess >> (std::find(modal.begin(), modal.end(),
                                                                static_cast<int>(s)) -
                                                      modal.begin())) &
                                           1);
          std::fill(row.begin(), row.end(), b);
          break;
        }
        case Conn::InvDiaGeq: {
          if (node.grade == 0) {
            std::fill(row.begin(), row.end(), 1);
            break;
          }
          char b = static_cast<char>(
              (guess >> (std::find(modal.begin(), modal.end(), static_cast<int>(s)) -
                         modal.begin())) &
              1);
          for (int c = 0; c < ct; ++c) row[c] = b;  // clique side only
          break;
        }
        default:
          throw std::logic_error("sat_k45: formula was not desugared");
      }
    }

    // Threshold constraints tying the guessed truth values to the counts.
    std::vector<CellConstraint> cons;
    for (std::size_t mi = 0; mi < modal.size(); ++mi) {
      const int s = modal[mi];
      const FormulaNode& node = *ix.subs[s];
      const auto& body = tt[ix.left[s]];
      CellConstraint cc;
      if (node.kind == Conn::DiaGeq) {
        // Every world sees exactly the clique.
        for (int c = 0; c < ct; ++c)
          if (body[c]) cc.cells.push_back(c);
      } else {
        // Clique members are seen by every world, lanterns by none.
        for (int c = 0; c < C; ++c)
          if (body[c]) cc.cells.push_back(c);
      }
      if ((guess >> mi) & 1) {
        cc.lo = node.grade;
      } else {
        cc.hi = node.grade - 1;
      }
      cons.push_back(std::move(cc));
    }
    {
      CellConstraint wit;
      for (int c = 0; c < C; ++c)
        if (tt[root][c]) wit.cells.push_back(c);
      wit.lo = 1;
      cons.push_back(std::move(wit));
    }
    if (serial) {
      CellConstraint ser;
      for (int c = 0; c < ct; ++c) ser.cells.push_back(c);
      ser.lo = 1;
      cons.push_back(std::move(ser));
    }

    std::vector<std::uint64_t> counts = solve_cells(C, cap, cons);
    if (counts.empty()) continue;

    // Materialize: clique worlds first, then lanterns; every world sees all
    // clique worlds and nothing else.
    int total = 0;
    for (std::uint64_t c : counts) total += static_cast<int>(c);
    KripkeStructure m(total);
    for (const std::string& v : ix.vars) m.declare(v);
    std::vector<int> cell_of_world;
    for (int c = 0; c < C; ++c)
      for (std::uint64_t i = 0; i < counts[c]; ++i) cell_of_world.push_back(c);
    int clique_size = 0;
    for (int c = 0; c < ct; ++c) clique_size += static_cast<int>(counts[c]);
    for (int w = 0; w < total; ++w) {
      for (int u = 0; u < clique_size; ++u) m.add_edge(w, u);
      int type = cell_of_world[w] < ct ? cell_of_world[w] : cell_of_world[w] - ct;
      for (int v = 0; v < V; ++v)
        if ((type >> v) & 1) m.set_val(ix.vars[v], w);
    }

    FrameClass fc;
    fc.axioms = canonical_axioms(AX_4 | AX_5 | (serial ? AX_D : 0));
    fc.name = serial ? "D45" : "K45";
    std::optional<int> w = locally_satisfied(m, f);
    if (!w) throw std::logic_error("sat_k45: produced model fails verification");
    return verified_sat(std::move(m), w, fc, SatMode::Local, f, nullptr);
  }

  SatVerdict v;
  v.status = SatStatus::Unsatisfiable;
  v.reason = "profile search exhausted: no clique-and-lantern profile satisfies the formula";
  return v;
}

// ---------------------------------------------------------------------------
// Euclidean satisfiability within caps. Connected euclidean models are one
// reflexive clique plus predecessor-free worlds seeing an arbitrary nonempty
// part of it (or nothing), so the search space is a clique of at most
// max_grade + 1 slots and lantern_budget lantern slots with chosen
// illumination edges, encoded propositionally and handed to the clause
// learner. Grades become sequential-counter thresholds.

SatVerdict sat_k5(const Formula& f, bool serial, int lantern_budget) {
  if (lantern_budget < 0)
    throw std::invalid_argument("sat_k5: lantern budget must be nonnegative");
  Formula fd = desugar(f);
  FormulaIndex ix = build_index({fd});
  const int root = ix.roots[0];
  const int V = static_cast<int>(ix.vars.size());
  const std::uint64_t mg = max_grade(fd);
  if (mg > 30) throw std::invalid_argument("sat_k5: grades too large for the clique cap");
  const int Ni = static_cast<int>(mg) + 1;
  const int Nl = lantern_budget;

  SatSolver sat;
  std::vector<int> act(Ni), lact(Nl);
  std::vector<std::vector<int>> t(Ni, std::vector<int>(V));
  std::vector<std::vector<int>> lt(Nl, std::vector<int>(V));
  std::vector<std::vector<int>> e(Nl, std::vector<int>(Ni));
  for (int i = 0; i < Ni; ++i) act[i] = sat.new_var();
  for (int j = 0; j < Nl; ++j) lact[j] = sat.new_var();
  for (int i = 0; i < Ni; ++i)
    for (int v = 0; v < V; ++v) t[i][v] = sat.new_var();
  for (int j = 0; j < Nl; ++j)
    for (int v = 0; v < V; ++v) lt[j][v] = sat.new_var();
  for (int j = 0; j < Nl; ++j)
    for (int i = 0; i < Ni; ++i) e[j][i] = sat.new_var();

  // Activation chains break slot symmetry; illumination implies activation.
  for (int i = 1; i < Ni; ++i) sat.add_clause({lit_neg(mk_lit(act[i])), mk_lit(act[i - 1])});
  for (int j = 1; j < Nl; ++j) sat.add_clause({lit_neg(mk_lit(lact[j])), mk_lit(lact[j - 1])});
  for (int j = 0; j < Nl; ++j)
    for (int i = 0; i < Ni; ++i) {
      sat.add_clause({lit_neg(mk_lit(e[j][i])), mk_lit(lact[j])});
      sat.add_clause({lit_neg(mk_lit(e[j][i])), mk_lit(act[i])});
    }

  // Truth circuits per subformula: Ti over clique slots, Tl over lanterns.
  std::vector<std::vector<Lit>> Ti(ix.subs.size(), std::vector<Lit>(Ni));
  std::vector<std::vector<Lit>> Tl(ix.subs.size(), std::vector<Lit>(Nl));
  for (std::size_t s = 0; s < ix.subs.size(); ++s) {
    const FormulaNode& node = *ix.subs[s];
    switch (node.kind) {
      case Conn::Atom:
        for (int i = 0; i < Ni; ++i) Ti[s][i] = mk_lit(t[i][ix.varid[s]]);
        for (int j = 0; j < Nl; ++j) Tl[s][j] = mk_lit(lt[j][ix.varid[s]]);
        break;
      case Conn::True:
        for (int i = 0; i < Ni; ++i) Ti[s][i] = sat.constant(true);
        for (int j = 0; j < Nl; ++j) Tl[s][j] = sat.constant(true);
        break;
      case Conn::False:
        for (int i = 0; i < Ni; ++i) Ti[s][i] = sat.constant(false);
        for (int j = 0; j < Nl; ++j) Tl[s][j] = sat.constant(false);
        break;
      case Conn::Not:
        for (int i = 0; i < Ni; ++i) Ti[s][i] = lit_neg(Ti[ix.left[s]][i]);
        for (int j = 0; j < Nl; ++j) Tl[s][j] = lit_neg(Tl[ix.left[s]][j]);
        break;
      case Conn::And:
        for (int i = 0; i < Ni; ++i)
          Ti[s][i] = sat.make_and(Ti[ix.left[s]][i], Ti[ix.right[s]][i]);
        for (int j = 0; j < Nl; ++j)
          Tl[s][j] = sat.make_and(Tl[ix.left[s]][j], Tl[ix.right[s]][j]);
        break;
      case Conn::Or:
        for (int i = 0; i < Ni; ++i)
          Ti[s][i] = sat.make_or(Ti[ix.left[s]][i], Ti[ix.right[s]][i]);
        for (int j = 0; j < Nl; ++j)
          Tl[s][j] = sat.make_or(Tl[ix.left[s]][j], Tl[ix.right[s]][j]);
        break;
      case Conn::Implies:
        for (int i = 0; i < Ni; ++i)
          Ti[s][i] = sat.make_or(lit_neg(Ti[ix.left[s]][i]), Ti[ix.right[s]][i]);
        for (int j = 0; j < Nl; ++j)
          Tl[s][j] = sat.make_or(lit_neg(Tl[ix.left[s]][j]), Tl[ix.right[s]][j]);
        break;
      case Conn::Iff:
        for (int i = 0; i < Ni; ++i)
          Ti[s][i] = sat.make_iff(Ti[ix.left[s]][i], Ti[ix.right[s]][i]);
        for (int j = 0; j < Nl; ++j)
          Tl[s][j] = sat.make_iff(Tl[ix.left[s]][j], Tl[ix.right[s]][j]);
        break;
      case Conn::DiaGeq: {
        // Successors of every world are exactly the active clique slots, so
        // one threshold serves all clique slots; each lantern counts over its
        // own illumination edges.
        std::vector<Lit> terms;
        for (int k = 0; k < Ni; ++k)
          terms.push_back(sat.make_and(mk_lit(act[k]), Ti[ix.left[s]][k]));
        Lit shared = sat.at_least(terms, node.grade);
        for (int i = 0; i < Ni; ++i) Ti[s][i] = shared;
        for (int j = 0; j < Nl; ++j) {
          std::vector<Lit> lterms;
          for (int k = 0; k < Ni; ++k)
            lterms.push_back(sat.make_and(mk_lit(e[j][k]), Ti[ix.left[s]][k]));
          Tl[s][j] = sat.at_least(lterms, node.grade);
        }
        break;
      }
      case Conn::InvDiaGeq: {
        // Predecessors of clique slot i: every active clique slot plus the
        // lanterns illuminating i. Lanterns have no predecessors.
        for (int i = 0; i < Ni; ++i) {
          std::vector<Lit> terms;
          for (int k = 0; k < Ni; ++k)
            terms.push_back(sat.make_and(mk_lit(act[k]), Ti[ix.left[s]][k]));
          for (int j = 0; j < Nl; ++j)
            terms.push_back(sat.make_and(mk_lit(e[j][i]), Tl[ix.left[s]][j]));
          Ti[s][i] = sat.at_least(terms, node.grade);
        }
        for (int j = 0; j < Nl; ++j) Tl[s][j] = sat.constant(node.grade == 0);
        break;
      }
      default:
        throw std::logic_error("sat_k5: formula was not desugared");
    }
  }

  std::vector<Lit> hits;
  for (int i = 0; i < Ni; ++i) hits.push_back(sat.make_and(mk_lit(act[i]), Ti[root][i]));
  for (int j = 0; j < Nl; ++j) hits.push_back(sat.make_and(mk_lit(lact[j]), Tl[root][j]));
  sat.add_unit(sat.make_or(hits));

  if (serial) {
    sat.add_unit(mk_lit(act[0]));
    for (int j = 0; j < Nl; ++j) {
      std::vector<Lit> cl{lit_neg(mk_lit(lact[j]))};
      for (int i = 0; i < Ni; ++i) cl.push_back(mk_lit(e[j][i]));
      sat.add_clause(cl);
    }
  }

  if (sat.solve()) {
    std::vector<int> inner_slots, lantern_slots;
    for (int i = 0; i < Ni; ++i)
      if (sat.model_value(act[i])) inner_slots.push_back(i);
    for (int j = 0; j < Nl; ++j)
      if (sat.model_value(lact[j])) lantern_slots.push_back(j);
    int n = static_cast<int>(inner_slots.size() + lantern_slots.size());
    KripkeStructure m(n);
    for (const std::string& v : ix.vars) m.declare(v);
    int ci = static_cast<int>(inner_slots.size());
    for (int a = 0; a < ci; ++a)
      for (int b = 0; b < ci; ++b) m.add_edge(a, b);
    for (std::size_t lj = 0; lj < lantern_slots.size(); ++lj)
      for (int b = 0; b < ci; ++b)
        if (sat.model_value(e[lantern_slots[lj]][inner_slots[b]]))
          m.add_edge(ci + static_cast<int>(lj), b);
    for (int a = 0; a < ci; ++a)
      for (int v = 0; v < V; ++v)
        if (sat.model_value(t[inner_slots[a]][v])) m.set_val(ix.vars[v], a);
    for (std::size_t lj = 0; lj < lantern_slots.size(); ++lj)
      for (int v = 0; v < V; ++v)
        if (sat.model_value(lt[lantern_slots[lj]][v]))
          m.set_val(ix.vars[v], ci + static_cast<int>(lj));

    FrameClass fc;
    fc.axioms = canonical_axioms(AX_5 | (serial ? AX_D : 0));
    fc.name = serial ? "D5" : "K5";
    std::optional<int> w = locally_satisfied(m, f);
    if (!w) throw std::logic_error("sat_k5: produced model fails verification");
    return verified_sat(std::move(m), w, fc, SatMode::Local, f, nullptr);
  }

  SatVerdict v;
  v.status = SatStatus::NoModelWithinBound;
  v.reason = "structured search exhausted (clique cap " + std::to_string(Ni) +
             ", lantern budget " + std::to_string(Nl) + ")";
  return v;
}

Formula global_to_local(const Formula& f) { return land(f, box(box(inv_box(f)))); }

Formula local_to_global(const Formula& f) {
  Formula nf = lnot(f);
  return lnot(land(nf, box(box(inv_box(nf)))));
}

}  // namespace gml
